#pragma once

#include "crossmax/discrete_operator.hpp"

namespace crossmax {

/// Direct sparse solve with residual verification.
VectorField solve(const DiscreteOperator& op, const VectorField& rhs);
Eigen::VectorXd solve_vec(const DiscreteOperator& op, const Eigen::VectorXd& rhs);

struct EigenPair {
  double lambda1 = 0.0;
  VectorField phi;  // sup-norm 1, positive interior
};

/// Smallest eigenvalue and positive eigenfunction via inverse power
/// iteration (all-ones seed, relative tolerance 1e-12).
EigenPair principal_eigenpair(const DiscreteOperator& op);

/// Cached principal eigenfunction of the Dirichlet Laplacian, sup-norm 1.
const ScalarField& laplace_phi1(const Grid& grid);
double laplace_lambda1(const Grid& grid);

struct GreenColumns {
  std::vector<int> sources;              // source node indices y
  std::vector<ScalarField> columns;      // G(.,y) per source
  std::vector<std::vector<ScalarField>> grad_x;  // per source, per axis
};

/// Columns of the discrete Green function: one solve per source with rhs
/// delta_y / h^dim, plus their x-gradients.
GreenColumns green_columns(const DiscreteOperator& op, const std::vector<int>& sources);

/// Deterministic source subsample: every `stride`-th interior node in 1D, a
/// lattice of about density x density interior nodes in 2D.
std::vector<int> default_green_sources(const Grid& grid, int density = 8);

struct GreenSignReport {
  bool holds = false;
  // One row per pair (i,j), i>j: minimum of <c_ij(x), DxG_j(x,y)> over samples.
  struct PairResult {
    int i, j;
    double min_value;
    int worst_x, worst_y;
  };
  std::vector<PairResult> pairs;
  double tol_used = 0.0;
};

/// Checks <c_ij(x), DxG_j(x,y)> >= -tol for all i>j over the sampled (x,y).
/// c_fields[i][j] holds the per-axis components of c_ij (lower part only).
GreenSignReport green_sign_condition(
    const std::vector<std::vector<std::vector<ScalarField>>>& c_fields,
    const std::vector<GreenColumns>& greens_per_j, const Grid& grid);

}  // namespace crossmax
