#pragma once

#include <Eigen/Sparse>
#include <optional>

#include "crossmax/matrix_field.hpp"

namespace crossmax {

/// Full system data for -div(A DW) + B DW + kW - KW = F with homogeneous
/// Dirichlet conditions. B is applied per axis (one MatrixField per axis).
struct Problem {
  Grid grid;
  int m = 1;
  MatrixField A;
  std::vector<MatrixField> B_axes;  // empty means no first-order term
  MatrixField K;
  double k = 0.0;
  VectorField F;
};

/// Assembled sparse operator on interior unknowns, component-major blocking.
struct DiscreteOperator {
  Grid grid;
  int m = 1;
  Eigen::SparseMatrix<double> matrix;
  bool symmetric = false;
  bool peclet_warning = false;      // |b| h / (2a) > 1 somewhere
  bool degenerate_warning = false;  // some A eigenvalue has zero real part

  int size() const { return m * grid.interior_count(); }
};

/// Interior coefficient vector from nodal fields and back (zero boundary).
Eigen::VectorXd restrict_interior(const VectorField& W, const Grid& grid, int m);
VectorField extend_interior(const Eigen::VectorXd& v, const Grid& grid, int m);

DiscreteOperator assemble_system(const Problem& p);

/// Scalar operator -div(a Dz) + b.Dz + c z; symmetric flag set iff b == 0.
DiscreteOperator assemble_scalar(const ScalarField& a,
                                 const std::vector<ScalarField>& b_axes,
                                 const ScalarField& c, const Grid& grid);

VectorField apply(const DiscreteOperator& op, const VectorField& W);

}  // namespace crossmax
