#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crossmax/matrix_field.hpp"

namespace crossmax {

enum class TriMode { Lower, Upper, Diagonal };

bool is_cooperative(const ConstMatrix& M, double tol = 0.0);
bool is_triangular(const ConstMatrix& M, double tol, TriMode mode);
bool is_triangular(const MatrixField& M, double tol, TriMode mode);

/// Min over nodes of the smallest eigenvalue of the symmetric part of A.
/// Positive result certifies normal ellipticity with that margin.
double ellipticity_margin(const MatrixField& A);

/// The four blocks of the inverse of [[alpha, beta],[gamma, delta]] with
/// scalar corner delta. Throws naming the singular block.
struct BlockInverse {
  ConstMatrix top_left;
  Eigen::VectorXd top_right;
  Eigen::RowVectorXd bottom_left;
  double bottom_right;
  ConstMatrix dense() const;
};
BlockInverse block_inverse(const ConstMatrix& alpha, const Eigen::VectorXd& beta,
                           const Eigen::RowVectorXd& gamma, double delta);

/// Checks that DB * B^{-1} has the requested triangular pattern at every
/// node (centered-difference gradients). residual is the max violation.
struct PatternReport {
  bool ok = false;
  double residual = 0.0;
  std::string detail;
};
PatternReport db_binv_check(const MatrixField& B_field, TriMode mode, double tol = 1e-8);

/// Certificate that a field admits the constant-column triangularizing
/// structure: for each leading block j the above-diagonal column equals the
/// corner diagonal entry times a constant vector.
struct ALTCertificate {
  bool ok = false;
  std::string failure;              // empty when ok
  int failing_block = -1;           // 1-based block index when not ok
  std::vector<Eigen::VectorXd> k_vectors;  // k_j with b_j = -a_{j+1,j+1} k_j
  std::vector<double> residuals;           // per-block constancy deviation
};
ALTCertificate alt_membership(const MatrixField& A, double tol_const = 1e-8);

/// Checks the bidiagonal-ratio structure: beta_i = a_{i,j}/a_{i+1,j} (j>i)
/// and gamma_i = a_{i,j}/a_{i-1,j} (j<i) constant, plus the positivity and
/// nondegeneracy clauses. Indices are 1-based in reports.
struct RowCondResult {
  bool ok = false;
  std::string violated_clause;  // empty when ok
  Eigen::VectorXd beta;         // beta_1..beta_m (beta_m = 0 by convention)
  Eigen::VectorXd gamma;        // gamma_1 unused (0), gamma_2..gamma_m
};
RowCondResult matrowconda_check(const MatrixField& A, double tol_const = 1e-8);

enum class TransformStructure { Alt, RowCond, BlockGen };

/// Constant matrix B with B*A*T^{-1} = L^{-1}*A_d, L unit lower triangular,
/// A_d diagonal with positive diagonal.
struct TransformBundle {
  ConstMatrix B_const;   // the constant transform
  MatrixField L_mat;     // unit lower triangular
  MatrixField L_inv;
  MatrixField A_d;       // diagonal, positive
  std::optional<MatrixField> T_mat;
  std::vector<Eigen::VectorXd> khat, kbar;
  double residual = 0.0;  // max |B*A*T^{-1} - L^{-1}*A_d| over nodes
};
TransformBundle construct_transform(const MatrixField& A, TransformStructure structure,
                                    const MatrixField* T_hint = nullptr,
                                    double tol_const = 1e-8);

/// Recovers the constant vectors khat (from T's block structure) and kbar
/// (from the block relation on A, re-checked on B).
struct BlockGenResult {
  bool ok = false;
  std::string failure;
  std::vector<Eigen::VectorXd> khat, kbar;
  double max_residual = 0.0;
  int worst_node = -1;
};
BlockGenResult blockgencond_check(const MatrixField& A, const MatrixField& B,
                                  const MatrixField& T, double tol_const = 1e-8);

/// Top-level constant-k structure check; on success supplies a constant
/// prefactor CB with CB*A admitting the alt certificate.
struct GenACondResult {
  bool ok = false;
  std::string failure;
  Eigen::VectorXd k;
  ConstMatrix CB;
};
GenACondResult genAcond_structure(const MatrixField& A, double tol_const = 1e-8);

/// P = s*I - B with s = max diagonal of P, B >= 0, rho(B) < s; requires P to
/// be a Z-matrix with entrywise-positive inverse.
struct ZMDecomposition {
  double s = 0.0;
  ConstMatrix B;
  double rho_B = 0.0;
};
ZMDecomposition zm_decompose(const ConstMatrix& P);

/// Power iteration estimate of the spectral radius of a nonnegative matrix.
double spectral_radius_power(const ConstMatrix& B, int max_iter = 20000, double tol = 1e-13);

struct ProductPositivity {
  bool positive = false;            // every entry of (tI-A)(sI-B) > 0
  bool sufficient_condition = false;  // all entries of A and B exceed 2
  double min_entry = 0.0;
};
ProductPositivity product_positivity(double t, const ConstMatrix& A, double s,
                                     const ConstMatrix& B);

/// P^{-1} G P with P = diag(I_k, -I_{n-k}).
ConstMatrix sign_flip_transform(const ConstMatrix& G, int k);

}  // namespace crossmax
