#pragma once

#include <Eigen/Dense>
#include <vector>

#include "crossmax/expr.hpp"
#include "crossmax/grid.hpp"

namespace crossmax {

using ConstMatrix = Eigen::MatrixXd;

/// m x m matrix of scalar fields sampled on a shared grid.
class MatrixField {
public:
  MatrixField() = default;
  MatrixField(int n, const Grid& grid);

  static MatrixField constant(const ConstMatrix& M, const Grid& grid);
  /// Sample a matrix of expressions; phi1 supplied when any entry needs it.
  static MatrixField from_exprs(const std::vector<std::vector<CoeffExpr>>& entries,
                                const Grid& grid, const ScalarField* phi1 = nullptr);

  int n() const { return n_; }
  const Grid& grid() const { return grid_; }

  ScalarField& entry(int i, int j) { return entries_[i * n_ + j]; }
  const ScalarField& entry(int i, int j) const { return entries_[i * n_ + j]; }

  /// Dense matrix value at one node.
  ConstMatrix at(int node) const;
  void set_at(int node, const ConstMatrix& M);

  bool is_constant(double tol = 0.0) const;
  double max_abs() const;

  MatrixField multiply(const MatrixField& rhs) const;
  MatrixField multiply_const(const ConstMatrix& rhs) const;  // this * rhs
  MatrixField premultiply_const(const ConstMatrix& lhs) const;  // lhs * this
  MatrixField add(const MatrixField& rhs) const;
  MatrixField scale(double c) const;
  /// Nodewise inverse; throws naming the first singular node.
  MatrixField inverse() const;
  /// Per-axis entrywise gradient fields.
  std::vector<MatrixField> gradient_per_axis() const;

private:
  int n_ = 0;
  Grid grid_;
  std::vector<ScalarField> entries_;
};

}  // namespace crossmax
