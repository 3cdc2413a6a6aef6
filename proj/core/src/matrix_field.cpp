#include "crossmax/matrix_field.hpp"

#include <cmath>

namespace crossmax {

MatrixField::MatrixField(int n, const Grid& grid)
    : n_(n), grid_(grid), entries_(static_cast<std::size_t>(n) * n, ScalarField(grid)) {
  if (n < 1) throw Error("MatrixField: dimension must be >= 1");
}

MatrixField MatrixField::constant(const ConstMatrix& M, const Grid& grid) {
  if (M.rows() != M.cols()) throw Error("MatrixField::constant: non-square matrix");
  MatrixField f(static_cast<int>(M.rows()), grid);
  for (int i = 0; i < f.n_; ++i)
    for (int j = 0; j < f.n_; ++j)
      std::fill(f.entry(i, j).values.begin(), f.entry(i, j).values.end(), M(i, j));
  return f;
}

MatrixField MatrixField::from_exprs(const std::vector<std::vector<CoeffExpr>>& entries,
                                    const Grid& grid, const ScalarField* phi1) {
  int n = static_cast<int>(entries.size());
  MatrixField f(n, grid);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(entries[i].size()) != n)
      throw Error("MatrixField::from_exprs: ragged entry matrix");
    for (int j = 0; j < n; ++j) f.entry(i, j) = eval_field(entries[i][j], grid, phi1);
  }
  return f;
}

ConstMatrix MatrixField::at(int node) const {
  ConstMatrix M(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) M(i, j) = entry(i, j)[node];
  return M;
}

void MatrixField::set_at(int node, const ConstMatrix& M) {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) entry(i, j)[node] = M(i, j);
}

bool MatrixField::is_constant(double tol) const {
  for (const ScalarField& e : entries_) {
    double ref = e.values.empty() ? 0.0 : e.values.front();
    for (double v : e.values)
      if (std::abs(v - ref) > tol) return false;
  }
  return true;
}

double MatrixField::max_abs() const {
  double m = 0.0;
  for (const ScalarField& e : entries_) m = std::max(m, e.max_abs());
  return m;
}

MatrixField MatrixField::multiply(const MatrixField& rhs) const {
  if (rhs.n_ != n_ || !(rhs.grid_ == grid_)) throw Error("MatrixField::multiply: shape mismatch");
  MatrixField out(n_, grid_);
  for (int node = 0; node < grid_.node_count(); ++node)
    out.set_at(node, at(node) * rhs.at(node));
  return out;
}

MatrixField MatrixField::multiply_const(const ConstMatrix& rhs) const {
  if (rhs.rows() != n_ || rhs.cols() != n_) throw Error("MatrixField::multiply_const: shape mismatch");
  MatrixField out(n_, grid_);
  for (int node = 0; node < grid_.node_count(); ++node) out.set_at(node, at(node) * rhs);
  return out;
}

MatrixField MatrixField::premultiply_const(const ConstMatrix& lhs) const {
  if (lhs.rows() != n_ || lhs.cols() != n_)
    throw Error("MatrixField::premultiply_const: shape mismatch");
  MatrixField out(n_, grid_);
  for (int node = 0; node < grid_.node_count(); ++node) out.set_at(node, lhs * at(node));
  return out;
}

MatrixField MatrixField::add(const MatrixField& rhs) const {
  if (rhs.n_ != n_ || !(rhs.grid_ == grid_)) throw Error("MatrixField::add: shape mismatch");
  MatrixField out(n_, grid_);
  for (std::size_t e = 0; e < entries_.size(); ++e)
    for (int i = 0; i < grid_.node_count(); ++i)
      out.entries_[e][i] = entries_[e][i] + rhs.entries_[e][i];
  return out;
}

MatrixField MatrixField::scale(double c) const {
  MatrixField out(n_, grid_);
  for (std::size_t e = 0; e < entries_.size(); ++e)
    for (int i = 0; i < grid_.node_count(); ++i) out.entries_[e][i] = c * entries_[e][i];
  return out;
}

MatrixField MatrixField::inverse() const {
  MatrixField out(n_, grid_);
  for (int node = 0; node < grid_.node_count(); ++node) {
    Eigen::FullPivLU<ConstMatrix> lu(at(node));
    if (!lu.isInvertible())
      throw Error("MatrixField::inverse: singular matrix at node " + std::to_string(node));
    out.set_at(node, lu.inverse());
  }
  return out;
}

std::vector<MatrixField> MatrixField::gradient_per_axis() const {
  std::vector<MatrixField> out(grid_.dim, MatrixField(n_, grid_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      auto g = gradient(entry(i, j));
      for (int axis = 0; axis < grid_.dim; ++axis) out[axis].entry(i, j) = g[axis];
    }
  return out;
}

}  // namespace crossmax
