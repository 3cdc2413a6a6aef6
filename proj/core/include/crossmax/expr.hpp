#pragma once

#include <memory>
#include <string>

#include "crossmax/grid.hpp"

namespace crossmax {

/// Parse error carrying the byte offset of the failure.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

struct ExprNode;

/// Expression over x, y, constants, + - * / ^, sin cos exp sqrt abs, and
/// `phi1` (principal eigenfunction of the Dirichlet Laplacian, sup-norm 1).
class CoeffExpr {
public:
  CoeffExpr() = default;
  explicit CoeffExpr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

  bool empty() const { return !root_; }
  /// True if the expression references phi1 anywhere.
  bool uses_phi1() const;
  /// Canonical fully-parenthesized rendering; parse(print(e)) == e structurally.
  std::string print() const;
  bool structurally_equal(const CoeffExpr& other) const;

  /// Pointwise evaluation. phi1_value is the eigenfunction value at the point
  /// being evaluated; pass 0 when the expression does not use phi1.
  double eval(double x, double y, double phi1_value = 0.0) const;

  const ExprNode* root() const { return root_.get(); }

private:
  std::shared_ptr<const ExprNode> root_;
};

CoeffExpr parse_coeff(const std::string& text);
CoeffExpr make_constant(double v);

/// Nodewise evaluation over a grid. phi1 must be supplied (and live on the
/// same grid) when the expression references it. Throws on non-finite values.
ScalarField eval_field(const CoeffExpr& expr, const Grid& grid,
                       const ScalarField* phi1 = nullptr);

}  // namespace crossmax
