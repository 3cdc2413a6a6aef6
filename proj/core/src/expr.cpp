#include "crossmax/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace crossmax {

enum class NodeKind { Constant, VarX, VarY, Phi1, Add, Sub, Mul, Div, Pow, Neg, Call };

struct ExprNode {
  NodeKind kind;
  double value = 0.0;       // Constant
  std::string func;         // Call: sin cos exp sqrt abs
  std::shared_ptr<const ExprNode> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr node(NodeKind k, NodePtr l = nullptr, NodePtr r = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

class Parser {
public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    auto e = expression();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

private:
  const std::string& s_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expression() {
    auto l = term();
    for (;;) {
      if (accept('+'))
        l = node(NodeKind::Add, l, term());
      else if (accept('-'))
        l = node(NodeKind::Sub, l, term());
      else
        return l;
    }
  }

  NodePtr term() {
    auto l = unary();
    for (;;) {
      if (accept('*'))
        l = node(NodeKind::Mul, l, unary());
      else if (accept('/'))
        l = node(NodeKind::Div, l, unary());
      else
        return l;
    }
  }

  NodePtr unary() {
    if (accept('-')) return node(NodeKind::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return node(NodeKind::Pow, base, unary());  // right associative
    return base;
  }

  NodePtr primary() {
    char c = peek();
    if (c == '\0') throw ParseError("unexpected end of input", pos_);
    if (c == '(') {
      ++pos_;
      auto e = expression();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr number() {
    std::size_t start = pos_;
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("invalid number", start);
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Constant;
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string name = s_.substr(start, pos_ - start);
    if (name == "x") return node(NodeKind::VarX);
    if (name == "y") return node(NodeKind::VarY);
    if (name == "phi1") return node(NodeKind::Phi1);
    if (name == "sin" || name == "cos" || name == "exp" || name == "sqrt" || name == "abs") {
      if (!accept('(')) throw ParseError("expected '(' after function name", pos_);
      auto arg = expression();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      auto n = std::make_shared<ExprNode>();
      n->kind = NodeKind::Call;
      n->func = name;
      n->lhs = arg;
      return n;
    }
    throw ParseError("unknown identifier '" + name + "'", start);
  }
};

double eval_node(const ExprNode* n, double x, double y, double phi1) {
  switch (n->kind) {
    case NodeKind::Constant: return n->value;
    case NodeKind::VarX: return x;
    case NodeKind::VarY: return y;
    case NodeKind::Phi1: return phi1;
    case NodeKind::Add: return eval_node(n->lhs.get(), x, y, phi1) + eval_node(n->rhs.get(), x, y, phi1);
    case NodeKind::Sub: return eval_node(n->lhs.get(), x, y, phi1) - eval_node(n->rhs.get(), x, y, phi1);
    case NodeKind::Mul: return eval_node(n->lhs.get(), x, y, phi1) * eval_node(n->rhs.get(), x, y, phi1);
    case NodeKind::Div: return eval_node(n->lhs.get(), x, y, phi1) / eval_node(n->rhs.get(), x, y, phi1);
    case NodeKind::Pow: return std::pow(eval_node(n->lhs.get(), x, y, phi1), eval_node(n->rhs.get(), x, y, phi1));
    case NodeKind::Neg: return -eval_node(n->lhs.get(), x, y, phi1);
    case NodeKind::Call: {
      double a = eval_node(n->lhs.get(), x, y, phi1);
      if (n->func == "sin") return std::sin(a);
      if (n->func == "cos") return std::cos(a);
      if (n->func == "exp") return std::exp(a);
      if (n->func == "sqrt") return std::sqrt(a);
      return std::abs(a);
    }
  }
  throw Error("eval: corrupt expression node");
}

void print_node(const ExprNode* n, std::ostream& os) {
  switch (n->kind) {
    case NodeKind::Constant: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << n->value;
      os << tmp.str();
      return;
    }
    case NodeKind::VarX: os << "x"; return;
    case NodeKind::VarY: os << "y"; return;
    case NodeKind::Phi1: os << "phi1"; return;
    case NodeKind::Neg:
      os << "(-";
      print_node(n->lhs.get(), os);
      os << ")";
      return;
    case NodeKind::Call:
      os << n->func << "(";
      print_node(n->lhs.get(), os);
      os << ")";
      return;
    default: {
      const char* op = n->kind == NodeKind::Add   ? "+"
                       : n->kind == NodeKind::Sub ? "-"
                       : n->kind == NodeKind::Mul ? "*"
                       : n->kind == NodeKind::Div ? "/"
                                                  : "^";
      os << "(";
      print_node(n->lhs.get(), os);
      os << op;
      print_node(n->rhs.get(), os);
      os << ")";
      return;
    }
  }
}

bool nodes_equal(const ExprNode* a, const ExprNode* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (a->kind == NodeKind::Constant) return a->value == b->value;
  if (a->kind == NodeKind::Call && a->func != b->func) return false;
  return nodes_equal(a->lhs.get(), b->lhs.get()) && nodes_equal(a->rhs.get(), b->rhs.get());
}

bool node_uses_phi1(const ExprNode* n) {
  if (!n) return false;
  if (n->kind == NodeKind::Phi1) return true;
  return node_uses_phi1(n->lhs.get()) || node_uses_phi1(n->rhs.get());
}

}  // namespace

bool CoeffExpr::uses_phi1() const { return node_uses_phi1(root_.get()); }

std::string CoeffExpr::print() const {
  if (!root_) throw Error("print: empty expression");
  std::ostringstream os;
  print_node(root_.get(), os);
  return os.str();
}

bool CoeffExpr::structurally_equal(const CoeffExpr& other) const {
  return nodes_equal(root_.get(), other.root_.get());
}

double CoeffExpr::eval(double x, double y, double phi1_value) const {
  if (!root_) throw Error("eval: empty expression");
  return eval_node(root_.get(), x, y, phi1_value);
}

CoeffExpr parse_coeff(const std::string& text) { return CoeffExpr(Parser(text).parse()); }

CoeffExpr make_constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Constant;
  n->value = v;
  return CoeffExpr(n);
}

ScalarField eval_field(const CoeffExpr& expr, const Grid& grid, const ScalarField* phi1) {
  if (expr.uses_phi1()) {
    if (!phi1) throw Error("eval_field: expression uses phi1 but no eigenfunction supplied");
    if (!(phi1->grid == grid)) throw Error("eval_field: phi1 grid mismatch");
  }
  ScalarField out(grid);
  for (int node = 0; node < grid.node_count(); ++node) {
    double pv = phi1 ? (*phi1)[node] : 0.0;
    double v = expr.eval(grid.x_of(node), grid.y_of(node), pv);
    if (!std::isfinite(v))
      throw Error("eval_field: non-finite value at node " + std::to_string(node));
    out[node] = v;
  }
  return out;
}

}  // namespace crossmax
