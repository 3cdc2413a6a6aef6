#include "crossmax/discrete_operator.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "crossmax/matrix_structure.hpp"

namespace crossmax {

Eigen::VectorXd restrict_interior(const VectorField& W, const Grid& grid, int m) {
  if (W.m() != m) throw Error("restrict_interior: component count mismatch");
  int N = grid.interior_count();
  Eigen::VectorXd v(m * N);
  for (int c = 0; c < m; ++c)
    for (int k = 0; k < N; ++k) v(c * N + k) = W[c][grid.node_of_interior(k)];
  return v;
}

VectorField extend_interior(const Eigen::VectorXd& v, const Grid& grid, int m) {
  int N = grid.interior_count();
  if (v.size() != m * N) throw Error("extend_interior: size mismatch");
  VectorField W(m, grid);
  for (int c = 0; c < m; ++c)
    for (int k = 0; k < N; ++k) W[c][grid.node_of_interior(k)] = v(c * N + k);
  return W;
}

namespace {

struct Assembler {
  const Grid& grid;
  int m;
  std::vector<Eigen::Triplet<double>> triplets;

  Assembler(const Grid& g, int m_) : grid(g), m(m_) {}

  int dof(int comp, int node) const {
    int k = grid.interior_index(node);
    return k < 0 ? -1 : comp * grid.interior_count() + k;
  }

  void add(int comp_i, int node_i, int comp_j, int node_j, double v) {
    if (v == 0.0) return;
    int r = dof(comp_i, node_i);
    if (r < 0) return;
    int c = dof(comp_j, node_j);
    if (c < 0) return;  // homogeneous Dirichlet: boundary values are zero
    triplets.emplace_back(r, c, v);
  }

  /// Neighbor of `node` one step along `axis` in direction `dir` (+1/-1).
  int neighbor(int node, int axis, int dir) const {
    int ix = grid.ix_of(node), iy = grid.iy_of(node);
    if (axis == 0) ix += dir;
    else iy += dir;
    return grid.node_index(ix, iy);
  }
};

}  // namespace

DiscreteOperator assemble_system(const Problem& p) {
  const Grid& g = p.grid;
  int m = p.m;
  if (p.A.n() != m || p.K.n() != m) throw Error("assemble_system: dimension mismatch");
  for (const auto& B : p.B_axes)
    if (B.n() != m) throw Error("assemble_system: B dimension mismatch");
  bool degenerate = false;
  if (!(ellipticity_margin(p.A) > 0)) {
    // The quadratic form can be indefinite while the diffusion matrix is
    // still normally elliptic in the spectral sense (eigenvalues in the open
    // right half-plane), which is what the parabolic theory actually needs.
    // Accept that weaker certificate; flag an exactly-degenerate spectrum
    // (eigenvalue with zero real part) and reject only a genuinely
    // non-elliptic A.
    for (int node : g.interior_nodes()) {
      const ConstMatrix& An = p.A.at(node);
      Eigen::EigenSolver<ConstMatrix> es(An, false);
      double min_re = es.eigenvalues().real().minCoeff();
      double scale = std::max(1.0, An.cwiseAbs().maxCoeff());
      if (min_re < -1e-12 * scale)
        throw Error("assemble_system: diffusion matrix is not normally elliptic");
      if (min_re <= 1e-12 * scale) degenerate = true;
    }
  }

  Assembler asmr(g, m);
  double h = g.h, h2 = h * h;
  bool peclet = false;

  for (int node : g.interior_nodes()) {
    for (int ci = 0; ci < m; ++ci) {
      for (int cj = 0; cj < m; ++cj) {
        for (int axis = 0; axis < g.dim; ++axis) {
          const ScalarField& a = p.A.entry(ci, cj);
          int right = asmr.neighbor(node, axis, +1);
          int left = asmr.neighbor(node, axis, -1);
          double a_r = 0.5 * (a[node] + a[right]);
          double a_l = 0.5 * (a[node] + a[left]);
          // -d/dx(a du/dx): conservative flux form.
          asmr.add(ci, node, cj, node, (a_r + a_l) / h2);
          asmr.add(ci, node, cj, right, -a_r / h2);
          asmr.add(ci, node, cj, left, -a_l / h2);
          if (!p.B_axes.empty()) {
            double b = p.B_axes[axis].entry(ci, cj)[node];
            asmr.add(ci, node, cj, right, b / (2 * h));
            asmr.add(ci, node, cj, left, -b / (2 * h));
            double diag_a = p.A.entry(ci, ci)[node];
            if (diag_a > 0 && std::abs(b) * h / (2 * diag_a) > 1) peclet = true;
          }
        }
        double zero_order = (ci == cj ? p.k : 0.0) - p.K.entry(ci, cj)[node];
        asmr.add(ci, node, cj, node, zero_order);
      }
    }
  }

  DiscreteOperator op;
  op.grid = g;
  op.m = m;
  op.peclet_warning = peclet;
  op.degenerate_warning = degenerate;
  op.matrix.resize(asmr.m * g.interior_count(), asmr.m * g.interior_count());
  op.matrix.setFromTriplets(asmr.triplets.begin(), asmr.triplets.end());

  bool sym = p.B_axes.empty();
  for (int i = 0; i < m && sym; ++i)
    for (int j = 0; j < m && sym; ++j)
      for (int node = 0; node < g.node_count() && sym; ++node) {
        if (std::abs(p.A.entry(i, j)[node] - p.A.entry(j, i)[node]) > 0) sym = false;
        if (std::abs(p.K.entry(i, j)[node] - p.K.entry(j, i)[node]) > 0) sym = false;
      }
  op.symmetric = sym;
  return op;
}

DiscreteOperator assemble_scalar(const ScalarField& a,
                                 const std::vector<ScalarField>& b_axes,
                                 const ScalarField& c, const Grid& grid) {
  for (int node = 0; node < grid.node_count(); ++node)
    if (!(a[node] > 0))
      throw Error("assemble_scalar: nonpositive diffusion coefficient at node " +
                  std::to_string(node));
  Problem p;
  p.grid = grid;
  p.m = 1;
  p.A = MatrixField(1, grid);
  p.A.entry(0, 0) = a;
  p.K = MatrixField(1, grid);
  for (int node = 0; node < grid.node_count(); ++node) p.K.entry(0, 0)[node] = -c[node];
  p.k = 0.0;
  bool has_b = false;
  for (const auto& b : b_axes)
    if (b.max_abs() > 0) has_b = true;
  if (has_b) {
    if (static_cast<int>(b_axes.size()) != grid.dim)
      throw Error("assemble_scalar: need one b field per axis");
    for (const auto& b : b_axes) {
      MatrixField Bf(1, grid);
      Bf.entry(0, 0) = b;
      p.B_axes.push_back(std::move(Bf));
    }
  }
  DiscreteOperator op = assemble_system(p);
  op.symmetric = !has_b;
  return op;
}

VectorField apply(const DiscreteOperator& op, const VectorField& W) {
  Eigen::VectorXd v = restrict_interior(W, op.grid, op.m);
  Eigen::VectorXd r = op.matrix * v;
  return extend_interior(r, op.grid, op.m);
}

}  // namespace crossmax
