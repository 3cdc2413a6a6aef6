#include "crossmax/linear_core.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <map>
#include <mutex>

namespace crossmax {

namespace {

Eigen::SparseLU<Eigen::SparseMatrix<double>>& factorize(
    const DiscreteOperator& op, Eigen::SparseLU<Eigen::SparseMatrix<double>>& lu) {
  lu.compute(op.matrix);
  if (lu.info() != Eigen::Success) throw Error("solve: singular factorization");
  return lu;
}

}  // namespace

Eigen::VectorXd solve_vec(const DiscreteOperator& op, const Eigen::VectorXd& rhs) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  factorize(op, lu);
  Eigen::VectorXd x = lu.solve(rhs);
  double rhs_norm = rhs.cwiseAbs().maxCoeff();
  double resid = (op.matrix * x - rhs).cwiseAbs().maxCoeff();
  if (rhs_norm > 0 && resid > 1e-10 * rhs_norm)
    throw Error("solve: residual " + std::to_string(resid) + " exceeds tolerance");
  return x;
}

VectorField solve(const DiscreteOperator& op, const VectorField& rhs) {
  Eigen::VectorXd b = restrict_interior(rhs, op.grid, op.m);
  return extend_interior(solve_vec(op, b), op.grid, op.m);
}

EigenPair principal_eigenpair(const DiscreteOperator& op) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  factorize(op, lu);
  int n = op.size();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  v /= v.norm();
  double lambda = 0.0;
  bool converged = false;
  for (int it = 0; it < 10000; ++it) {
    Eigen::VectorXd w = lu.solve(v);
    double mu = w.norm();
    if (!(mu > 0)) throw Error("principal_eigenpair: iteration collapsed");
    w /= mu;
    double next = w.dot(op.matrix * w);  // Rayleigh quotient
    double vdiff = std::min((w - v).cwiseAbs().maxCoeff(), (w + v).cwiseAbs().maxCoeff());
    v = w;
    if (it > 0 && vdiff <= 1e-13 &&
        std::abs(next - lambda) <= 1e-12 * std::max(1.0, std::abs(next))) {
      lambda = next;
      converged = true;
      break;
    }
    lambda = next;
  }
  if (!converged) throw Error("principal_eigenpair: inverse power iteration did not converge");

  // Sign-fix and sup-normalize.
  double vmax = v.cwiseAbs().maxCoeff();
  int imax = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(v(i)) == vmax) {
      imax = i;
      break;
    }
  if (v(imax) < 0) v = -v;
  v /= v.cwiseAbs().maxCoeff();
  double min_entry = v.minCoeff();
  if (min_entry < -1e-8)
    throw Error("principal_eigenpair: eigenvector has negative entries (operator not "
                "inverse-positive?)");

  EigenPair out;
  out.lambda1 = lambda;
  out.phi = extend_interior(v, op.grid, op.m);
  double resid = (op.matrix * v - lambda * v).cwiseAbs().maxCoeff();
  // The residual scales with the operator magnitude (~1/h^2), not with
  // lambda, so normalize by the largest matrix entry.
  double op_scale = 0.0;
  for (int kk = 0; kk < op.matrix.outerSize(); ++kk)
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.matrix, kk); it; ++it)
      op_scale = std::max(op_scale, std::abs(it.value()));
  if (resid > 1e-9 * std::max({1.0, std::abs(lambda), op_scale}))
    throw Error("principal_eigenpair: residual " + std::to_string(resid) + " too large");
  return out;
}

namespace {

struct Phi1Cache {
  std::mutex mu;
  std::map<std::pair<int, int>, std::pair<double, ScalarField>> entries;
};

Phi1Cache& phi1_cache() {
  static Phi1Cache c;
  return c;
}

const std::pair<double, ScalarField>& laplace_pair(const Grid& grid) {
  auto& cache = phi1_cache();
  std::scoped_lock lock(cache.mu);
  auto key = std::make_pair(grid.dim, grid.n_cells);
  auto it = cache.entries.find(key);
  if (it == cache.entries.end()) {
    ScalarField one(grid, 1.0), zero(grid, 0.0);
    DiscreteOperator lap = assemble_scalar(one, {}, zero, grid);
    EigenPair ep = principal_eigenpair(lap);
    it = cache.entries.emplace(key, std::make_pair(ep.lambda1, ep.phi[0])).first;
  }
  return it->second;
}

}  // namespace

const ScalarField& laplace_phi1(const Grid& grid) { return laplace_pair(grid).second; }
double laplace_lambda1(const Grid& grid) { return laplace_pair(grid).first; }

GreenColumns green_columns(const DiscreteOperator& op, const std::vector<int>& sources) {
  if (op.m != 1) throw Error("green_columns: scalar operator required");
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  factorize(op, lu);
  const Grid& g = op.grid;
  double hd = std::pow(g.h, g.dim);
  GreenColumns out;
  out.sources = sources;
  for (int y : sources) {
    int k = g.interior_index(y);
    if (k < 0) throw Error("green_columns: source node on the boundary");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(op.size());
    rhs(k) = 1.0 / hd;
    Eigen::VectorXd col = lu.solve(rhs);
    ScalarField G = extend_interior(col, g, 1)[0];
    out.grad_x.push_back(gradient(G));
    out.columns.push_back(std::move(G));
  }
  return out;
}

std::vector<int> default_green_sources(const Grid& grid, int density) {
  std::vector<int> out;
  if (grid.dim == 1) {
    for (int ix = 1; ix < grid.n_cells; ix += 2) out.push_back(grid.node_index(ix));
  } else {
    int p = grid.interior_per_axis();
    int lattice = std::min(density, p);
    for (int a = 0; a < lattice; ++a)
      for (int b = 0; b < lattice; ++b) {
        int ix = 1 + (a * (p - 1)) / std::max(1, lattice - 1);
        int iy = 1 + (b * (p - 1)) / std::max(1, lattice - 1);
        int node = grid.node_index(ix, iy);
        if (out.empty() || out.back() != node) out.push_back(node);
      }
  }
  return out;
}

GreenSignReport green_sign_condition(
    const std::vector<std::vector<std::vector<ScalarField>>>& c_fields,
    const std::vector<GreenColumns>& greens_per_j, const Grid& grid) {
  GreenSignReport rep;
  int m = static_cast<int>(c_fields.size());
  double max_c = 0.0, max_dg = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j)
      for (const auto& comp : c_fields[i][j]) max_c = std::max(max_c, comp.max_abs());
  for (const auto& gc : greens_per_j)
    for (const auto& grads : gc.grad_x)
      for (const auto& gax : grads) max_dg = std::max(max_dg, gax.max_abs());
  rep.tol_used = 1e-8 * std::max(1.0, max_c * max_dg);

  rep.holds = true;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < i; ++j) {
      if (j >= static_cast<int>(greens_per_j.size()) || greens_per_j[j].columns.empty())
        throw Error("green_sign_condition: missing Green columns for component " +
                    std::to_string(j + 1));
      const GreenColumns& gc = greens_per_j[j];
      GreenSignReport::PairResult pr{i, j, std::numeric_limits<double>::infinity(), -1, -1};
      for (std::size_t sy = 0; sy < gc.sources.size(); ++sy) {
        for (int x : grid.interior_nodes()) {
          double dot = 0.0;
          for (int axis = 0; axis < grid.dim; ++axis)
            dot += c_fields[i][j][axis][x] * gc.grad_x[sy][axis][x];
          if (dot < pr.min_value) {
            pr.min_value = dot;
            pr.worst_x = x;
            pr.worst_y = gc.sources[sy];
          }
        }
      }
      if (pr.min_value < -rep.tol_used) rep.holds = false;
      rep.pairs.push_back(pr);
    }
  }
  return rep;
}

}  // namespace crossmax
