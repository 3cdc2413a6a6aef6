#include "crossmax/matrix_structure.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace crossmax {

namespace {

double tri_violation(const ConstMatrix& M, TriMode mode) {
  double v = 0.0;
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) {
      bool offending = (mode == TriMode::Lower && j > i) ||
                       (mode == TriMode::Upper && j < i) ||
                       (mode == TriMode::Diagonal && j != i);
      if (offending) v = std::max(v, std::abs(M(i, j)));
    }
  return v;
}

/// Max deviation of each node's value from the cross-node mean, relative to
/// max(1, |mean|). Used for every "constant over the domain" certificate.
double constancy_deviation(const std::vector<double>& samples) {
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  double dev = 0.0;
  for (double s : samples) dev = std::max(dev, std::abs(s - mean));
  return dev / std::max(1.0, std::abs(mean));
}

}  // namespace

bool is_cooperative(const ConstMatrix& M, double tol) {
  if (M.rows() != M.cols()) throw Error("is_cooperative: non-square matrix");
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (i != j && M(i, j) < -tol) return false;
  return true;
}

bool is_triangular(const ConstMatrix& M, double tol, TriMode mode) {
  if (M.rows() != M.cols()) throw Error("is_triangular: non-square matrix");
  return tri_violation(M, mode) <= tol;
}

bool is_triangular(const MatrixField& M, double tol, TriMode mode) {
  for (int node = 0; node < M.grid().node_count(); ++node)
    if (!is_triangular(M.at(node), tol, mode)) return false;
  return true;
}

double ellipticity_margin(const MatrixField& A) {
  double margin = std::numeric_limits<double>::infinity();
  for (int node = 0; node < A.grid().node_count(); ++node) {
    ConstMatrix M = A.at(node);
    ConstMatrix S = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<ConstMatrix> es(S);
    margin = std::min(margin, es.eigenvalues().minCoeff());
  }
  return margin;
}

ConstMatrix BlockInverse::dense() const {
  int j = static_cast<int>(top_left.rows());
  ConstMatrix M(j + 1, j + 1);
  M.topLeftCorner(j, j) = top_left;
  M.block(0, j, j, 1) = top_right;
  M.block(j, 0, 1, j) = bottom_left;
  M(j, j) = bottom_right;
  return M;
}

BlockInverse block_inverse(const ConstMatrix& alpha, const Eigen::VectorXd& beta,
                           const Eigen::RowVectorXd& gamma, double delta) {
  int j = static_cast<int>(alpha.rows());
  if (alpha.cols() != j || beta.size() != j || gamma.size() != j)
    throw Error("block_inverse: block shape mismatch");
  Eigen::FullPivLU<ConstMatrix> lu(alpha);
  if (!lu.isInvertible()) throw Error("block_inverse: singular block alpha");
  if (delta == 0.0) throw Error("block_inverse: singular block delta");
  ConstMatrix alpha_inv = lu.inverse();
  double schur = delta - gamma * alpha_inv * beta;
  double scale = std::abs(delta) + (gamma.cwiseAbs() * (alpha_inv * beta).cwiseAbs())(0);
  if (std::abs(schur) <= 1e-14 * std::max(1.0, scale))
    throw Error("block_inverse: singular Schur complement delta - gamma*alpha^-1*beta");
  BlockInverse out;
  out.bottom_right = 1.0 / schur;
  out.top_right = -alpha_inv * beta * out.bottom_right;
  out.bottom_left = -out.bottom_right * gamma * alpha_inv;
  out.top_left = alpha_inv + alpha_inv * beta * out.bottom_right * gamma * alpha_inv;
  return out;
}

PatternReport db_binv_check(const MatrixField& B_field, TriMode mode, double tol) {
  const Grid& g = B_field.grid();
  MatrixField B_inv = B_field.inverse();  // throws naming a singular node
  auto grads = B_field.gradient_per_axis();
  PatternReport rep;
  rep.ok = true;
  double scale = 0.0;
  for (int axis = 0; axis < g.dim; ++axis)
    for (int node = 0; node < g.node_count(); ++node) {
      ConstMatrix P = grads[axis].at(node) * B_inv.at(node);
      rep.residual = std::max(rep.residual, tri_violation(P, mode));
      scale = std::max(scale, P.cwiseAbs().maxCoeff());
    }
  if (rep.residual > tol * std::max(1.0, scale)) {
    rep.ok = false;
    rep.detail = "DB*B^-1 violates the requested pattern; max violation " +
                 std::to_string(rep.residual);
  }
  return rep;
}

ALTCertificate alt_membership(const MatrixField& A, double tol_const) {
  int n = A.n();
  const Grid& g = A.grid();
  ALTCertificate cert;
  cert.k_vectors.resize(n - 1);
  cert.residuals.assign(n - 1, 0.0);

  // Working copies, eliminated right to left as in the block recursion.
  std::vector<ConstMatrix> W(g.node_count());
  for (int node = 0; node < g.node_count(); ++node) W[node] = A.at(node);

  for (int j = n - 1; j >= 1; --j) {
    // Ratio of the above-diagonal column to the corner diagonal entry.
    Eigen::VectorXd kmean = Eigen::VectorXd::Zero(j);
    double worst = 0.0;
    for (int i = 0; i < j; ++i) {
      std::vector<double> samples(g.node_count());
      for (int node = 0; node < g.node_count(); ++node) {
        double d = W[node](j, j);
        if (std::abs(d) < 1e-14) {
          cert.failure = "singular diagonal entry in block " + std::to_string(j);
          cert.failing_block = j;
          return cert;
        }
        samples[node] = W[node](i, j) / d;
      }
      double mean = 0.0;
      for (double s : samples) mean += s;
      mean /= static_cast<double>(samples.size());
      kmean(i) = -mean;  // sign convention: b_j = -a_{j+1,j+1} k_j
      worst = std::max(worst, constancy_deviation(samples));
    }
    cert.residuals[j - 1] = worst;
    cert.k_vectors[j - 1] = kmean;
    if (worst > tol_const) {
      cert.failure = "k_" + std::to_string(j) + " not constant; variation " +
                     std::to_string(worst);
      cert.failing_block = j;
      return cert;
    }
    // Eliminate the column and verify the modified leading block stays
    // invertible (the (a_j + k_j c_j)^-1 clause).
    for (int node = 0; node < g.node_count(); ++node) {
      for (int i = 0; i < j; ++i) W[node].row(i) += kmean(i) * W[node].row(j);
      if (j > 1) {
        Eigen::FullPivLU<ConstMatrix> lu(W[node].topLeftCorner(j, j));
        if (!lu.isInvertible()) {
          cert.failure = "modified leading block " + std::to_string(j) +
                         " singular at node " + std::to_string(node);
          cert.failing_block = j;
          return cert;
        }
      }
    }
  }
  cert.ok = true;
  return cert;
}

RowCondResult matrowconda_check(const MatrixField& A, double tol_const) {
  int m = A.n();
  const Grid& g = A.grid();
  if (m < 2) throw Error("matrowconda_check: m must be >= 2");
  RowCondResult res;
  res.beta = Eigen::VectorXd::Zero(m);
  res.gamma = Eigen::VectorXd::Zero(m);

  auto ratio_constant = [&](int num_row, int den_row, int col_begin, int col_end,
                            double& out, std::string& err) -> bool {
    // Single constant ratio A(num_row,j)/A(den_row,j) across j and nodes.
    std::vector<double> samples;
    bool any_nonzero = false;
    for (int j = col_begin; j < col_end; ++j)
      for (int node = 0; node < g.node_count(); ++node) {
        double num = A.entry(num_row, j)[node], den = A.entry(den_row, j)[node];
        if (std::abs(num) < 1e-14 && std::abs(den) < 1e-14) continue;
        if (std::abs(den) < 1e-14) {
          err = "division by zero entry at (" + std::to_string(den_row + 1) + "," +
                std::to_string(j + 1) + ")";
          return false;
        }
        any_nonzero = true;
        samples.push_back(num / den);
      }
    if (!any_nonzero) {
      out = 0.0;  // degenerate (all-zero coupling) accepted
      return true;
    }
    if (constancy_deviation(samples) > tol_const) {
      err = "ratio not constant across columns/nodes";
      return false;
    }
    double mean = 0.0;
    for (double s : samples) mean += s;
    out = mean / static_cast<double>(samples.size());
    return true;
  };

  std::string err;
  for (int i = 0; i < m - 1; ++i) {
    if (!ratio_constant(i, i + 1, i + 1, m, res.beta(i), err)) {
      res.violated_clause = "beta constancy (row " + std::to_string(i + 1) + "): " + err;
      return res;
    }
    if (res.beta(i) < -tol_const) {
      res.violated_clause = "beta_" + std::to_string(i + 1) + " negative";
      return res;
    }
  }
  for (int i = 1; i < m; ++i) {
    if (!ratio_constant(i, i - 1, 0, i, res.gamma(i), err)) {
      res.violated_clause = "gamma constancy (row " + std::to_string(i + 1) + "): " + err;
      return res;
    }
  }
  // Positivity / nondegeneracy clauses.
  for (int i = 0; i < m; ++i) {
    double beta_i = res.beta(i);                 // beta_m = 0 by convention
    double gamma_i = i >= 1 ? res.gamma(i) : 0;  // gamma_1 = 0 by convention
    for (int node = 0; node < g.node_count(); ++node) {
      double v = A.entry(i, i)[node] * (1.0 - beta_i * gamma_i);
      if (!(v > 0)) {
        res.violated_clause = "a_{i,i}(1-beta_i*gamma_i) > 0 fails at i=" +
                              std::to_string(i + 1);
        return res;
      }
    }
  }
  for (int i = 1; i < m; ++i) {
    double gi = res.gamma(i);
    double denom = res.beta(i - 1) * gi - 1.0;
    if (std::abs(denom) < tol_const) {
      res.violated_clause = "beta_{i-1}*gamma_i = 1 (degenerate) at i=" + std::to_string(i + 1);
      return res;
    }
    if (gi < -tol_const) {
      res.violated_clause = "gamma_" + std::to_string(i + 1) + " negative";
      return res;
    }
    if (gi > tol_const) {  // nontrivial coupling: positivity of the ratio required
      double frac = (res.beta(i) * gi - 1.0) / denom;
      if (!(frac > 0)) {
        res.violated_clause = "(beta_i*gamma_i-1)/(beta_{i-1}*gamma_i-1) > 0 fails at i=" +
                              std::to_string(i + 1);
        return res;
      }
    }
  }
  res.ok = true;
  return res;
}

namespace {

/// Shared tail of construct_transform: given the constant transform B and the
/// (already lower-triangular) products M(node) = B*E(node), normalize signs so
/// the diagonal is positive and factor M = L^-1 * A_d.
TransformBundle finalize_bundle(ConstMatrix B, std::vector<ConstMatrix> M,
                                const MatrixField& E_field) {
  int n = static_cast<int>(B.rows());
  const Grid& g = E_field.grid();
  // Row sign flips to make the diagonal positive; the diagonal must not
  // change sign across nodes.
  Eigen::VectorXd sign(n);
  for (int i = 0; i < n; ++i) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const ConstMatrix& Mi : M) {
      lo = std::min(lo, Mi(i, i));
      hi = std::max(hi, Mi(i, i));
    }
    if (lo > 0)
      sign(i) = 1.0;
    else if (hi < 0)
      sign(i) = -1.0;
    else
      throw Error("construct_transform: transformed diagonal entry " + std::to_string(i + 1) +
                  " is not sign-definite (nonpositive A_d)");
  }
  for (int i = 0; i < n; ++i)
    if (sign(i) < 0) {
      B.row(i) *= -1.0;
      for (ConstMatrix& Mi : M) Mi.row(i) *= -1.0;
    }

  TransformBundle bundle;
  bundle.B_const = B;
  bundle.L_mat = MatrixField(n, g);
  bundle.L_inv = MatrixField(n, g);
  bundle.A_d = MatrixField(n, g);
  double resid = 0.0;
  for (int node = 0; node < g.node_count(); ++node) {
    ConstMatrix Mn = M[node];
    resid = std::max(resid, tri_violation(Mn, TriMode::Lower));
    ConstMatrix Ad = ConstMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) Ad(i, i) = Mn(i, i);
    // Exact lower-triangular factor: zero out the above-diagonal residue.
    ConstMatrix Mlow = Mn;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) Mlow(i, j) = 0.0;
    ConstMatrix Linv = Mlow * Ad.diagonal().cwiseInverse().asDiagonal();
    bundle.A_d.set_at(node, Ad);
    bundle.L_inv.set_at(node, Linv);
    bundle.L_mat.set_at(node, Linv.inverse());
  }
  bundle.residual = resid;
  return bundle;
}

}  // namespace

TransformBundle construct_transform(const MatrixField& A, TransformStructure structure,
                                    const MatrixField* T_hint, double tol_const) {
  int n = A.n();
  const Grid& g = A.grid();
  MatrixField E = A;
  std::optional<MatrixField> T_opt;
  if (structure == TransformStructure::BlockGen) {
    if (!T_hint) throw Error("construct_transform: blockgencond structure requires T");
    T_opt = *T_hint;
    E = A.multiply(T_hint->inverse());
  }

  std::vector<ConstMatrix> M(g.node_count());
  for (int node = 0; node < g.node_count(); ++node) M[node] = E.at(node);
  ConstMatrix B = ConstMatrix::Identity(n, n);

  if (structure == TransformStructure::RowCond) {
    RowCondResult rc = matrowconda_check(E, tol_const);
    if (!rc.ok)
      throw Error("construct_transform: row-ratio structure check failed: " +
                  rc.violated_clause);
    for (int i = 0; i < n - 1; ++i) B(i, i + 1) = -rc.beta(i);
    for (auto& Mn : M) Mn = B * Mn;
  } else {
    // Column elimination right to left with constant multipliers.
    for (int j = n - 1; j >= 1; --j) {
      Eigen::VectorXd mult(j);
      for (int i = 0; i < j; ++i) {
        std::vector<double> samples(g.node_count());
        for (int node = 0; node < g.node_count(); ++node) {
          double d = M[node](j, j);
          if (std::abs(d) < 1e-14)
            throw Error("construct_transform: zero pivot in column " + std::to_string(j + 1));
          samples[node] = M[node](i, j) / d;
        }
        if (constancy_deviation(samples) > tol_const)
          throw Error("construct_transform: elimination multiplier (" + std::to_string(i + 1) +
                      "," + std::to_string(j + 1) + ") is not constant over the domain");
        double mean = 0.0;
        for (double s : samples) mean += s;
        mult(i) = mean / static_cast<double>(samples.size());
      }
      ConstMatrix Ej = ConstMatrix::Identity(n, n);
      for (int i = 0; i < j; ++i) Ej(i, j) = -mult(i);
      B = Ej * B;
      for (auto& Mn : M) Mn = Ej * Mn;
    }
  }

  TransformBundle bundle = finalize_bundle(B, std::move(M), E);
  bundle.T_mat = T_opt;
  double scale = std::max(1.0, A.max_abs());
  if (bundle.residual > 1e-9 * scale)
    throw Error("construct_transform: triangularization residual " +
                std::to_string(bundle.residual) + " exceeds tolerance");
  return bundle;
}

BlockGenResult blockgencond_check(const MatrixField& A, const MatrixField& B,
                                  const MatrixField& T, double tol_const) {
  int n = A.n();
  const Grid& g = A.grid();
  BlockGenResult res;

  for (int j = 1; j < n; ++j) {
    // khat_j from T: above-diagonal column beta = alpha * khat.
    std::vector<Eigen::VectorXd> khat_samples(g.node_count());
    for (int node = 0; node < g.node_count(); ++node) {
      ConstMatrix Tn = T.at(node);
      Eigen::FullPivLU<ConstMatrix> lu(Tn.topLeftCorner(j, j));
      if (!lu.isInvertible()) {
        res.failure = "T leading block " + std::to_string(j) + " singular at node " +
                      std::to_string(node);
        return res;
      }
      khat_samples[node] = lu.solve(Tn.block(0, j, j, 1));
    }
    Eigen::VectorXd khat = Eigen::VectorXd::Zero(j);
    for (const auto& s : khat_samples) khat += s;
    khat /= static_cast<double>(g.node_count());
    for (const auto& s : khat_samples)
      if ((s - khat).cwiseAbs().maxCoeff() > tol_const * std::max(1.0, khat.cwiseAbs().maxCoeff())) {
        res.failure = "khat_" + std::to_string(j) + " not constant over the domain";
        return res;
      }

    // kbar_j from the block relation -a*khat + b = (d - c*khat)*kbar,
    // required for both coefficient fields.
    Eigen::VectorXd kbar = Eigen::VectorXd::Zero(j);
    bool kbar_set = false;
    for (const MatrixField* field : {&A, &B}) {
      for (int node = 0; node < g.node_count(); ++node) {
        ConstMatrix Fn = field->at(node);
        ConstMatrix a = Fn.topLeftCorner(j, j);
        Eigen::VectorXd b = Fn.block(0, j, j, 1);
        Eigen::RowVectorXd c = Fn.block(j, 0, 1, j);
        double d = Fn(j, j);
        double factor = d - (c * khat)(0);
        Eigen::VectorXd lhs = -a * khat + b;
        if (std::abs(factor) < 1e-14) {
          if (lhs.cwiseAbs().maxCoeff() > tol_const) {
            res.failure = "block relation degenerate (d - c*khat = 0) at block " +
                          std::to_string(j);
            return res;
          }
          continue;
        }
        Eigen::VectorXd kb = lhs / factor;
        if (!kbar_set) {
          kbar = kb;
          kbar_set = true;
        } else {
          double dev = (kb - kbar).cwiseAbs().maxCoeff() /
                       std::max(1.0, kbar.cwiseAbs().maxCoeff());
          if (dev > std::max(res.max_residual, 0.0)) {
            res.max_residual = dev;
            res.worst_node = node;
          }
          if (dev > tol_const) {
            res.failure = "kbar_" + std::to_string(j) +
                          " not constant / relation violated; max residual " +
                          std::to_string(dev) + " at node " + std::to_string(node);
            return res;
          }
        }
      }
    }

    // Extra clause: kbar*(c*delta - d*gamma)*(delta*alpha - alpha*khat*gamma)^-1
    // lower triangular at every node.
    for (int node = 0; node < g.node_count(); ++node) {
      ConstMatrix An = A.at(node), Tn = T.at(node);
      ConstMatrix alpha = Tn.topLeftCorner(j, j);
      Eigen::RowVectorXd gamma = Tn.block(j, 0, 1, j);
      double delta = Tn(j, j);
      Eigen::RowVectorXd c = An.block(j, 0, 1, j);
      double d = An(j, j);
      ConstMatrix denom = delta * alpha - alpha * khat * gamma;
      Eigen::FullPivLU<ConstMatrix> lu(denom);
      if (!lu.isInvertible()) {
        res.failure = "extra clause denominator singular at block " + std::to_string(j);
        return res;
      }
      ConstMatrix extra = kbar * (c * delta - d * gamma) * lu.inverse();
      if (!is_triangular(extra, tol_const * std::max(1.0, extra.cwiseAbs().maxCoeff()),
                         TriMode::Lower)) {
        res.failure = "extra lower-triangularity clause violated at block " +
                      std::to_string(j);
        return res;
      }
    }

    res.khat.push_back(khat);
    res.kbar.push_back(kbar);
  }
  res.ok = true;
  return res;
}

GenACondResult genAcond_structure(const MatrixField& A, double tol_const) {
  int n = A.n();
  const Grid& g = A.grid();
  GenACondResult res;
  res.CB = ConstMatrix::Identity(n, n);
  int j = n - 1;  // top-level partition: leading (n-1) block + scalar corner

  std::vector<Eigen::VectorXd> k_samples(g.node_count());
  for (int node = 0; node < g.node_count(); ++node) {
    ConstMatrix An = A.at(node);
    ConstMatrix a = An.topLeftCorner(j, j);
    Eigen::VectorXd b = An.block(0, j, j, 1);
    Eigen::RowVectorXd c = An.block(j, 0, 1, j);
    double d = An(j, j);
    Eigen::FullPivLU<ConstMatrix> lua(a);
    if (!lua.isInvertible() || std::abs(d) < 1e-14) {
      res.failure = "singular block at node " + std::to_string(node);
      return res;
    }
    double schur = d - (c * lua.solve(b))(0);
    ConstMatrix inner = a - b * c / d;
    Eigen::FullPivLU<ConstMatrix> lui(inner);
    if (std::abs(schur) < 1e-14 || !lui.isInvertible()) {
      res.failure = "degenerate Schur factor at node " + std::to_string(node);
      return res;
    }
    // b = -schur * a * inner^-1 * k  =>  k = -(1/schur) * inner * a^-1 * b
    k_samples[node] = -(1.0 / schur) * inner * lua.solve(b);
  }
  Eigen::VectorXd k = Eigen::VectorXd::Zero(j);
  for (const auto& s : k_samples) k += s;
  k /= static_cast<double>(g.node_count());
  for (const auto& s : k_samples)
    if ((s - k).cwiseAbs().maxCoeff() > tol_const * std::max(1.0, k.cwiseAbs().maxCoeff())) {
      res.failure = "no constant k fits the structure within tolerance";
      return res;
    }
  res.k = k;

  // Prefactor: identity when A already carries the constant-column
  // certificate; otherwise the constant column elimination built from k.
  ALTCertificate direct = alt_membership(A, tol_const);
  if (!direct.ok) {
    ConstMatrix CB = ConstMatrix::Identity(n, n);
    CB.block(0, j, j, 1) = k;
    MatrixField CBA = A.premultiply_const(CB);
    ALTCertificate after = alt_membership(CBA, tol_const);
    if (!after.ok) {
      res.failure = "prefactor construction failed: " + after.failure;
      return res;
    }
    res.CB = CB;
  }
  res.ok = true;
  return res;
}

double spectral_radius_power(const ConstMatrix& B, int max_iter, double tol) {
  int n = static_cast<int>(B.rows());
  if (n == 0) return 0.0;
  if (B.minCoeff() >= 0.0) {
    // Nonnegative matrix: shift by cI to make the iteration primitive (the
    // unshifted matrix can be periodic, where the max-norm ratio oscillates
    // or plateaus), then bracket the Perron root with the Collatz-Wielandt
    // ratios until the bracket closes.
    double c = std::max(1.0, B.cwiseAbs().maxCoeff());
    ConstMatrix M = B + c * ConstMatrix::Identity(n, n);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    for (int it = 0; it < max_iter; ++it) {
      Eigen::VectorXd w = M * v;
      double hi = 0.0, lo = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        double r = w(i) / v(i);
        hi = std::max(hi, r);
        lo = std::min(lo, r);
      }
      if (hi - lo <= tol * std::max(1.0, hi)) return 0.5 * (hi + lo) - c;
      v = w / w.cwiseAbs().maxCoeff();
    }
    // Reducible (or very slowly mixing) matrix: fall back to a dense solve.
  }
  Eigen::EigenSolver<ConstMatrix> es(B, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

ZMDecomposition zm_decompose(const ConstMatrix& P) {
  int n = static_cast<int>(P.rows());
  if (P.cols() != n) throw Error("zm_decompose: non-square matrix");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && P(i, j) > 1e-14)
        throw Error("zm_decompose: not a Z-matrix (positive off-diagonal entry)");
  Eigen::FullPivLU<ConstMatrix> lu(P);
  if (!lu.isInvertible()) throw Error("zm_decompose: P singular");
  ConstMatrix Pinv = lu.inverse();
  if (Pinv.minCoeff() < -1e-12 * std::max(1.0, Pinv.cwiseAbs().maxCoeff()))
    throw Error("zm_decompose: P^-1 not positive (inverse-positivity fails)");
  ZMDecomposition out;
  out.s = P.diagonal().maxCoeff();
  out.B = out.s * ConstMatrix::Identity(n, n) - P;
  out.rho_B = spectral_radius_power(out.B);
  if (!(out.rho_B < out.s))
    throw Error("zm_decompose: spectral radius of B not below s");
  return out;
}

ProductPositivity product_positivity(double t, const ConstMatrix& A, double s,
                                     const ConstMatrix& B) {
  if (!(t > 0) || !(s > 0)) throw Error("product_positivity: t, s must be positive");
  int n = static_cast<int>(A.rows());
  ConstMatrix prod = (t * ConstMatrix::Identity(n, n) - A) *
                     (s * ConstMatrix::Identity(n, n) - B);
  ProductPositivity out;
  out.min_entry = prod.minCoeff();
  out.positive = out.min_entry > 0;
  out.sufficient_condition = A.minCoeff() > 2.0 && B.minCoeff() > 2.0;
  return out;
}

ConstMatrix sign_flip_transform(const ConstMatrix& G, int k) {
  int n = static_cast<int>(G.rows());
  if (k <= 0 || k >= n) throw Error("sign_flip_transform: block size out of range");
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  for (int i = k; i < n; ++i) d(i) = -1.0;
  return d.asDiagonal() * G * d.asDiagonal();
}

}  // namespace crossmax
