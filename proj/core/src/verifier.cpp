#include "crossmax/verifier.hpp"

#include <cmath>

namespace crossmax {

std::string theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::Lopez: return "lopez";
    case TheoremId::MaxMat: return "maxmat";
    case TheoremId::MatMaxPrinciple: return "matmaxprinciple";
    case TheoremId::GenMPMat: return "GenMPMat";
    case TheoremId::GenMPMatT: return "GenMPMatT";
    case TheoremId::GenMPMatTKR: return "GenMPMatTKR";
    case TheoremId::GenMPMatTKRnew: return "GenMPMatTKRnew";
  }
  return "unknown";
}

PositivityCheck strictly_positive(const VectorField& W, double tol_pos) {
  PositivityCheck out;
  out.min_deep = std::numeric_limits<double>::infinity();
  out.min_interior = std::numeric_limits<double>::infinity();
  const Grid& g = W[0].grid;
  for (int c = 0; c < W.m(); ++c)
    for (int node = 0; node < g.node_count(); ++node) {
      if (!g.is_interior(node)) continue;
      double v = W[c][node];
      if (v < out.min_interior) out.min_interior = v;
      if (g.boundary_distance(node) >= 2 && v < out.min_deep) {
        out.min_deep = v;
        out.worst_component = c;
        out.worst_node = node;
      }
    }
  out.positive = out.min_deep > tol_pos && out.min_interior >= -tol_pos;
  return out;
}

LopezResult lopez_condition_check(const std::vector<DiscreteOperator>& scalar_ops,
                                  const ConstMatrix& K, double k) {
  int m = static_cast<int>(scalar_ops.size());
  if (K.rows() != m || K.cols() != m) throw Error("lopez_condition_check: K shape mismatch");
  std::vector<EigenPair> pairs;
  pairs.reserve(m);
  for (const auto& op : scalar_ops) {
    if (op.m != 1) throw Error("lopez_condition_check: scalar operators required");
    pairs.push_back(principal_eigenpair(op));
  }
  const Grid& g = scalar_ops[0].grid;
  LopezResult res;
  for (const auto& p : pairs) res.lambdas.push_back(p.lambda1);
  res.margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i)
    for (int node : g.interior_nodes()) {
      double lhs = (pairs[i].lambda1 + k) * pairs[i].phi[0][node];
      double rhs = 0.0;
      for (int j = 0; j < m; ++j) rhs += K(i, j) * pairs[j].phi[0][node];
      res.margin = std::min(res.margin, lhs - rhs);
    }
  res.pass = res.margin > 0;
  return res;
}

ConeResult cone_check(const VectorField& F, const MatrixField& LB) {
  int m = LB.n();
  if (F.m() != m) throw Error("cone_check: dimension mismatch");
  const Grid& g = LB.grid();
  ConeResult res;
  res.margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i)
    for (int node : g.interior_nodes()) {
      double v = 0.0;
      for (int j = 0; j < m; ++j) v += LB.entry(i, j)[node] * F[j][node];
      res.margin = std::min(res.margin, v);
    }
  res.pass = res.margin > 0;
  return res;
}

namespace {

MatrixField constant_identity(int m, const Grid& g) {
  return MatrixField::constant(ConstMatrix::Identity(m, m), g);
}

bool is_constant_identity(const MatrixField& T, double tol = 1e-13) {
  for (int i = 0; i < T.n(); ++i)
    for (int j = 0; j < T.n(); ++j) {
      double want = i == j ? 1.0 : 0.0;
      for (double v : T.entry(i, j).values)
        if (std::abs(v - want) > tol) return false;
    }
  return true;
}

/// div(A * DTinv) summed over axes, entrywise nodal differentiation.
MatrixField divergence_of(const MatrixField& A, const std::vector<MatrixField>& DTinv) {
  MatrixField out(A.n(), A.grid());
  for (int axis = 0; axis < A.grid().dim; ++axis) {
    MatrixField flux = A.multiply(DTinv[axis]);
    MatrixField dflux = flux.gradient_per_axis()[axis];
    out = out.add(dflux);
  }
  return out;
}

double off_diag_min(const MatrixField& M) {
  double v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < M.n(); ++i)
    for (int j = 0; j < M.n(); ++j) {
      if (i == j) continue;
      for (double x : M.entry(i, j).values) v = std::min(v, x);
    }
  return v;
}

double diag_min(const MatrixField& M) {
  double v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < M.n(); ++i)
    for (double x : M.entry(i, i).values) v = std::min(v, x);
  return v;
}

double upper_max_abs(const MatrixField& M) {
  double v = 0.0;
  for (int i = 0; i < M.n(); ++i)
    for (int j = i + 1; j < M.n(); ++j) v = std::max(v, M.entry(i, j).max_abs());
  return v;
}

double strict_lower_min(const MatrixField& M) {
  double v = std::numeric_limits<double>::infinity();
  for (int i = 1; i < M.n(); ++i)
    for (int j = 0; j < i; ++j)
      for (double x : M.entry(i, j).values) v = std::min(v, x);
  return v;
}

/// Shared hypothesis pipeline for the transform-based theorems. T must be a
/// well-formed m x m field (identity for the plain case).
VerificationReport run_pipeline(const Problem& p, const MatrixField& T, bool with_T_clauses,
                                const VerifyOptions& opts, double k) {
  VerificationReport rep;
  rep.k_used = k;
  const Grid& g = p.grid;
  int m = p.m;
  bool T_is_identity = is_constant_identity(T);

  // Hypothesis: block structure of (A, B, T) when a nontrivial T is used.
  if (with_T_clauses) {
    HypothesisResult h;
    h.name = "block relation (khat/kbar) for (A,B,T)";
    if (T_is_identity) {
      h.pass = true;
      h.detail = "T = identity: clauses hold trivially";
    } else {
      MatrixField Bf = p.B_axes.empty() ? MatrixField(m, g) : p.B_axes[0];
      BlockGenResult bg = blockgencond_check(p.A, Bf, T, opts.tol_const);
      h.pass = bg.ok;
      h.margin = -bg.max_residual;
      h.detail = bg.ok ? "constant khat/kbar recovered" : bg.failure;
    }
    rep.hypotheses.push_back(h);
  }

  // Hypothesis 1: constant transform B with B*A*T^-1 = L^-1*A_d.
  TransformBundle bundle;
  bool have_bundle = false;
  {
    HypothesisResult h;
    h.name = "constant triangularizing transform exists";
    try {
      bundle = construct_transform(
          p.A, T_is_identity ? TransformStructure::Alt : TransformStructure::BlockGen,
          T_is_identity ? nullptr : &T, opts.tol_const);
      have_bundle = true;
      h.pass = true;
      h.margin = -bundle.residual;
      h.detail = "residual " + std::to_string(bundle.residual);
    } catch (const Error& e) {
      h.pass = false;
      h.detail = e.what();
    }
    rep.hypotheses.push_back(h);
  }

  MatrixField Tinv = T_is_identity ? T : T.inverse();
  double tol_sign = 1e-9 * std::max(1.0, p.A.max_abs() + p.K.max_abs() + std::abs(k));

  if (have_bundle) {
    MatrixField LB = bundle.L_mat.multiply_const(bundle.B_const);

    // Zeroth-order coupling of the transformed system:
    //   Mv = LB * [ -div(A D(T^-1)) + B D(T^-1) + (kI - K) T^-1 ].
    MatrixField inner = MatrixField::constant(k * ConstMatrix::Identity(m, m), g)
                            .add(p.K.scale(-1.0))
                            .multiply(Tinv);
    if (!T_is_identity) {
      auto DTinv = Tinv.gradient_per_axis();
      inner = inner.add(divergence_of(p.A, DTinv).scale(-1.0));
      for (int axis = 0; axis < g.dim && axis < static_cast<int>(p.B_axes.size()); ++axis)
        inner = inner.add(p.B_axes[axis].multiply(DTinv[axis]));
    }
    MatrixField Mv = LB.multiply(inner);
    MatrixField CoupleM = Mv.scale(-1.0);  // moved to the right-hand side

    // Gradient coupling: C_axis = -(D_axis(LB) * A * T^-1 + LB * B_axis * T^-1).
    MatrixField ATinv = T_is_identity ? p.A : p.A.multiply(Tinv);
    auto DLB = LB.gradient_per_axis();
    std::vector<MatrixField> C_axes;
    for (int axis = 0; axis < g.dim; ++axis) {
      MatrixField C = DLB[axis].multiply(ATinv);
      if (!p.B_axes.empty()) C = C.add(LB.multiply(p.B_axes[axis]).multiply(Tinv));
      C_axes.push_back(C.scale(-1.0));
    }

    // Hypothesis: gradient coupling is lower triangular.
    {
      HypothesisResult h;
      h.name = "gradient coupling C lower triangular";
      double worst = 0.0;
      for (const auto& C : C_axes) worst = std::max(worst, upper_max_abs(C));
      h.margin = -worst;
      h.pass = worst <= tol_sign;
      h.detail = "max upper-entry magnitude " + std::to_string(worst);
      rep.hypotheses.push_back(h);
    }

    // Diagonal comparison operators.
    std::vector<DiscreteOperator> comp_ops;
    std::vector<DiscreteOperator> comp_ops_no_c;  // eigenpair route
    bool comp_ok = true;
    std::string comp_err;
    try {
      for (int i = 0; i < m; ++i) {
        std::vector<ScalarField> b_axes;
        for (const auto& C : C_axes) b_axes.push_back((-1.0) * C.entry(i, i));
        comp_ops.push_back(assemble_scalar(bundle.A_d.entry(i, i), b_axes, Mv.entry(i, i), g));
        ScalarField zero(g);
        comp_ops_no_c.push_back(assemble_scalar(bundle.A_d.entry(i, i), b_axes, zero, g));
      }
    } catch (const Error& e) {
      comp_ok = false;
      comp_err = e.what();
    }

    // Hypothesis: reaction coupling admits a cooperative/triangular route.
    {
      HypothesisResult h;
      h.name = "reaction coupling cooperative (triangular or eigen route)";
      double up = upper_max_abs(CoupleM);
      double low = strict_lower_min(CoupleM);
      double dg = diag_min(Mv);
      bool route_tri = up <= tol_sign && low >= -tol_sign && dg >= -tol_sign;
      bool route_eig = false;
      double eig_margin = -std::numeric_limits<double>::infinity();
      if (!route_tri && comp_ok && off_diag_min(CoupleM) >= -tol_sign) {
        try {
          std::vector<EigenPair> pairs;
          for (const auto& op : comp_ops_no_c) pairs.push_back(principal_eigenpair(op));
          rep.lambda1 = pairs[0].lambda1;
          eig_margin = std::numeric_limits<double>::infinity();
          for (int i = 0; i < m; ++i)
            for (int node : g.interior_nodes()) {
              double lhs = (pairs[i].lambda1 + Mv.entry(i, i)[node]) * pairs[i].phi[0][node];
              double rhs = 0.0;
              for (int j = 0; j < m; ++j)
                if (j != i) rhs += CoupleM.entry(i, j)[node] * pairs[j].phi[0][node];
              eig_margin = std::min(eig_margin, lhs - rhs);
            }
          route_eig = eig_margin > 0;
        } catch (const Error&) {
          route_eig = false;
        }
      }
      h.pass = route_tri || route_eig;
      h.margin = route_tri ? std::min(low, dg) : eig_margin;
      h.detail = route_tri ? "triangular route (upper part vanishes, lower part nonnegative)"
                 : route_eig
                     ? "eigenfunction route, margin " + std::to_string(eig_margin)
                     : "neither triangular nor cooperative-eigen route holds";
      rep.hypotheses.push_back(h);
    }

    // Hypothesis: Green sign condition on the strictly lower part of C.
    {
      HypothesisResult h;
      h.name = "Green sign condition on lower gradient coupling";
      double cmax = 0.0;
      for (const auto& C : C_axes)
        for (int i = 1; i < m; ++i)
          for (int j = 0; j < i; ++j) cmax = std::max(cmax, C.entry(i, j).max_abs());
      if (cmax <= tol_sign) {
        h.pass = true;
        h.margin = 0.0;
        h.detail = "lower gradient coupling vanishes";
      } else if (!comp_ok) {
        h.pass = false;
        h.detail = "comparison operators unavailable: " + comp_err;
      } else {
        try {
          std::vector<GreenColumns> greens;
          std::vector<int> sources = default_green_sources(g, opts.sample_density);
          for (int j = 0; j < m - 1; ++j) greens.push_back(green_columns(comp_ops[j], sources));
          std::vector<std::vector<std::vector<ScalarField>>> c_fields(
              m, std::vector<std::vector<ScalarField>>(m));
          for (int i = 1; i < m; ++i)
            for (int j = 0; j < i; ++j)
              for (const auto& C : C_axes) c_fields[i][j].push_back(C.entry(i, j));
          GreenSignReport gs = green_sign_condition(c_fields, greens, g);
          double worst = std::numeric_limits<double>::infinity();
          for (const auto& pr : gs.pairs) worst = std::min(worst, pr.min_value);
          h.pass = gs.holds;
          h.margin = worst;
          h.detail = "min <c_ij, DxG_j> = " + std::to_string(worst);
        } catch (const Error& e) {
          h.pass = false;
          h.detail = e.what();
        }
      }
      rep.hypotheses.push_back(h);
    }

    // Hypothesis: right-hand side in the cone LB*F >> 0.
    {
      HypothesisResult h;
      h.name = "rhs cone (LB*F strictly positive)";
      ConeResult cr = cone_check(p.F, LB);
      h.pass = cr.pass;
      h.margin = cr.margin;
      rep.hypotheses.push_back(h);
    }
  }

  // Direct solve of the untransformed system (always attempted).
  try {
    Problem pk = p;
    pk.k = k;
    DiscreteOperator op = assemble_system(pk);
    rep.W = solve(op, p.F);
    rep.solve_ok = true;
    VectorField TW = rep.W;
    if (!T_is_identity) {
      TW = VectorField(m, g);
      for (int node = 0; node < g.node_count(); ++node) {
        Eigen::VectorXd w(m);
        for (int c = 0; c < m; ++c) w(c) = rep.W[c][node];
        Eigen::VectorXd tw = T.at(node) * w;
        for (int c = 0; c < m; ++c) TW[c][node] = tw(c);
      }
    }
    double scale = 1.0;
    for (int c = 0; c < m; ++c) scale = std::max(scale, TW[c].max_abs());
    PositivityCheck pc = strictly_positive(TW, opts.tol_pos * scale);
    rep.solution_positive = pc.positive;
    rep.min_component = pc.min_interior;
    rep.min_component_index = pc.worst_component;
    rep.min_node = pc.worst_node;
  } catch (const Error& e) {
    rep.solve_ok = false;
    rep.error_message = e.what();
  }

  bool hyps = rep.all_hypotheses_pass();
  if (hyps && rep.solve_ok && rep.solution_positive)
    rep.verdict = Verdict::Verified;
  else if (!rep.solve_ok && hyps)
    rep.verdict = Verdict::InternalError;
  else
    rep.verdict = Verdict::HypothesesUnmet;
  rep.counterexample_confirmed = !hyps && rep.solve_ok && rep.min_component < 0 &&
                                 !rep.solution_positive;
  return rep;
}

VerificationReport run_with_k_policy(const Problem& p, const MatrixField& T,
                                     bool with_T_clauses, const VerifyOptions& opts) {
  if (!opts.k_auto) return run_pipeline(p, T, with_T_clauses, opts, p.k);
  VerificationReport last;
  for (double k = 1.0; k <= double(1 << 20); k *= 2) {
    last = run_pipeline(p, T, with_T_clauses, opts, k);
    last.k_auto = true;
    if (last.all_hypotheses_pass()) return last;
    // Structural failures are k-independent; bail out early.
    if (!last.hypotheses.empty() && !last.hypotheses.front().pass) return last;
  }
  return last;
}

}  // namespace

VerificationReport verify_GenMPMat(const Problem& p, const VerifyOptions& opts) {
  VerificationReport rep =
      run_with_k_policy(p, constant_identity(p.m, p.grid), false, opts);
  rep.theorem = TheoremId::GenMPMat;
  return rep;
}

VerificationReport verify_GenMPMatT(const Problem& p, const MatrixField& T,
                                    const VerifyOptions& opts) {
  VerificationReport rep = run_with_k_policy(p, T, true, opts);
  rep.theorem = TheoremId::GenMPMatT;
  return rep;
}

PerronResult perron_of_resolvent(const DiscreteOperator& op, const ConstMatrix& M) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(op.matrix);
  if (lu.info() != Eigen::Success) throw Error("perron_of_resolvent: singular operator");
  int m = op.m, N = op.grid.interior_count();
  auto applyM = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m * N);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (M(i, j) != 0.0) out.segment(i * N, N) += M(i, j) * v.segment(j * N, N);
    return out;
  };
  PerronResult res;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m * N);
  v /= v.cwiseAbs().maxCoeff();
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    Eigen::VectorXd w = lu.solve(applyM(v));
    double norm = w.cwiseAbs().maxCoeff();
    if (!(norm > 0)) throw Error("perron_of_resolvent: iteration collapsed");
    w /= norm;
    if (it > 0 && std::abs(norm - std::abs(lambda)) <= 1e-12 * std::max(1.0, norm) &&
        (w - v).cwiseAbs().maxCoeff() <= 1e-10) {
      res.converged = true;
      lambda = norm;
      v = w;
      break;
    }
    lambda = norm;
    v = w;
  }
  if (!res.converged) throw Error("perron_of_resolvent: power iteration did not converge");
  // Sign fix: dominant entry positive.
  double vmax = 0.0;
  int imax = 0;
  for (int i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > vmax) {
      vmax = std::abs(v(i));
      imax = i;
    }
  if (v(imax) < 0) v = -v;
  res.eigenvalue = lambda;
  res.vector = v;
  return res;
}

VerificationReport verify_strong_positivity(const Problem& p, const ConstMatrix& M,
                                            const MatrixField& T,
                                            const StrongPositivityOptions& opts) {
  VerificationReport rep;
  rep.theorem = TheoremId::GenMPMatTKR;
  const Grid& g = p.grid;
  int m = p.m;
  bool T_is_identity = is_constant_identity(T);

  TransformBundle bundle;
  {
    HypothesisResult h;
    h.name = "constant triangularizing transform exists";
    try {
      bundle = construct_transform(
          p.A, T_is_identity ? TransformStructure::Alt : TransformStructure::BlockGen,
          T_is_identity ? nullptr : &T);
      h.pass = true;
      h.margin = -bundle.residual;
    } catch (const Error& e) {
      h.pass = false;
      h.detail = e.what();
      rep.hypotheses.push_back(h);
      rep.verdict = Verdict::HypothesesUnmet;
      return rep;
    }
    rep.hypotheses.push_back(h);
  }

  MatrixField Tinv = T_is_identity ? T : T.inverse();
  MatrixField LB = bundle.L_mat.multiply_const(bundle.B_const);
  double tol = 1e-12 * std::max(1.0, LB.max_abs() * std::max(1.0, M.cwiseAbs().maxCoeff()));

  // Hypothesis: LB * M * T^-1 entrywise positive.
  {
    HypothesisResult h;
    h.name = "LB*M*T^-1 entrywise positive";
    MatrixField LBM = LB.multiply_const(M).multiply(Tinv);
    double mn = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (double v : LBM.entry(i, j).values) mn = std::min(mn, v);
    h.margin = mn;
    h.pass = mn > tol;
    rep.hypotheses.push_back(h);
  }

  // k policy: double until the cooperativity clause holds.
  auto cooperativity_margin = [&](double k) {
    MatrixField inner = MatrixField::constant(-k * ConstMatrix::Identity(m, m), g)
                            .add(p.K)
                            .multiply(Tinv);
    MatrixField Chat_part = LB.multiply(inner);
    if (!T_is_identity) {
      auto DTinv = Tinv.gradient_per_axis();
      MatrixField grad_part(m, g);
      for (int axis = 0; axis < g.dim; ++axis) {
        MatrixField t = LB.gradient_per_axis()[axis].multiply(p.A).multiply(DTinv[axis]);
        if (!p.B_axes.empty())
          t = t.add(LB.multiply(p.B_axes[axis]).multiply(DTinv[axis]));
        grad_part = grad_part.add(t);
      }
      Chat_part = Chat_part.add(grad_part);
    }
    return off_diag_min(Chat_part);
  };
  double k = p.k;
  double coop_margin = cooperativity_margin(k);
  if (opts.k_auto) {
    for (double kk = std::max(1.0, p.k); kk <= double(1 << 20); kk *= 2) {
      coop_margin = cooperativity_margin(kk);
      k = kk;
      if (coop_margin >= -tol) break;
    }
  }
  rep.k_used = k;
  {
    HypothesisResult h;
    h.name = "Chat + LB*(K-kI)*T^-1 cooperative";
    h.margin = coop_margin;
    h.pass = coop_margin >= -tol;
    rep.hypotheses.push_back(h);
  }

  // Hypothesis: gradient coupling C diagonal.
  {
    HypothesisResult h;
    h.name = "gradient coupling C diagonal";
    MatrixField ATinv = T_is_identity ? p.A : p.A.multiply(Tinv);
    auto DLB = LB.gradient_per_axis();
    double worst = 0.0;
    for (int axis = 0; axis < g.dim; ++axis) {
      MatrixField C = DLB[axis].multiply(ATinv);
      if (!p.B_axes.empty()) C = C.add(LB.multiply(p.B_axes[axis]).multiply(Tinv));
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          if (i != j) worst = std::max(worst, C.entry(i, j).max_abs());
    }
    h.margin = -worst;
    h.pass = worst <= 1e-9 * std::max(1.0, p.A.max_abs());
    rep.hypotheses.push_back(h);
  }

  // Build Lhat for a given kappa and run the cone battery + Perron check.
  MatrixField LBinvT = LB.inverse().multiply(T_is_identity ? constant_identity(m, g) : T);
  auto build_op = [&](double kappa) {
    Problem pk = p;
    pk.k = k;
    pk.K = p.K.add(LBinvT.scale(-kappa));  // +kappa*(LB)^-1*T*W on the left
    return assemble_system(pk);
  };
  auto battery = [&](const DiscreteOperator& op, double& worst_margin) {
    worst_margin = std::numeric_limits<double>::infinity();
    const ScalarField& phi = laplace_phi1(g);
    for (int c = 0; c < m; ++c) {
      VectorField Fin(m, g);
      Fin[c] = phi;  // boundary-of-cone input: one component only
      // Apply M then solve.
      VectorField MF(m, g);
      for (int i = 0; i < m; ++i)
        for (int node = 0; node < g.node_count(); ++node) {
          double v = 0.0;
          for (int j = 0; j < m; ++j) v += M(i, j) * Fin[j][node];
          MF[i][node] = v;
        }
      VectorField X = solve(op, MF);
      double scale = 1.0;
      for (int i = 0; i < m; ++i) scale = std::max(scale, X[i].max_abs());
      PositivityCheck pc = strictly_positive(X, opts.tol_pos * scale);
      worst_margin = std::min(worst_margin, pc.min_deep);
      if (!pc.positive) return false;
    }
    return true;
  };

  double kappa = opts.kappa;
  bool battery_ok = false;
  double battery_margin = 0.0;
  DiscreteOperator op;
  std::string battery_err;
  if (kappa > 0) {
    try {
      op = build_op(kappa);
      battery_ok = battery(op, battery_margin);
    } catch (const Error& e) {
      battery_err = e.what();
    }
  } else {
    for (double kap = 1.0; kap <= double(1 << 20); kap *= 2) {
      try {
        op = build_op(kap);
        kappa = kap;
        if (battery(op, battery_margin)) {
          battery_ok = true;
          break;
        }
      } catch (const Error& e) {
        battery_err = e.what();
      }
    }
  }
  rep.kappa_used = kappa;
  {
    HypothesisResult h;
    h.name = "boundary-of-cone battery maps strictly interior";
    h.pass = battery_ok;
    h.margin = battery_margin;
    h.detail = battery_err;
    rep.hypotheses.push_back(h);
  }

  // Perron eigenvector of Lhat^-1 M strictly positive.
  {
    HypothesisResult h;
    h.name = "Perron eigenvector strictly positive";
    try {
      PerronResult pr = perron_of_resolvent(op, M);
      rep.lambda1 = pr.eigenvalue;
      VectorField V = extend_interior(pr.vector, g, m);
      PositivityCheck pc = strictly_positive(V, opts.tol_pos);
      h.pass = pc.positive;
      h.margin = pc.min_deep;
      if (!pc.positive) h.detail = "mixed-sign eigenvector";
    } catch (const Error& e) {
      h.pass = false;
      h.detail = e.what();
    }
    rep.hypotheses.push_back(h);
  }

  rep.solve_ok = true;
  rep.solution_positive = battery_ok;
  rep.verdict = rep.all_hypotheses_pass() ? Verdict::Verified : Verdict::HypothesesUnmet;
  return rep;
}

PposPcoopResult build_PposPcoop(const ConstMatrix& LB, const ConstMatrix& T, double k,
                                SpecialCase which, int nu_star) {
  (void)which;  // the case only selects the caller's (LB,T) shape; recorded upstream
  int n = static_cast<int>(LB.rows());
  ConstMatrix I = ConstMatrix::Identity(n, n);
  ConstMatrix J = ConstMatrix::Ones(n, n);

  ConstMatrix T_used;
  if (T.size() > 0) {
    T_used = T;
  } else if (nu_star >= 0) {
    // Positive T with Z-matrix inverse: T = ((n+1)I - J)^-1.
    T_used = ((double(n) + 1.0) * I - J).inverse();
  } else {
    // Competitive branch: T = -[(2J - I)(J + I)]^-1, mixed-sign with
    // T^-1 * Ppos^-1 entrywise negative for Ppos = J + I.
    T_used = -((2.0 * J - I) * (J + I)).inverse();
  }

  std::vector<ConstMatrix> ppos_candidates;
  ppos_candidates.push_back(J + I);
  {
    double s = 2.5 * n + 1.0;
    ppos_candidates.push_back((s * I - 2.5 * J).inverse());
  }
  std::vector<ConstMatrix> pcoop_candidates;
  pcoop_candidates.push_back(ConstMatrix::Zero(n, n));
  pcoop_candidates.push_back(J - I);
  pcoop_candidates.push_back(-I);

  PposPcoopResult best;
  double cap = double(1 << 20);
  for (const ConstMatrix& Ppos : ppos_candidates) {
    if (Ppos.minCoeff() <= 0) continue;  // must be entrywise positive
    ConstMatrix Ppos_inv = Ppos.inverse();
    ConstMatrix Tinv = T_used.inverse();
    ConstMatrix X = Tinv * Ppos_inv * T_used;
    for (const ConstMatrix& Pcoop : pcoop_candidates) {
      if (!is_cooperative(Pcoop, 0.0)) continue;
      ConstMatrix Y = Tinv * Ppos_inv * (Pcoop * T_used + k * LB);
      // Feasible kappa interval for kappa*X > Y entrywise.
      double lo = -std::numeric_limits<double>::infinity();
      double hi = std::numeric_limits<double>::infinity();
      bool feasible = true;
      double tolX = 1e-13 * std::max(1.0, X.cwiseAbs().maxCoeff());
      for (int i = 0; i < n && feasible; ++i)
        for (int j = 0; j < n && feasible; ++j) {
          if (X(i, j) > tolX)
            lo = std::max(lo, Y(i, j) / X(i, j));
          else if (X(i, j) < -tolX)
            hi = std::min(hi, Y(i, j) / X(i, j));
          else if (Y(i, j) >= 0)
            feasible = false;
        }
      if (!feasible || lo >= hi) continue;
      // Prefer a power of two inside the window; fall back to the midpoint.
      double kappa = 0.0;
      for (double c = 1.0; c <= cap; c *= 2)
        if (c > lo && c < hi) {
          kappa = c;
          break;
        }
      if (kappa == 0.0) {
        double a = std::max(lo, 0.0), b = std::min(hi, cap);
        if (a >= b) continue;
        kappa = 0.5 * (a + b);
      }
      ConstMatrix diff = kappa * X - Y;
      double margin = diff.minCoeff();
      if (margin > 0 && (!best.ok || margin > best.margin_62)) {
        best.ok = true;
        best.P_pos = Ppos;
        best.P_coop = Pcoop;
        best.kappa = kappa;
        best.margin_62 = margin;
        best.T_used = T_used;
        best.M = LB.inverse() * (Ppos + kappa * I - Pcoop) * T_used - k * I;
      }
    }
  }
  if (!best.ok) {
    best.failure = "no (P_pos, P_coop, kappa) candidate satisfies the entrywise "
                   "inequality for the given LB, T, k";
    best.T_used = T_used;
  }
  return best;
}

}  // namespace crossmax
