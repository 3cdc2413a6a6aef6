#include "crossmax/counterexamples.hpp"

#include <cmath>

namespace crossmax {

namespace {

constexpr double kScaleCap = 1048576.0;  // 2^20

/// min over components and interior nodes.
double interior_min(const VectorField& F) {
  double mn = std::numeric_limits<double>::infinity();
  const Grid& g = F[0].grid;
  for (int c = 0; c < F.m(); ++c)
    for (int node : g.interior_nodes()) mn = std::min(mn, F[c][node]);
  return mn;
}

void record_witness(CounterexampleResult& res, const VectorField& W) {
  const Grid& g = W[0].grid;
  res.witness_value = std::numeric_limits<double>::infinity();
  for (int c = 0; c < W.m(); ++c)
    for (int node : g.interior_nodes())
      if (W[c][node] < res.witness_value) {
        res.witness_value = W[c][node];
        res.witness_component = c;
        res.witness_node = node;
      }
}

std::string first_failing(const VerificationReport& rep) {
  for (const auto& h : rep.hypotheses)
    if (!h.pass) return h.name;
  return "";
}

}  // namespace

CounterexampleResult run_kmp(double a, double b, double d, double kappa, double k,
                             const ConstMatrix& K, const Grid& grid, double tol_pos,
                             bool upper_variant) {
  CounterexampleResult res;
  res.name = upper_variant ? "kmp_upper" : "kmp";
  res.parameters = {{"a", a}, {"b", b}, {"d", d}, {"k", k}};
  if (!(d > b && b > a && a > 0) || !(k > 0)) {
    res.precondition_ok = false;
    res.detail = "requires d > b > a > 0 and k > 0";
    return res;
  }
  if (K.rows() != 2 || K.cols() != 2 || !is_cooperative(K, 0.0)) {
    res.precondition_ok = false;
    res.detail = "K must be a 2x2 cooperative matrix";
    return res;
  }

  const ScalarField& phi = laplace_phi1(grid);
  VectorField W(2, grid);
  W[0] = (-1.0) * phi;
  W[1] = phi;
  record_witness(res, W);

  ConstMatrix A0(2, 2);
  A0 << a, b, (upper_variant ? 0.0 : b), d;

  auto margin_at = [&](double kap) {
    Problem p;
    p.grid = grid;
    p.m = 2;
    p.A = MatrixField::constant(kap * kap * A0, grid);
    p.K = MatrixField::constant(K, grid);
    p.k = k;
    DiscreteOperator op = assemble_system(p);
    return std::make_pair(interior_min(apply(op, W)), p);
  };

  Problem used;
  double margin = -std::numeric_limits<double>::infinity();
  if (kappa > 0) {
    auto [m0, p0] = margin_at(kappa);
    margin = m0;
    used = p0;
  } else {
    for (kappa = 1.0; kappa <= kScaleCap; kappa *= 2) {
      auto [m0, p0] = margin_at(kappa);
      margin = m0;
      used = p0;
      if (margin > 10 * tol_pos) break;
    }
  }
  res.parameters["kappa"] = kappa;
  res.rhs_margin = margin;
  res.expectation_met = margin > tol_pos && res.witness_value < -tol_pos;

  // Independent confirmation: feed f back through the verifier and record
  // which hypothesis rejects the problem.
  if (res.expectation_met) {
    DiscreteOperator op = assemble_system(used);
    used.F = apply(op, W);
    VerifyOptions vo;
    vo.tol_pos = tol_pos;
    VerificationReport rep = verify_GenMPMat(used, vo);
    res.failing_hypothesis = first_failing(rep);
    if (rep.verdict == Verdict::Verified)
      res.notes.push_back("WARNING: verifier accepted the counterexample data");
    if (rep.counterexample_confirmed) res.notes.push_back("verifier confirms negative solve");
  }
  return res;
}

namespace {
const char* kDegenerateNote =
    "diffusion matrix has a zero eigenvalue (degenerate elliptic limit)";
}  // namespace

CounterexampleResult run_3x3(double beta2, double gamma2, double gamma3, double beta1,
                             double R, const Grid& grid, double tol_pos, double k) {
  CounterexampleResult res;
  res.name = "three_by_three";
  res.parameters = {{"beta1", beta1}, {"beta2", beta2}, {"gamma2", gamma2},
                    {"gamma3", gamma3}, {"k", k}};
  res.notes.push_back("only beta1, beta2, gamma2, gamma3 enter the matrix; the "
                      "auxiliary beta3 = gamma2 - 1 clause is notational");
  double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  if (!(beta2 > 0 && beta2 < golden) || !(gamma2 > 1 && gamma2 < beta2 + 1) ||
      !(gamma3 > 0 && gamma3 < 1.0 / (gamma2 - 1)) || !(beta1 * (1 + beta2) > 1)) {
    res.precondition_ok = false;
    res.detail = "parameter ranges: beta2 in (0,(sqrt5-1)/2), 1 < gamma2 < beta2+1, "
                 "0 < gamma3 < 1/(gamma2-1), beta1*(1+beta2) > 1";
    return res;
  }
  // Closed-form inequalities (i')(ii')(iii').
  double i1 = beta1 * (1 + beta2) - 1;
  double i2 = beta2 - (gamma2 - 1);
  double i3 = 1 - (gamma2 - 1) * gamma3;
  res.parameters["ineq_i"] = i1;
  res.parameters["ineq_ii"] = i2;
  res.parameters["ineq_iii"] = i3;
  if (!(i1 > 0 && i2 > 0 && i3 > 0)) {
    res.precondition_ok = false;
    res.detail = "closed-form inequalities violated";
    return res;
  }

  ConstMatrix A0(3, 3);
  A0 << 1, beta1, beta1 * beta2,
        gamma2, 1, beta2,
        gamma3 * gamma2, gamma3, 1;
  {
    RowCondResult rc = matrowconda_check(MatrixField::constant(A0, grid));
    if (!rc.ok) res.notes.push_back("row-multiplier structure check failed: " +
                                    rc.violated_clause);
    else res.notes.push_back("row-multiplier structure conditions hold");
  }

  const ScalarField& psi = laplace_phi1(grid);
  VectorField W(3, grid);
  W[0] = (-1.0) * psi;
  W[1] = psi;
  W[2] = psi;
  record_witness(res, W);

  auto margin_at = [&](double Rv) {
    Problem p;
    p.grid = grid;
    p.m = 3;
    p.A = MatrixField::constant(Rv * Rv * A0, grid);
    p.K = MatrixField(3, grid);
    p.k = k;
    DiscreteOperator op = assemble_system(p);
    if (op.degenerate_warning && res.notes.back() != kDegenerateNote)
      res.notes.push_back(kDegenerateNote);
    return std::make_pair(interior_min(apply(op, W)), p);
  };

  Problem used;
  double margin = -std::numeric_limits<double>::infinity();
  if (R > 0) {
    auto [m0, p0] = margin_at(R);
    margin = m0;
    used = p0;
  } else {
    for (R = 1.0; R <= kScaleCap; R *= 2) {
      auto [m0, p0] = margin_at(R);
      margin = m0;
      used = p0;
      if (margin > 10 * tol_pos) break;
    }
  }
  res.parameters["R"] = R;
  res.rhs_margin = margin;
  res.expectation_met = margin > tol_pos && res.witness_value < -tol_pos;
  if (res.expectation_met) {
    DiscreteOperator op = assemble_system(used);
    used.F = apply(op, W);
    VerifyOptions vo;
    vo.tol_pos = tol_pos;
    VerificationReport rep = verify_GenMPMat(used, vo);
    res.failing_hypothesis = first_failing(rep);
  }
  return res;
}

CounterexampleResult run_function_gamma(double R, double k, const Grid& grid,
                                        double tol_pos, bool delta_variable) {
  CounterexampleResult res;
  res.name = "function_gamma";
  res.parameters = {{"k", k}};
  if (!(k > 0)) {
    res.precondition_ok = false;
    res.detail = "requires k > 0";
    return res;
  }
  if (!(R > 0)) {
    // Doubling search over R. The reduced second right-hand side evaluated
    // at the eigenfunction peak is -(k + ...)psi < 0 independent of R (the
    // rescuing gradient term vanishes there), so the margin never turns
    // positive; stop as soon as growing R stops helping.
    CounterexampleResult best;
    for (double Rv = 1.0; Rv <= kScaleCap; Rv *= 2) {
      CounterexampleResult cur = run_function_gamma(Rv, k, grid, tol_pos, delta_variable);
      if (best.name.empty() || cur.rhs_margin > best.rhs_margin) best = cur;
      if (cur.expectation_met) return cur;
      if (!best.name.empty() && cur.rhs_margin < best.rhs_margin) break;
    }
    best.notes.push_back("auto-R search exhausted without a positive margin");
    return best;
  }
  res.parameters["R"] = R;
  const ScalarField& psi = laplace_phi1(grid);
  ScalarField gamma = psi;  // nonconstant row multiplier
  double aR = R * R;        // unit coefficient, domain scaling folded in

  ScalarField a_field(grid, aR);
  ScalarField d_field(grid, aR);
  if (delta_variable)
    for (int node = 0; node < grid.node_count(); ++node)
      d_field[node] = aR * (1.0 + 0.5 * grid.x_of(node));

  // Original system: -div(a Du) = f1-row, -div(gamma*a Du + d Dv) = f2-row,
  // with reaction k*Id - K, K = [[0,1],[1,0]].
  Problem p;
  p.grid = grid;
  p.m = 2;
  p.A = MatrixField(2, grid);
  p.A.entry(0, 0) = a_field;
  for (int node = 0; node < grid.node_count(); ++node) {
    p.A.entry(1, 0)[node] = gamma[node] * a_field[node];
    p.A.entry(1, 1)[node] = d_field[node];
  }
  ConstMatrix K(2, 2);
  K << 0, 1, 1, 0;
  p.K = MatrixField::constant(K, grid);
  p.k = k;

  VectorField W(2, grid);
  W[0] = psi;
  W[1] = (-1.0) * psi;
  record_witness(res, W);

  DiscreteOperator op = assemble_system(p);
  VectorField F = apply(op, W);

  // Reduced second equation rhs: f2 - gamma*f1 + D(gamma)*a*Du.
  ScalarField rhs2 = F[1];
  auto dgamma = gradient(gamma);
  auto du = gradient(W[0]);
  for (int node : grid.interior_nodes()) {
    double grad_term = 0.0;
    for (int axis = 0; axis < grid.dim; ++axis)
      grad_term += dgamma[axis][node] * a_field[node] * du[axis][node];
    rhs2[node] = F[1][node] - gamma[node] * F[0][node] + grad_term;
  }
  double m1 = std::numeric_limits<double>::infinity(), m2 = m1;
  for (int node : grid.interior_nodes()) {
    m1 = std::min(m1, F[0][node]);
    m2 = std::min(m2, rhs2[node]);
  }
  res.parameters["rhs1_min"] = m1;
  res.parameters["rhs2_min"] = m2;
  res.rhs_margin = std::min(m1, m2);
  res.expectation_met = res.rhs_margin > tol_pos && res.witness_value < -tol_pos;
  if (!res.expectation_met)
    res.detail = "reduced second right-hand side is not positive everywhere "
                 "(dominated by the -lambda1*R^2*psi terms away from the gradient peak)";

  // Independent confirmation of the failing clause: the gradient-sign pairing
  // <D(gamma), Dx G_1> changes sign, so the Green condition cannot hold.
  try {
    ScalarField zero(grid);
    DiscreteOperator op1 = assemble_scalar(a_field, {}, zero, grid);
    GreenColumns gc = green_columns(op1, default_green_sources(grid));
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < gc.sources.size(); ++s)
      for (int node : grid.interior_nodes()) {
        double dot = 0.0;
        for (int axis = 0; axis < grid.dim; ++axis)
          dot += dgamma[axis][node] * gc.grad_x[s][axis][node];
        mn = std::min(mn, dot);
      }
    res.parameters["green_pairing_min"] = mn;
    if (mn < 0) res.failing_hypothesis = "Green sign condition on lower gradient coupling";
  } catch (const Error& e) {
    res.notes.push_back(std::string("green confirmation unavailable: ") + e.what());
  }
  return res;
}

CounterexampleResult run_b_phi(double a, double d, double k, const Grid& grid,
                               double tol_pos) {
  CounterexampleResult res;
  res.name = "b_phi";
  res.parameters = {{"a", a}, {"d", d}};
  if (!(a > 0) || !(d > 0)) {
    res.precondition_ok = false;
    res.detail = "requires a, d > 0";
    return res;
  }
  const ScalarField& phi = laplace_phi1(grid);
  double lambda1 = laplace_lambda1(grid);
  double bmax = 1.0;  // phi is sup-normalized

  // Quadratic b^2 k^2 + (2b - a) d k + d^2 at b = bmax.
  double qa = bmax * bmax, qb = (2 * bmax - a) * d, qc = d * d;
  double disc = qb * qb - 4 * qa * qc;
  if (disc <= 0 || qb >= 0) {
    res.precondition_ok = false;
    res.detail = "quadratic has no two positive roots (need a > 4*max b)";
    return res;
  }
  double r1 = (-qb - std::sqrt(disc)) / (2 * qa);
  double r2 = (-qb + std::sqrt(disc)) / (2 * qa);
  res.parameters["root_low"] = r1;
  res.parameters["root_high"] = r2;
  if (k <= 0) k = 0.5 * (r1 + r2);
  res.parameters["k"] = k;
  if (!(k > r1 && k < r2))
    res.notes.push_back("k outside the root interval: sign term nonpositive expected");

  ScalarField b = phi;
  ScalarField c(grid);
  for (int node = 0; node < grid.node_count(); ++node)
    c[node] = k * a * d / (k * b[node] + d);

  // F from the closed form, with nodal gradients.
  auto db = gradient(b);
  auto dc = gradient(c);
  auto dphi = gradient(phi);
  VectorField F(2, grid);
  for (int node = 0; node < grid.node_count(); ++node) {
    double grad_b_phi = 0.0, grad_c_phi = 0.0;
    for (int axis = 0; axis < grid.dim; ++axis) {
      grad_b_phi += db[axis][node] * dphi[axis][node];
      grad_c_phi += dc[axis][node] * dphi[axis][node];
    }
    F[0][node] = lambda1 * (a - b[node]) * phi[node] + grad_b_phi;
    F[1][node] = lambda1 * (c[node] - d) * phi[node] - grad_c_phi;
  }

  // The raw data is genuinely positive: both components of F are > 0 while
  // W = (phi, -phi) is not, so F-positivity alone cannot imply positivity of
  // the solution for this diffusion matrix.
  res.parameters["untransformed_rhs_min"] = interior_min(F);

  // LB*F with L = [[1,0],[-k,1]] constant by the choice of c.
  VectorField LBF(2, grid);
  for (int node = 0; node < grid.node_count(); ++node) {
    double bf0 = F[0][node] - (b[node] / d) * F[1][node];
    double bf1 = F[1][node];
    LBF[0][node] = bf0;
    LBF[1][node] = -k * bf0 + bf1;
  }
  res.rhs_margin = interior_min(LBF);

  // The source text evaluates the transformed second component as
  // lambda1*(c - d - c*d)*phi + k*(-1 + k*a*d/(k*b+d)^2)*<Db,Dphi>, which is
  // positive for these parameters, but that expression mis-scales the first
  // transformed component by d and drops a (b/d)*Dc*Dphi term. The exact
  // value is -lambda1*d*phi + k*(k*(a-b)-d)/(k*b+d)*<Db,Dphi>, which is
  // necessarily negative at phi's peak (gradient factor vanishes there).
  // Both margins are reported so the discrepancy is visible.
  {
    double claimed = std::numeric_limits<double>::infinity();
    for (int node : grid.interior_nodes()) {
      double grad_b_phi = 0.0;
      for (int axis = 0; axis < grid.dim; ++axis)
        grad_b_phi += db[axis][node] * dphi[axis][node];
      double kbd = k * b[node] + d;
      double row2 = lambda1 * (c[node] - d - c[node] * d) * phi[node] +
                    k * (-1.0 + k * a * d / (kbd * kbd)) * grad_b_phi;
      claimed = std::min({claimed, row2, LBF[0][node]});
    }
    res.parameters["claimed_margin"] = claimed;
    res.notes.push_back("source formula for the transformed rhs gives a positive margin; "
                        "the exact transform evaluates to -lambda1*d*phi at the peak");
  }

  VectorField W(2, grid);
  W[0] = phi;
  W[1] = (-1.0) * phi;
  record_witness(res, W);
  res.expectation_met = res.rhs_margin > tol_pos && res.witness_value < -tol_pos;
  if (res.rhs_margin <= tol_pos)
    res.detail = "transformed rhs has a negative component at the eigenfunction peak "
                 "(exact value -lambda1*d there); the published positivity claim rests "
                 "on a mis-scaled intermediate";

  // The necessity payload: B = [[1, -b/d],[0,1]] violates the constant
  // derivative-pattern condition with residual comparable to max |Dphi|.
  MatrixField Bf(2, grid);
  for (int node = 0; node < grid.node_count(); ++node) {
    ConstMatrix M(2, 2);
    M << 1, -b[node] / d, 0, 1;
    Bf.set_at(node, M);
  }
  PatternReport pr = db_binv_check(Bf, TriMode::Lower);
  res.parameters["db_binv_residual"] = pr.residual;
  double dphi_max = 0.0;
  for (int axis = 0; axis < grid.dim; ++axis) dphi_max = std::max(dphi_max, dphi[axis].max_abs());
  res.parameters["dphi_max"] = dphi_max;
  if (pr.ok) {
    res.expectation_met = false;
    res.detail = "derivative-pattern check unexpectedly passed";
  } else {
    res.failing_hypothesis = "DB*B^-1 lower-triangular constancy";
    if (pr.residual < 0.1 * dphi_max) {
      res.expectation_met = false;
      res.detail = "pattern residual smaller than 0.1*max|Dphi|";
    }
  }
  return res;
}

CounterexampleResult run_conjugation_recovery(double a, double d, double k,
                                              const Grid& grid, double tol_pos) {
  CounterexampleResult res;
  res.name = "conjugation";
  res.parameters = {{"a", a}, {"d", d}, {"k", k}};
  double lambda1 = laplace_lambda1(grid);
  res.parameters["a_lambda1"] = a * lambda1;
  if (!(a > 0) || !(d > 0) || !(k > 0)) {
    res.precondition_ok = false;
    res.detail = "requires a, d, k > 0";
    return res;
  }
  if (!(a * lambda1 < 1)) {
    res.precondition_ok = false;
    res.detail = "requires a*lambda1 < 1 (eigenvectors leave the positive cone)";
    return res;
  }

  ConstMatrix G(2, 2);
  G << a * lambda1, 0, -d * lambda1, 1;
  if (is_cooperative(G, 0.0)) {
    res.precondition_ok = false;
    res.detail = "G is cooperative; nothing to recover";
    return res;
  }
  res.failing_hypothesis = "reaction matrix cooperativity";

  // Nonpositive witness of the diagonal system with reaction G.
  const ScalarField& phi = laplace_phi1(grid);
  VectorField W(2, grid);
  W[0] = phi;
  W[1] = (-k) * phi;
  record_witness(res, W);

  // Conjugation sending the eigenvectors v1 = (0,1), v2 = (1, q) to the
  // coordinate axes: Kc = [[1, 0], [-q, 1]]. Solving (G - a*lambda1*I)v2 = 0
  // gives q = d*lambda1/(1 - a*lambda1); Kc*G*Kc^-1 = diag(a*lambda1, 1).
  double q = d * lambda1 / (1 - a * lambda1);
  res.notes.push_back("eigenvector second component uses d*lambda1/(1-a*lambda1); the "
                      "a*lambda1 numerator variant is an eigenvector only when a = d");
  ConstMatrix Kc(2, 2), Kc_inv(2, 2);
  Kc << 1, 0, -q, 1;
  Kc_inv << 1, 0, q, 1;
  ConstMatrix Gc = Kc * G * Kc_inv;
  double offmin = std::min(Gc(0, 1), Gc(1, 0));
  res.parameters["conjugated_offdiag_min"] = offmin;
  if (offmin < -1e-12) {
    res.expectation_met = false;
    res.detail = "conjugated reaction not cooperative";
    return res;
  }

  // Strong positivity of the conjugated system with an entrywise-positive
  // cooperative M = Gc + ones.
  ConstMatrix M = Gc + ConstMatrix::Ones(2, 2);
  Problem p;
  p.grid = grid;
  p.m = 2;
  ConstMatrix A0(2, 2);
  A0 << a, 0, 0, d;
  p.A = MatrixField::constant(A0, grid);
  p.K = MatrixField::constant(M, grid);
  p.k = k;
  StrongPositivityOptions so;
  so.k_auto = true;
  so.tol_pos = tol_pos;
  VerificationReport rep = verify_strong_positivity(
      p, M, MatrixField::constant(ConstMatrix::Identity(2, 2), grid), so);
  for (const auto& h : rep.hypotheses)
    if (h.name == "boundary-of-cone battery maps strictly interior")
      res.rhs_margin = h.margin;
  res.expectation_met = rep.verdict == Verdict::Verified &&
                        res.rhs_margin > tol_pos && res.witness_value < -tol_pos;
  if (rep.verdict != Verdict::Verified) res.detail = "strong positivity battery failed";
  return res;
}

}  // namespace crossmax
