// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and timed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "crossmax/counterexamples.hpp"
#include "crossmax/verifier.hpp"

using namespace crossmax;

namespace {

int g_failures = 0;

void run_criterion(int num, const std::string& title, double budget_seconds,
                   const std::function<std::string()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  std::string reason;
  try {
    reason = body();
  } catch (const std::exception& e) {
    reason = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (reason.empty() && budget_seconds > 0 && secs > budget_seconds)
    reason = "runtime " + std::to_string(secs) + "s exceeds " +
             std::to_string(budget_seconds) + "s";
  if (reason.empty()) {
    std::printf("PASS  criterion %2d: %s (%.2fs)\n", num, title.c_str(), secs);
  } else {
    std::printf("FAIL  criterion %2d: %s -- %s\n", num, title.c_str(), reason.c_str());
    ++g_failures;
  }
}

VectorField phi_rhs(const Grid& g, const std::vector<double>& w) {
  const ScalarField& phi = laplace_phi1(g);
  VectorField F(static_cast<int>(w.size()), g);
  for (std::size_t c = 0; c < w.size(); ++c)
    for (int node : g.interior_nodes()) F[c][node] = w[c] * phi[node];
  return F;
}

double independent_solve_min(const Problem& p) {
  DiscreteOperator op = assemble_system(p);
  VectorField W = solve(op, p.F);
  double mn = std::numeric_limits<double>::infinity();
  for (int c = 0; c < p.m; ++c)
    for (int node : p.grid.interior_nodes()) mn = std::min(mn, W[c][node]);
  return mn;
}

}  // namespace

int main() {
  const ConstMatrix kSwap = [] {
    ConstMatrix K(2, 2);
    K << 0, 1, 1, 0;
    return K;
  }();

  run_criterion(1, "classical cooperative maximum principle (diagonal A)", 1.0, [&] {
    Grid g(1, 64);
    std::vector<DiscreteOperator> ops;
    for (double a : {1.0, 2.0}) {
      ScalarField af(g, a), zero(g, 0.0);
      ops.push_back(assemble_scalar(af, {}, zero, g));
    }
    double k = 1.0;
    while (k <= 1048576.0 && !lopez_condition_check(ops, kSwap, k).pass) k *= 2;
    if (!lopez_condition_check(ops, kSwap, k).pass) return std::string("no admissible k");
    Problem p;
    p.grid = g;
    p.m = 2;
    ConstMatrix A(2, 2);
    A << 1, 0, 0, 2;
    p.A = MatrixField::constant(A, g);
    p.K = MatrixField::constant(kSwap, g);
    p.k = k;
    p.F = phi_rhs(g, {1.0, 1.0});
    VerificationReport r = verify_GenMPMat(p, {});
    if (r.verdict != Verdict::Verified) return std::string("verdict not VERIFIED");
    if (independent_solve_min(p) <= 0) return std::string("direct solve min not positive");
    return std::string();
  });

  run_criterion(2, "full symmetric diffusion violates positivity (scaled witness)", 1.0, [&] {
    Grid g(1, 64);
    CounterexampleResult r = run_kmp(1, 2, 5, 0, 1, kSwap, g);
    if (!r.precondition_ok) return std::string("precondition rejected");
    if (!r.expectation_met) return std::string("expectation not met");
    if (!(r.rhs_margin > 10 * 1e-12)) return std::string("rhs margin too small");
    if (!(r.witness_value < -10 * 1e-12)) return std::string("witness not negative");
    return std::string();
  });

  run_criterion(3, "3x3 structured counterexample at the stated parameters", 2.0, [&] {
    double beta1 = 0.7, beta2 = 0.5, gamma2 = 1.4, gamma3 = 2.0;
    if (!(beta1 * (1 + beta2) > 1)) return std::string("inequality (i') fails");
    if (!(beta2 > gamma2 - 1)) return std::string("inequality (ii') fails");
    if (!(1 > (gamma2 - 1) * gamma3)) return std::string("inequality (iii') fails");
    Grid g(1, 64);
    CounterexampleResult r = run_3x3(beta2, gamma2, gamma3, beta1, 0, g);
    if (!r.precondition_ok) return std::string("precondition rejected: " + r.detail);
    if (!r.expectation_met) return std::string("expectation not met");
    return std::string();
  });

  run_criterion(4, "lower-triangular diffusion verified stably under refinement", 0, [&] {
    for (int n : {32, 64}) {
      Problem p;
      p.grid = Grid(1, n);
      p.m = 2;
      ConstMatrix A(2, 2), K(2, 2);
      A << 1, 0, 1, 1;
      K << 0, 0, 1, 0;
      p.A = MatrixField::constant(A, p.grid);
      p.K = MatrixField::constant(K, p.grid);
      p.F = phi_rhs(p.grid, {1.0, 3.0});
      VerifyOptions opts;
      opts.k_auto = true;
      VerificationReport r = verify_GenMPMat(p, opts);
      if (r.verdict != Verdict::Verified)
        return "not VERIFIED at n = " + std::to_string(n);
      if (independent_solve_min(p) <= 0)
        return "direct solve min not positive at n = " + std::to_string(n);
    }
    return std::string();
  });

  run_criterion(5, "principal eigenvalue accuracy in 1D and 2D", 5.0, [&] {
    double l1 = laplace_lambda1(Grid(1, 128));
    if (std::abs(l1 - M_PI * M_PI) > 1e-3 * M_PI * M_PI)
      return std::string("1D lambda1 off by more than 0.1%");
    double l2 = laplace_lambda1(Grid(2, 64));
    if (std::abs(l2 - 2 * M_PI * M_PI) > 5e-3 * 2 * M_PI * M_PI)
      return std::string("2D lambda1 off by more than 0.5%");
    return std::string();
  });

  run_criterion(6, "Green column symmetry and reconstruction", 0, [&] {
    {
      Grid g(1, 32);
      ScalarField one(g, 1.0), zero(g, 0.0);
      DiscreteOperator op = assemble_scalar(one, {}, zero, g);
      std::vector<int> sources = g.interior_nodes();
      GreenColumns gc = green_columns(op, sources);
      double worst = 0.0;
      for (std::size_t i = 0; i < sources.size(); ++i)
        for (std::size_t j = 0; j < sources.size(); ++j)
          worst = std::max(worst, std::abs(gc.columns[i][sources[j]] -
                                           gc.columns[j][sources[i]]));
      if (worst > 1e-9) return std::string("symmetry defect above 1e-9");
    }
    {
      Grid g(1, 64);
      ScalarField one(g, 1.0), zero(g, 0.0);
      DiscreteOperator op = assemble_scalar(one, {}, zero, g);
      std::vector<int> sources = g.interior_nodes();
      GreenColumns gc = green_columns(op, sources);
      ScalarField Psi(g);
      for (int node = 0; node < g.node_count(); ++node) {
        double x = g.x_of(node);
        Psi[node] = std::sin(M_PI * x) + 0.5 * x * (1 - x);
      }
      VectorField rhs(1, g);
      for (int node : g.interior_nodes()) rhs[0][node] = Psi[node];
      VectorField direct = solve(op, rhs);
      double err = 0.0, scale = direct[0].max_abs();
      for (int node : g.interior_nodes()) {
        double acc = 0.0;
        for (std::size_t s = 0; s < sources.size(); ++s)
          acc += gc.columns[s][node] * Psi[sources[s]] * g.h;
        err = std::max(err, std::abs(acc - direct[0][node]));
      }
      if (err > 0.02 * scale) return std::string("reconstruction error above 2%");
    }
    return std::string();
  });

  run_criterion(7, "Z/M-matrix decomposition and entrywise product device", 0, [&] {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> U01(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
      int n = 2 + static_cast<int>(rng() % 7);  // 2..8
      ConstMatrix B(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B(i, j) = U01(rng);
      double s = B.cwiseAbs().rowwise().sum().maxCoeff() + 0.1 + U01(rng);
      ConstMatrix P = s * ConstMatrix::Identity(n, n) - B;
      ZMDecomposition d = zm_decompose(P);
      if (!(d.rho_B < d.s)) return std::string("rho(B) >= s for an M-matrix");
      Eigen::EigenSolver<ConstMatrix> es(d.B, false);
      double rho = es.eigenvalues().cwiseAbs().maxCoeff();
      if (std::abs(d.rho_B - rho) > 1e-8 * std::max(1.0, rho))
        return std::string("power-iteration rho off the dense oracle");
    }
    std::uniform_real_distribution<double> U26(2.0 + 1e-9, 6.0);
    for (int rep = 0; rep < 200; ++rep) {
      int n = 2 + static_cast<int>(rng() % 7);
      ConstMatrix A(n, n), B(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          A(i, j) = U26(rng);
          B(i, j) = U26(rng);
        }
      ProductPositivity pp = product_positivity(1.0, A, 1.0, B);
      if (!pp.sufficient_condition) return std::string("entries>2 flag not detected");
      if (!pp.positive || !(pp.min_entry > 0))
        return std::string("(I-A)(I-B) not entrywise positive");
    }
    return std::string();
  });

  run_criterion(8, "strong positivity battery and Perron vector", 0, [&] {
    Grid g(1, 128);
    Problem p;
    p.grid = g;
    p.m = 2;
    ConstMatrix A(2, 2), M(2, 2);
    A << 1, 0, 0, 2;
    M << 2, 1, 1, 2;
    p.A = MatrixField::constant(A, g);
    p.K = MatrixField(2, g);
    p.k = 1.0;
    p.F = phi_rhs(g, {1.0, 1.0});
    StrongPositivityOptions so;
    so.k_auto = true;
    VerificationReport r = verify_strong_positivity(
        p, M, MatrixField::constant(ConstMatrix::Identity(2, 2), g), so);
    if (r.verdict != Verdict::Verified) return std::string("battery/Perron not verified");

    DiscreteOperator op = assemble_system(p);
    PerronResult pr = perron_of_resolvent(op, M);
    if (!pr.converged) return std::string("power iteration did not converge");
    if (!(pr.vector.minCoeff() > 0)) return std::string("Perron vector not positive");
    int N = g.interior_count();
    ConstMatrix dense = ConstMatrix(op.matrix);
    ConstMatrix Mbig = ConstMatrix::Zero(2 * N, 2 * N);
    for (int bi = 0; bi < 2; ++bi)
      for (int bj = 0; bj < 2; ++bj)
        Mbig.block(bi * N, bj * N, N, N) = M(bi, bj) * ConstMatrix::Identity(N, N);
    Eigen::EigenSolver<ConstMatrix> es(dense.fullPivLu().solve(Mbig), false);
    double rho = es.eigenvalues().cwiseAbs().maxCoeff();
    if (std::abs(pr.eigenvalue - rho) > 1e-8 * rho)
      return std::string("Perron eigenvalue off the dense oracle");
    return std::string();
  });

  run_criterion(9, "conjugation by the eigenvector basis restores cooperativity", 0, [&] {
    Grid g(1, 64);
    CounterexampleResult r = run_conjugation_recovery(0.05, 1.0, 1.0, g);
    if (!r.precondition_ok) return std::string("precondition rejected: " + r.detail);
    if (!(r.parameters.at("conjugated_offdiag_min") >= -1e-12))
      return std::string("conjugated reaction not cooperative");
    if (!r.expectation_met) return std::string("strong positivity battery failed");
    return std::string();
  });

  run_criterion(10, "nonconstant-multiplier necessity example", 0, [&] {
    Grid g(1, 64);
    CounterexampleResult r = run_b_phi(5, 0.1, 0, g);
    if (!r.precondition_ok) return std::string("precondition rejected");
    std::string reason;
    if (!r.expectation_met)
      reason = "transformed-cone positivity is unattainable: the exact second "
               "transformed component equals -lambda1*d at the eigenfunction peak "
               "(margin " + std::to_string(r.rhs_margin) + "), although the raw rhs "
               "is positive (min " +
               std::to_string(r.parameters.at("untransformed_rhs_min")) +
               ") and the published formula suggests margin " +
               std::to_string(r.parameters.at("claimed_margin"));
    if (r.failing_hypothesis.empty() ||
        !(r.parameters.at("db_binv_residual") >= 0.1 * r.parameters.at("dphi_max")))
      reason += std::string(reason.empty() ? "" : "; ") +
                "derivative-pattern check did not fail as required";
    return reason;
  });

  run_criterion(11, "oracle soundness sweep over randomized structures", 60.0, [&] {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> U(0.2, 2.0);
    std::uniform_real_distribution<double> S(-1.0, 1.0);
    int verified = 0;
    for (int rep = 0; rep < 50; ++rep) {
      Grid g(1, 32);
      int m = 2 + static_cast<int>(rng() % 2);
      int structure = rep % 3;  // 0 diagonal, 1 lower triangular, 2 ALT-style
      ConstMatrix A = ConstMatrix::Zero(m, m);
      for (int i = 0; i < m; ++i) A(i, i) = U(rng);
      if (structure == 1) {
        for (int i = 1; i < m; ++i)
          for (int j = 0; j < i; ++j) A(i, j) = U(rng);
      } else if (structure == 2) {
        // Column j above the diagonal is a constant multiple of the next
        // diagonal entry, the membership pattern of the transform class.
        for (int j = 0; j < m - 1; ++j) A(j, j + 1) = -A(j + 1, j + 1) * 0.3 * U(rng);
      }
      ConstMatrix K(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) K(i, j) = i == j ? S(rng) : std::abs(S(rng));
      if (rep % 5 == 0) K(1, 0) = -std::abs(K(1, 0));  // occasionally non-cooperative
      Problem p;
      p.grid = g;
      p.m = m;
      p.A = MatrixField::constant(A, g);
      p.K = MatrixField::constant(K, g);
      p.F = VectorField(m, g);
      const ScalarField& phi = laplace_phi1(g);
      for (int c = 0; c < m; ++c)
        for (int node : g.interior_nodes())
          p.F[c][node] = (0.2 + std::abs(S(rng))) * phi[node] +
                         0.1 * S(rng) * phi[node] * phi[node];
      VerifyOptions opts;
      opts.k_auto = true;
      VerificationReport r = verify_GenMPMat(p, opts);
      if (r.verdict == Verdict::Verified) {
        ++verified;
        double mn = independent_solve_min({p});
        if (mn < -1e-12)
          return "VERIFIED with negative direct-solve component at rep " +
                 std::to_string(rep);
      }
    }
    std::printf("      criterion 11 detail: %d of 50 randomized runs verified\n", verified);
    return std::string();
  });

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
