#pragma once

#include <map>

#include "crossmax/verifier.hpp"

namespace crossmax {

/// Result of one constructed-violation runner. expectation_met means the
/// construction is a genuine witness: the right-hand side is strictly
/// positive (margin > tol_pos) while the solution has a component below
/// -tol_pos.
struct CounterexampleResult {
  std::string name;
  std::map<std::string, double> parameters;
  double rhs_margin = 0.0;
  int witness_component = -1;
  int witness_node = -1;
  double witness_value = 0.0;
  bool expectation_met = false;
  bool precondition_ok = true;
  std::string failing_hypothesis;  // independently confirmed verifier clause
  std::string detail;
  std::vector<std::string> notes;
};

/// Symmetric full diffusion matrix kappa^2*[[a,b],[b,d]] (d > b > a > 0),
/// W = (-phi1, phi1); the scaled rhs f = g + kW - KW is strictly positive for
/// kappa large while W has a negative component. kappa <= 0 requests the
/// doubling search. upper_variant zeroes the (2,1) diffusion entry.
CounterexampleResult run_kmp(double a, double b, double d, double kappa, double k,
                             const ConstMatrix& K, const Grid& grid,
                             double tol_pos = 1e-12, bool upper_variant = false);

/// 3x3 structured matrix (a = b = c = 1) with multipliers (beta1, beta2,
/// gamma2, gamma3); checks the closed-form inequalities (i')(ii')(iii') plus
/// the row-multiplier structure conditions, then exhibits W = (-psi, psi,
/// psi) with strictly positive rhs for R large. R <= 0 requests the doubling
/// search.
CounterexampleResult run_3x3(double beta2, double gamma2, double gamma3, double beta1,
                             double R, const Grid& grid, double tol_pos = 1e-12,
                             double k = 1.0);

/// Nonconstant row multiplier gamma = psi: evaluates both right-hand sides of
/// the reduced two-equation system including the D(gamma)*a*Dpsi term; the
/// gradient-sign clause of the Green condition fails. The reduced second
/// right-hand side is negative at psi's peak for every R, k (the rescuing
/// gradient term vanishes there), so expectation_met stays false; the result
/// reports the best margin found. R <= 0 requests the doubling search.
/// delta_variable switches the second diffusion coefficient to the
/// nonconstant 1 + x/2 variant.
CounterexampleResult run_function_gamma(double R, double k, const Grid& grid,
                                        double tol_pos = 1e-12,
                                        bool delta_variable = false);

/// b = phi1 (nonconstant), c = k*a*d/(k*b + d); picks k strictly between the
/// two positive roots of b^2 k^2 + (2b-a)dk + d^2 at max b (k <= 0 requests
/// the midpoint). The derivative-pattern check on B = [[1, -b/d],[0,1]]
/// fails (the necessity payload). The exact transformed rhs LB*F has a
/// negative second component at phi's peak (-lambda1*d), so rhs_margin < 0
/// and expectation_met is false; the positive margin the source formula
/// suggests is reported separately as "claimed_margin".
CounterexampleResult run_b_phi(double a, double d, double k, const Grid& grid,
                               double tol_pos = 1e-12);

/// Diagonal A = diag(a,d) with noncooperative reaction G = [[a*l1, 0],
/// [-d*l1, 1]]: conjugating by the eigenvector matrix (valid when a*l1 < 1)
/// yields a cooperative reaction and the conjugated system passes the strong
/// positivity battery.
CounterexampleResult run_conjugation_recovery(double a, double d, double k,
                                              const Grid& grid,
                                              double tol_pos = 1e-12);

}  // namespace crossmax
