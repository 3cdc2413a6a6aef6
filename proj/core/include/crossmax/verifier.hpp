#pragma once

#include "crossmax/linear_core.hpp"
#include "crossmax/matrix_structure.hpp"

namespace crossmax {

enum class TheoremId {
  Lopez,
  MaxMat,
  MatMaxPrinciple,
  GenMPMat,
  GenMPMatT,
  GenMPMatTKR,
  GenMPMatTKRnew,
};

std::string theorem_name(TheoremId id);

enum class Verdict { Verified, HypothesesUnmet, InternalError };

struct HypothesisResult {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  std::string detail;
};

struct VerificationReport {
  TheoremId theorem = TheoremId::GenMPMat;
  Verdict verdict = Verdict::InternalError;
  std::vector<HypothesisResult> hypotheses;
  double k_used = 0.0;
  double kappa_used = 0.0;
  bool k_auto = false;
  // Direct-solve conclusion (always attempted, even when hypotheses fail).
  bool solve_ok = false;
  bool solution_positive = false;
  double min_component = 0.0;
  int min_component_index = -1;
  int min_node = -1;
  bool counterexample_confirmed = false;  // hypotheses unmet AND solution negative
  double lambda1 = 0.0;
  std::string error_message;
  VectorField W;

  bool all_hypotheses_pass() const {
    for (const auto& h : hypotheses)
      if (!h.pass) return false;
    return true;
  }
};

/// Strict positivity in the discrete sense: every component > tol_pos at
/// interior nodes at graph distance >= 2 from the boundary and >= -tol_pos
/// at all interior nodes.
struct PositivityCheck {
  bool positive = false;
  double min_deep = 0.0;      // min over distance-2 interior
  double min_interior = 0.0;  // min over all interior
  int worst_component = -1;
  int worst_node = -1;
};
PositivityCheck strictly_positive(const VectorField& W, double tol_pos);

/// Remark-style inequality (lambda_i + k) psi_i > sum_j K_ij psi_j checked
/// nodewise with the principal eigenpairs of the scalar operators.
struct LopezResult {
  bool pass = false;
  double margin = 0.0;
  std::vector<double> lambdas;
};
LopezResult lopez_condition_check(const std::vector<DiscreteOperator>& scalar_ops,
                                  const ConstMatrix& K, double k);

/// Evaluates (LB * F)(x) at interior nodes; pass iff all components > 0.
struct ConeResult {
  bool pass = false;
  double margin = 0.0;
};
ConeResult cone_check(const VectorField& F, const MatrixField& LB);

struct VerifyOptions {
  bool k_auto = false;        // geometric doubling from 1, cap 2^20
  double tol_pos = 1e-12;     // scaled internally by solution magnitude
  double tol_const = 1e-8;
  int sample_density = 8;     // Green source lattice density (2D)
};

VerificationReport verify_GenMPMat(const Problem& p, const VerifyOptions& opts = {});
VerificationReport verify_GenMPMatT(const Problem& p, const MatrixField& T,
                                    const VerifyOptions& opts = {});

/// Strong positivity of Lhat^{-1} M where Lhat W = -div(A DW) + B DW
/// + kappa (LB)^{-1} T W + kW - KW (kappa <= 0 requests the auto search).
struct StrongPositivityOptions {
  double kappa = 0.0;  // <= 0: auto
  bool k_auto = false;
  double tol_pos = 1e-12;
};
VerificationReport verify_strong_positivity(const Problem& p, const ConstMatrix& M,
                                            const MatrixField& T,
                                            const StrongPositivityOptions& opts = {});

/// Dominant eigenpair of Lhat^{-1} M by power iteration; used by the strong
/// positivity check and exposed for the dense-oracle comparison in tests.
struct PerronResult {
  double eigenvalue = 0.0;
  Eigen::VectorXd vector;  // sup-norm 1
  bool converged = false;
};
PerronResult perron_of_resolvent(const DiscreteOperator& op, const ConstMatrix& M);

enum class SpecialCase { CaseI, CaseII, CaseIII };

struct PposPcoopResult {
  bool ok = false;
  std::string failure;
  ConstMatrix P_pos, P_coop, M, T_used;
  double kappa = 0.0;
  double margin_62 = 0.0;  // min entry of kappa*X - Y
};

/// Constructs a positive P_pos, cooperative P_coop and kappa so that the
/// entrywise inequality kappa*T^-1*P_pos^-1*T > T^-1*P_pos^-1*(P_coop*T +
/// k*LB) holds, then M := (LB)^-1 [P_pos + kappa*I - P_coop] T - k*I.
/// T may be empty (0x0) to request the built-in construction for nu_star.
PposPcoopResult build_PposPcoop(const ConstMatrix& LB, const ConstMatrix& T, double k,
                                SpecialCase which, int nu_star);

}  // namespace crossmax
