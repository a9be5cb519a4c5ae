#pragma once

// Explicit a-priori constants lambda_1..lambda_4, the second-order and
// uniqueness thresholds, and the Hessian quadratic form of the reduced cost.

#include <filesystem>
#include <optional>
#include <string>

#include "sgfopt/adjoint.hpp"
#include "sgfopt/function_spaces.hpp"

namespace sgfopt {

/// Two groupings of the lambda_3 expression, E3 = e^{C3 T C1 l1 (1 + a) / a^2}:
///   as_printed  K~ (a nu)^{-1} E3 (1 + (2/a) C3 T C1 l1 (1 + 1/a) E3) e^{C3 T (1 + C1 l1 (1 + 1/a))}
///   from_proof  K~ [(1 + (2/a) C3 T C1 l1 (1 + 1/a) E3) e^{C3 T (1 + C1 l1 (1 + 1/a))} + (a nu)^{-1} E3]
enum class Lambda3Reading { as_printed, from_proof };

std::string_view to_string(Lambda3Reading r);
Lambda3Reading lambda3_reading_from_string(std::string_view s);

/// How ||u||_{L1(0,T;H1)} was obtained.
enum class ControlBound { actual_control, admissible_radius };

std::string_view to_string(ControlBound b);

struct CertificateInputs {
  double alpha = 1.0;
  double nu = 1.0;
  double T = 1.0;
  double norm_y0_H3 = 0.0;
  double norm_u_L1H1 = 0.0;
  double norm_yd_L2Q = 0.0;
  double lambda = 0.0;
  DomainConstants constants;
  ControlBound control_bound = ControlBound::admissible_radius;
  Lambda3Reading reading = Lambda3Reading::as_printed;

  /// Throws PreconditionViolation on nonpositive parameters or negative norms.
  void validate() const;
  bool operator==(const CertificateInputs&) const = default;
};

/// Inputs from a problem. With `u` the control norm is measured; without it
/// the bound sqrt(T) L from the admissible set is used.
CertificateInputs certificate_inputs(const ProblemData& pd, const DomainConstants& constants,
                                     const Trajectory* u = nullptr);

double alpha_hat(double alpha);
double compute_lambda1(const CertificateInputs& ci);
double compute_lambda2(const CertificateInputs& ci, double lambda1);
double compute_lambda3(const CertificateInputs& ci, double lambda1, Lambda3Reading reading);
double compute_lambda3(const CertificateInputs& ci, double lambda1);
double compute_lambda4(const CertificateInputs& ci, double lambda1);

/// 2 K^ lambda3^2 lambda4.
double coercivity_threshold(double K_hat, double lambda3, double lambda4);
/// 2 K^ lambda2^2 lambda4.
double uniqueness_threshold(double K_hat, double lambda2, double lambda4);

struct CertificateReport {
  CertificateInputs inputs;
  double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0, lambda4 = 0.0;
  /// lambda_3 under the other reading, reported whenever it differs.
  double lambda3_other = 0.0;
  double coercivity_threshold = 0.0;  // 2 K^ lambda3^2 lambda4
  double uniqueness_threshold = 0.0;  // 2 K^ lambda2^2 lambda4
  bool verdict_second_order = false;
  bool verdict_uniqueness = false;
  /// Some constant is a unit default; verdicts are then not meaningful.
  bool illustrative = true;

  bool readings_differ() const;
  bool operator==(const CertificateReport&) const = default;
};

CertificateReport certify(const CertificateInputs& ci);

std::string certificate_to_text(const CertificateReport& r);
CertificateReport certificate_from_text(const std::string& text);
std::string certificate_csv(const CertificateReport& r);
void write_certificate(const std::filesystem::path& path, const CertificateReport& r);
CertificateReport read_certificate(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Second derivative of the reduced cost

/// J''(u)[w, w] = ||z||^2 + lambda ||w||^2 - 2 (p, curl v(z) x z), with the
/// nonlinear pairing taken in the form the discrete scheme actually uses, so
/// the value is the exact second derivative of the discrete reduced cost.
double hessian_quadratic_form(const StateSolution& base, const AdjointState& adj, const Trajectory& w,
                              const ProblemData& pd, double lambda);
double hessian_quadratic_form(const StateSolution& base, const Trajectory& w, const ProblemData& pd, double lambda);

/// J''(u)[w1, w2] through z~ = S''(u)[w1, w2].
double hessian_mixed_form(const StateSolution& base, const Trajectory& w1, const Trajectory& w2,
                          const ProblemData& pd, double lambda);

// ---------------------------------------------------------------------------
// Empirical checks of the a-priori bounds

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
  /// Constants include unit defaults: the outcome is informational only.
  bool advisory = true;
};

/// ||y||^2_{Linf(H3)} <= C1^2 lambda1^2 / alpha^2.
BoundCheck check_state_bound(const StateSolution& sol, const CertificateReport& r);
/// ||y2 - y1||^2_{Linf(H2)} <= lambda2^2 ||u2 - u1||^2_{L2(Q)}.
BoundCheck check_stability_bound(const StateSolution& s1, const StateSolution& s2, const Trajectory& u1,
                                 const Trajectory& u2, const CertificateReport& r);
/// ||z||^2_{Linf(H2)} <= lambda3^2 ||w||^2_{L2(Q)}.
BoundCheck check_linearized_bound(const TangentState& z, const Trajectory& w, const CertificateReport& r);
/// ||p||^2_{Linf(H2)} <= lambda4^2.
BoundCheck check_adjoint_bound(const AdjointState& adj, const CertificateReport& r);

}  // namespace sgfopt
