#include <cmath>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "sgfopt/certificates.hpp"
#include "test_support.hpp"

namespace sgfopt {
namespace {

using std::numbers::e;
using testing::make_problem;
using testing::random_direction;

DomainConstants unit_constants(ConstantSource src = ConstantSource::user_supplied) {
  DomainConstants c;
  c.for_each([src](const char*, DomainConstant& d) { d = {1.0, src}; });
  return c;
}

// alpha = nu = T = 1, all constants 1, zero initial and control norms,
// ||y_d|| = 1: every exponential collapses to e^1.
CertificateInputs unit_inputs() {
  CertificateInputs ci;
  ci.alpha = 1.0;
  ci.nu = 1.0;
  ci.T = 1.0;
  ci.norm_yd_L2Q = 1.0;
  ci.constants = unit_constants();
  return ci;
}

TEST(Lambdas, HandComputedValues) {
  const CertificateInputs ci = unit_inputs();
  EXPECT_EQ(compute_lambda1(ci), 0.0);
  EXPECT_NEAR(std::pow(compute_lambda2(ci, 0.0), 2), e + 1, 1e-12);
  EXPECT_NEAR(std::pow(compute_lambda3(ci, 0.0, Lambda3Reading::as_printed), 2), e, 1e-12);
  EXPECT_NEAR(std::pow(compute_lambda3(ci, 0.0, Lambda3Reading::from_proof), 2), e + 1, 1e-12);
  EXPECT_NEAR(std::pow(compute_lambda4(ci, 0.0), 2), 2 * (e + 1), 1e-12);

  CertificateInputs c1 = ci;
  c1.alpha = 0.5;
  c1.norm_y0_H3 = 1.0;
  EXPECT_NEAR(compute_lambda1(c1), std::sqrt(5.0), 1e-12);
  c1.norm_u_L1H1 = 2.0;
  // alpha^ = max(1, 1) = 1, (1 + 4)(1 + 4)
  EXPECT_NEAR(compute_lambda1(c1), 5.0, 1e-12);
}

TEST(Lambdas, AlphaHatIsSymmetricUnderInversion) {
  EXPECT_DOUBLE_EQ(alpha_hat(0.5), 1.0);
  EXPECT_DOUBLE_EQ(alpha_hat(0.1), 5.0);
  EXPECT_DOUBLE_EQ(alpha_hat(2.5), 5.0);
}

TEST(Lambdas, GrowWithDataSize) {
  CertificateInputs a = unit_inputs();
  a.norm_y0_H3 = 0.5;
  CertificateInputs b = a;
  b.norm_y0_H3 = 1.0;
  const auto ra = certify(a), rb = certify(b);
  EXPECT_LT(ra.lambda1, rb.lambda1);
  EXPECT_LT(ra.lambda2, rb.lambda2);
  EXPECT_LT(ra.lambda3, rb.lambda3);
  EXPECT_LT(ra.lambda4, rb.lambda4);
}

TEST(Lambdas, Thresholds) {
  EXPECT_DOUBLE_EQ(coercivity_threshold(1.0, 2.0, 0.5), 4.0);
  EXPECT_DOUBLE_EQ(uniqueness_threshold(3.0, 1.0, 2.0), 12.0);
}

TEST(Certify, VerdictsCompareLambdaWithThresholds) {
  CertificateInputs ci = unit_inputs();
  const CertificateReport r0 = certify(ci);
  EXPECT_NEAR(r0.coercivity_threshold, 2 * e * std::sqrt(2 * (e + 1)), 1e-12);
  EXPECT_FALSE(r0.verdict_second_order);
  ci.lambda = 1.01 * std::max(r0.coercivity_threshold, r0.uniqueness_threshold);
  const CertificateReport r1 = certify(ci);
  EXPECT_TRUE(r1.verdict_second_order);
  EXPECT_TRUE(r1.verdict_uniqueness);
  EXPECT_FALSE(r1.illustrative);
}

TEST(Certify, DefaultConstantsMakeTheReportIllustrative) {
  CertificateInputs ci = unit_inputs();
  ci.constants.C4.source = ConstantSource::default_unit;
  const CertificateReport r = certify(ci);
  EXPECT_TRUE(r.illustrative);
  EXPECT_NE(certificate_to_text(r).find("ILLUSTRATIVE"), std::string::npos);
}

TEST(Certify, ReportsBothLambda3Readings) {
  const CertificateReport r = certify(unit_inputs());
  EXPECT_TRUE(r.readings_differ());
  EXPECT_NEAR(r.lambda3_other * r.lambda3_other, e + 1, 1e-12);
  CertificateInputs ci = unit_inputs();
  ci.reading = Lambda3Reading::from_proof;
  EXPECT_NEAR(certify(ci).lambda3, r.lambda3_other, 1e-15);
}

TEST(Certify, RejectsBadInputs) {
  CertificateInputs ci = unit_inputs();
  ci.nu = 0.0;
  EXPECT_THROW(certify(ci), PreconditionViolation);
  ci = unit_inputs();
  ci.constants.K.value = -1;
  EXPECT_THROW(certify(ci), PreconditionViolation);
}

TEST(Certify, TextRoundTripIsExact) {
  CertificateInputs ci = unit_inputs();
  ci.alpha = 0.1;
  ci.norm_y0_H3 = 0.3141592653589793;
  ci.constants.K_hat = {0.0123, ConstantSource::estimated};
  const CertificateReport r = certify(ci);
  EXPECT_EQ(certificate_from_text(certificate_to_text(r)), r);
  const auto path = std::filesystem::temp_directory_path() / "sgfopt_certificate_roundtrip.txt";
  write_certificate(path, r);
  EXPECT_EQ(read_certificate(path), r);
  std::filesystem::remove(path);
  EXPECT_THROW(certificate_from_text("lambda1 = 2\n"), FormatError);
}

TEST(Certify, InputsFromProblem) {
  const ProblemData pd = make_problem({.n = 12, .steps = 10, .T = 4.0, .L = 3.0});
  const auto ci = certificate_inputs(pd, unit_constants());
  EXPECT_EQ(ci.control_bound, ControlBound::admissible_radius);
  EXPECT_DOUBLE_EQ(ci.norm_u_L1H1, 6.0);
  const Trajectory u = testing::random_control_of_norm(pd, 1, 1.0);
  const auto cu = certificate_inputs(pd, unit_constants(), &u);
  EXPECT_EQ(cu.control_bound, ControlBound::actual_control);
  EXPECT_LE(cu.norm_u_L1H1, 2.0 + 1e-12);  // L1 <= sqrt(T) L2
}

TEST(Hessian, VanishesForZeroDirection) {
  const ProblemData pd = make_problem({.n = 16, .steps = 10});
  const StateSolution s = solve_state(pd.zero_trajectory(), pd);
  EXPECT_EQ(hessian_quadratic_form(s, pd.zero_trajectory(), pd, 0.3), 0.0);
}

TEST(Hessian, IsHomogeneousOfDegreeTwo) {
  const ProblemData pd = make_problem({.n = 16, .steps = 20});
  const StateSolution s = solve_state(testing::random_control_of_norm(pd, 1, 2.0), pd);
  const Trajectory w = random_direction(pd, 2);
  const double q1 = hessian_quadratic_form(s, w, pd, 0.01);
  const double q3 = hessian_quadratic_form(s, 3.0 * w, pd, 0.01);
  EXPECT_NEAR(q3, 9.0 * q1, 1e-10 * std::abs(q3));
}

TEST(Hessian, MatchesSecondDifferenceOfTheCost) {
  const ProblemData pd = make_problem({.lambda = 1e-2, .y0_amplitude = 0.2, .yd_amplitude = 0.3});
  const Trajectory u = testing::random_control_of_norm(pd, 3, 2.0);
  const StateSolution s = solve_state(u, pd);
  for (std::uint64_t k = 0; k < 3; ++k) {
    const Trajectory w = random_direction(pd, 50 + k);
    const double q = hessian_quadratic_form(s, w, pd, pd.lambda());
    const double eps = 1e-3;
    const double fd = (reduced_cost(u + eps * w, pd) - 2 * reduced_cost(u, pd) + reduced_cost(u - eps * w, pd)) /
                      (eps * eps);
    EXPECT_NEAR(fd, q, 1e-4 * std::abs(q)) << "direction " << k;
  }
}

TEST(Hessian, PolarizationOfTheMixedForm) {
  const ProblemData pd = make_problem({.lambda = 1e-2, .y0_amplitude = 0.2, .yd_amplitude = 0.3});
  const StateSolution s = solve_state(testing::random_control_of_norm(pd, 4, 2.0), pd);
  const Trajectory w1 = random_direction(pd, 60), w2 = random_direction(pd, 61);
  const double mixed = hessian_mixed_form(s, w1, w2, pd, pd.lambda());
  const double pol =
      0.25 * (hessian_quadratic_form(s, w1 + w2, pd, pd.lambda()) - hessian_quadratic_form(s, w1 - w2, pd, pd.lambda()));
  EXPECT_NEAR(mixed, pol, 1e-8 * (std::abs(hessian_mixed_form(s, w1, w1, pd, pd.lambda())) + std::abs(mixed)));
  EXPECT_NEAR(hessian_mixed_form(s, w1, w1, pd, pd.lambda()), hessian_quadratic_form(s, w1, pd, pd.lambda()),
              1e-10 * hessian_quadratic_form(s, w1, pd, pd.lambda()));
}

TEST(BoundChecks, AdvisoryFollowsIllustrativeFlag) {
  const ProblemData pd = make_problem({.n = 16, .steps = 10});
  const StateSolution s = solve_state(pd.zero_trajectory(), pd);
  const CertificateReport illustrative = certify(certificate_inputs(pd, DomainConstants{}));
  const CertificateReport supplied = certify(certificate_inputs(pd, unit_constants()));
  EXPECT_TRUE(check_state_bound(s, illustrative).advisory);
  EXPECT_FALSE(check_state_bound(s, supplied).advisory);
  const BoundCheck b = check_adjoint_bound(solve_adjoint(s, pd), supplied);
  EXPECT_EQ(b.holds, b.lhs <= b.rhs);
}

TEST(BoundChecks, LinearizedBoundUsesDirectionNorm) {
  // the exponentials overflow quickly (H3 norms of grid fields are large); keep the data small
  const ProblemData pd = make_problem({.n = 16, .steps = 10, .alpha = 1.0, .nu = 1.0, .L = 0.1, .y0_amplitude = 0.01});
  const StateSolution s = solve_state(pd.zero_trajectory(), pd);
  const Trajectory w = random_direction(pd, 3);
  const CertificateReport r = certify(certificate_inputs(pd, unit_constants()));
  const BoundCheck b = check_linearized_bound(solve_linearized(s, w, pd), w, r);
  EXPECT_NEAR(b.rhs, r.lambda3 * r.lambda3, 1e-12 * b.rhs);
  EXPECT_GT(b.lhs, 0.0);
  EXPECT_TRUE(std::isfinite(b.rhs));
}

TEST(BoundChecks, OverflowIsReportedAsInfinity) {
  const ProblemData pd = make_problem({.n = 16, .steps = 10, .alpha = 0.1, .L = 10.0});
  const CertificateReport r = certify(certificate_inputs(pd, unit_constants()));
  EXPECT_TRUE(std::isinf(r.lambda3));
  EXPECT_FALSE(r.verdict_second_order);
}

}  // namespace
}  // namespace sgfopt
