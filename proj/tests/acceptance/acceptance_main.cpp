// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "sgfopt/certificates.hpp"
#include "sgfopt/config.hpp"
#include "sgfopt/optimizer.hpp"
#include "test_support.hpp"

namespace {

using namespace sgfopt;
using sgfopt::testing::make_problem;
using sgfopt::testing::random_direction;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1 -------------------------------------------------------------------------
Outcome duality_criterion() {
  const ProblemData pd = make_problem({.n = 32, .steps = 50, .y0_amplitude = 0.2});
  const StateSolution s = solve_state(sgfopt::testing::random_control_of_norm(pd, 1, 3.0), pd);
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const DualityResult d = duality(s, random_direction(pd, 1000 + k), random_direction(pd, 2000 + k), pd);
    worst = std::max(worst, d.relative);
  }
  return {worst <= 1e-10, fmt("max relative gap %.3e over 10 pairs", worst)};
}

// 2 -------------------------------------------------------------------------
Outcome gradient_criterion() {
  const ProblemData pd = make_problem({.lambda = 1e-3, .y0_amplitude = 0.2, .yd_amplitude = 0.2});
  double worst = 0.0;
  for (std::uint64_t c = 0; c < 3; ++c) {
    const Trajectory u = random_admissible_control(pd, 10 + c);
    const CostGradient cg = cost_and_gradient(u, pd);
    for (std::uint64_t k = 0; k < 5; ++k) {
      const Trajectory w = random_direction(pd, 3000 + 10 * c + k);
      const double eps = 1e-4;
      const double fd = (reduced_cost(u + eps * w, pd) - reduced_cost(u - eps * w, pd)) / (2 * eps);
      const double adj = inner_l2q(cg.gradient, w);
      worst = std::max(worst, std::abs(fd - adj) / std::abs(adj));
    }
  }
  return {worst <= 1e-6, fmt("max relative error %.3e over 15 checks", worst)};
}

// 3, 4 ----------------------------------------------------------------------
struct TaylorSetup {
  ProblemData pd = make_problem({.lambda = 1e-2, .y0_amplitude = 0.2, .yd_amplitude = 0.3});
  Trajectory u = sgfopt::testing::random_control_of_norm(pd, 5, 2.0);
  StateSolution s = solve_state(u, pd);
};

Outcome first_order_criterion(const TaylorSetup& ts) {
  const double eps[] = {1e-2, 5e-3, 2.5e-3};
  double lo = 1e300, hi = 0.0;
  for (std::uint64_t k = 0; k < 3; ++k) {
    const Trajectory w = random_direction(ts.pd, 4000 + k);
    const Trajectory z = solve_linearized(ts.s, w, ts.pd).z;
    std::vector<double> r;
    for (double e : eps) r.push_back(norm_l2q(solve_state(ts.u + e * w, ts.pd).y - ts.s.y - e * z));
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      lo = std::min(lo, r[i] / r[i + 1]);
      hi = std::max(hi, r[i] / r[i + 1]);
    }
  }
  return {lo >= 3.6 && hi <= 4.4, fmt("remainder ratios in [%.4f, %.4f]", lo, hi)};
}

Outcome second_order_criterion(const TaylorSetup& ts) {
  const double eps[] = {1e-1, 5e-2, 2.5e-2};
  double lo = 1e300, hi = 0.0;
  for (std::uint64_t k = 0; k < 3; ++k) {
    const Trajectory w = random_direction(ts.pd, 5000 + k);
    const TangentState z = solve_linearized(ts.s, w, ts.pd);
    const Trajectory zz = solve_second(ts.s, z, z, ts.pd).z;
    std::vector<double> r;
    for (double e : eps)
      r.push_back(norm_l2q(solve_state(ts.u + e * w, ts.pd).y - ts.s.y - e * z.z - (0.5 * e * e) * zz));
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      lo = std::min(lo, r[i] / r[i + 1]);
      hi = std::max(hi, r[i] / r[i + 1]);
    }
  }
  double worst_pol = 0.0;
  const double lam = ts.pd.lambda();
  for (std::uint64_t k = 0; k < 3; ++k) {
    const Trajectory w1 = random_direction(ts.pd, 6000 + k), w2 = random_direction(ts.pd, 7000 + k);
    const double mixed = hessian_mixed_form(ts.s, w1, w2, ts.pd, lam);
    const double qp = hessian_quadratic_form(ts.s, w1 + w2, ts.pd, lam);
    const double qm = hessian_quadratic_form(ts.s, w1 - w2, ts.pd, lam);
    worst_pol = std::max(worst_pol, std::abs(mixed - 0.25 * (qp - qm)) / (std::abs(qp) + std::abs(qm)));
  }
  const bool pass = lo >= 7.0 && hi <= 9.0 && worst_pol <= 1e-8;
  return {pass, fmt("remainder ratios in [%.4f, %.4f], polarization mismatch %.3e", lo, hi, worst_pol)};
}

// 5 -------------------------------------------------------------------------
// psi0 = sin(pi x1) sin(pi x2) is an eigenmode, so the Arakawa term vanishes
// and |omega| should decay like exp(-mu nu T / (1 + alpha mu)). At 64^2 and
// 200 steps the CFL number is about 1, above the 0.5 stability advisory, and
// roundoff in the other modes is amplified by the explicit advection step.
Outcome decay_criterion() {
  using std::numbers::pi;
  struct Run {
    double ratio = 0.0, cfl = 0.0, law = 0.0;
    std::string failure;
  };
  auto run = [](int steps) {
    Run r;
    const Grid g(64);
    const ModelParams p{.alpha = 0.1, .nu = 0.1, .T = 1.0, .grid_n = 64, .m_steps = steps, .L = 1.0, .lambda = 0.0};
    const auto psi0 = ScalarField2D::sample(g, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    const ProblemData pd(p, velocity_from_stream(psi0), VectorField2D(g));
    const double mu = discrete_laplacian_eigenvalue(g, 1, 1);
    r.law = std::exp(-mu * p.nu * p.T / (1 + p.alpha * mu));
    r.cfl = pd.cfl_number();
    try {
      const StateSolution s = solve_state(pd.zero_trajectory(), pd, {.record_norms = false});
      r.ratio = norm_l2(s.omega[steps]) / norm_l2(s.omega[0]);
    } catch (const BlowUpError& e) {
      r.failure = e.what();
    }
    return r;
  };
  const Run a = run(200), b = run(400);
  if (!a.failure.empty() || !b.failure.empty()) {
    std::string d = "200 steps (CFL " + fmt("%.2f", a.cfl) + "): ";
    d += a.failure.empty() ? fmt("relative error %.3e", std::abs(a.ratio - a.law) / a.law) : a.failure;
    d += "; 400 steps (CFL " + fmt("%.2f", b.cfl) + "): ";
    d += b.failure.empty() ? fmt("relative error %.3e", std::abs(b.ratio - b.law) / b.law) : b.failure;
    return {false, d};
  }
  const double e200 = std::abs(a.ratio - a.law) / a.law, e400 = std::abs(b.ratio - b.law) / b.law;
  const double halving = e200 / e400;
  return {e200 <= 0.01 && halving >= 1.8 && halving <= 2.2,
          fmt("relative error %.3e at 200 steps, %.3e at 400 steps (ratio %.3f)", e200, e400, halving)};
}

// 6 -------------------------------------------------------------------------
Outcome spot_value_criterion() {
  using std::numbers::e;
  DomainConstants c;
  c.for_each([](const char*, DomainConstant& d) { d = {1.0, ConstantSource::user_supplied}; });
  CertificateInputs ci{.alpha = 1.0, .nu = 1.0, .T = 1.0, .norm_y0_H3 = 0.0, .norm_u_L1H1 = 0.0,
                       .norm_yd_L2Q = 1.0, .lambda = 0.0, .constants = c};
  CertificateInputs c1 = ci;
  c1.alpha = 0.5;
  c1.norm_y0_H3 = 1.0;
  const double d1 = std::abs(compute_lambda1(c1) - std::sqrt(5.0));
  const double d2 = std::abs(std::pow(compute_lambda2(ci, 0.0), 2) - (e + 1));
  const double d3 = std::abs(std::pow(compute_lambda3(ci, 0.0, Lambda3Reading::as_printed), 2) - e);
  const double d4 = std::abs(std::pow(compute_lambda4(ci, 0.0), 2) - 2 * (e + 1));
  const double worst = std::max({d1, d2, d3, d4});
  return {worst <= 1e-12, fmt("max deviation %.3e", worst)};
}

// 7, 8, 9 -------------------------------------------------------------------
struct CertSetup {
  ProblemData pd = make_problem({.n = 32, .steps = 50, .alpha = 1.0, .nu = 1.0, .L = 0.05,
                                 .y0_amplitude = 0.002, .yd_amplitude = 0.002});
  static constexpr int kSamples = 100;
  static constexpr std::uint64_t kSeed = 2024;
  DomainConstants constants = [this] {
    DomainConstants c;
    c.for_each([](const char*, DomainConstant& d) { d = {1.0, ConstantSource::user_supplied}; });
    const Grid& g = pd.grid();
    c.K = {estimate_constant(InequalityKind::korn, kSamples, kSeed, g, pd.alpha()), ConstantSource::estimated};
    c.K_tilde = {estimate_constant(InequalityKind::elliptic, kSamples, kSeed, g, pd.alpha()), ConstantSource::estimated};
    c.K_hat = {estimate_constant(InequalityKind::trilinear, kSamples, kSeed, g, pd.alpha()), ConstantSource::estimated};
    return c;
  }();
};

Outcome coercivity_criterion(const CertSetup& cs) {
  const CertificateReport r0 = certify(certificate_inputs(cs.pd, cs.constants));
  const double thr = r0.coercivity_threshold;
  if (!std::isfinite(thr)) return {false, fmt("coercivity threshold is not finite (%g)", thr)};
  const double lambda = 2.0 * thr;
  const ProblemData pd = cs.pd.with_lambda(lambda);
  const StateSolution s = solve_state(random_admissible_control(pd, 77), pd);
  const AdjointState adj = solve_adjoint(s, pd);
  int violations = 0;
  double min_margin = 1e300;  // (Q - lambda ||w||^2) / ||w||^2, must exceed -thr
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Trajectory w = random_admissible_control(pd, 8000 + k);
    const double nw2 = std::pow(norm_l2q(w), 2);
    const double q = hessian_quadratic_form(s, adj, w, pd, lambda);
    if (!(q > (lambda - thr) * nw2)) ++violations;
    const double q0 = hessian_quadratic_form(s, adj, w, pd, 0.0);
    min_margin = std::min(min_margin, q0 / nw2);
  }
  return {violations == 0,
          fmt("threshold %.3e (K %.4g, K_tilde %.4g, K_hat %.4g estimated), %d violations, "
              "min (Q - lambda|w|^2)/|w|^2 = %.3e",
              thr, cs.constants.K.value, cs.constants.K_tilde.value, cs.constants.K_hat.value, violations,
              min_margin)};
}

Outcome uniqueness_criterion(const CertSetup& cs) {
  const CertificateReport r0 = certify(certificate_inputs(cs.pd, cs.constants));
  const double thr = r0.uniqueness_threshold;
  if (!std::isfinite(thr)) return {false, fmt("uniqueness threshold is not finite (%g)", thr)};
  MultiStartOptions opts{.optimize = {}, .constants = cs.constants};
  const ProblemData pd = cs.pd.with_lambda(2.0 * thr);
  const MultiStartReport r = multi_start_uniqueness(pd, 4, 31, opts);
  bool all_converged = true;
  for (const auto& run : r.runs) all_converged = all_converged && run.converged;

  // contrast at lambda = 0: recorded only
  MultiStartOptions contrast_opts = opts;
  contrast_opts.optimize.max_iter = 200;
  const MultiStartReport c = multi_start_uniqueness(cs.pd.with_lambda(0.0), 4, 31, contrast_opts);
  const bool pass = all_converged && r.max_distance <= 1e-5 * pd.L() && r.lambda_exceeds_threshold;
  return {pass, fmt("threshold %.3e, max distance %.3e (limit %.3e), all converged %s; "
                    "contrast lambda = 0: max distance %.3e",
                    thr, r.max_distance, 1e-5 * pd.L(), all_converged ? "yes" : "no", c.max_distance)};
}

Outcome inequality_criterion(const CertSetup& cs) {
  int failures = 0;
  for (auto kind : {InequalityKind::korn, InequalityKind::elliptic, InequalityKind::trilinear})
    for (int s = 0; s < CertSetup::kSamples; ++s) {
      const auto f = inequality_sample(kind, CertSetup::kSeed, s, cs.pd.grid());
      if (!check_inequality(kind, f, cs.pd.alpha(), cs.constants).holds) ++failures;
    }

  // (curl v(y) x z, phi) = b(phi, z, v(y)) - b(z, phi, v(y)) on smooth random fields,
  // left side through the curl machinery, right side through the trilinear form.
  // Fields vanish at the wall, the most favourable case for zero ghosts.
  double worst = 0.0;
  auto rng = make_rng(99, 0);
  for (int k = 0; k < 10; ++k) {
    const Grid& g = cs.pd.grid();
    const VectorField2D y = sgfopt::testing::random_wall_vanishing_field(g, rng);
    const VectorField2D z = sgfopt::testing::random_wall_vanishing_field(g, rng);
    const VectorField2D phi = sgfopt::testing::random_wall_vanishing_field(g, rng);
    const double a = 0.1;
    const double lhs = cross_term(y, z, phi, a);
    const VectorField2D v = upsilon(y, a);
    const double rhs = trilinear_b(phi, z, v) - trilinear_b(z, phi, v);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
  }
  const bool pass = failures == 0 && worst <= 1e-10;
  return {pass, fmt("%d inequality failures on 3 x %d samples; identity relative mismatch %.3e (limit 1e-10)",
                    failures, CertSetup::kSamples, worst)};
}

// 10 ------------------------------------------------------------------------
Outcome optimizer_criterion() {
  // small alpha and nu: the state responds strongly to the control, so the
  // lambda term of J(u_hat) stays far below J(0)
  const ProblemData base = make_problem({.n = 32, .steps = 50, .alpha = 0.01, .nu = 0.01, .L = 10.0, .lambda = 1e-4});
  const VectorField2D slice = velocity_from_modes(base.grid(), {{1, 1, 0.1}, {2, 1, 0.05}});
  const Trajectory u_hat = Trajectory::constant(slice, base.m_steps(), base.dt(), TrajectoryKind::control);
  const ProblemData pd = base.with_target(solve_state(u_hat, base).y);
  const double J0 = reduced_cost(pd.zero_trajectory(), pd);
  const OptimizeReport r = optimize(pd, pd.zero_trajectory(), {.tol = 1e-8 * (1 + J0), .max_iter = 5000});
  const bool pass = r.J_final <= 1e-3 * J0 && r.vi_final <= 1e-8 * (1 + J0);
  return {pass, fmt("J(0) %.3e -> %.3e (factor %.3e), vi %.3e (limit %.3e), %zu iterations, %s", J0, r.J_final,
                    J0 / r.J_final, r.vi_final, 1e-8 * (1 + J0), r.iterates.size(), r.stop_reason.c_str())};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s: %s (%s; %.1f s)\n", id, name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), sec);
    std::fflush(stdout);
  };

  report(1, "duality", duality_criterion);
  report(2, "gradient", gradient_criterion);
  const TaylorSetup ts;
  report(3, "first-order Taylor", [&] { return first_order_criterion(ts); });
  report(4, "second-order Taylor", [&] { return second_order_criterion(ts); });
  report(5, "single-mode decay", decay_criterion);
  report(6, "lambda spot values", spot_value_criterion);
  const CertSetup cs;
  report(7, "coercivity", [&] { return coercivity_criterion(cs); });
  report(8, "uniqueness", [&] { return uniqueness_criterion(cs); });
  report(9, "inequalities", [&] { return inequality_criterion(cs); });
  report(10, "optimizer", optimizer_criterion);
  return failed == 0 ? 0 : 1;
}
