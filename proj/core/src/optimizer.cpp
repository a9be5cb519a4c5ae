#include "sgfopt/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "sgfopt/random_fields.hpp"

namespace sgfopt {

double cost(const Trajectory& u, const Trajectory& y, const Trajectory& y_d, double lambda) {
  if (!u.aligned_with(y) || !y.aligned_with(y_d)) throw PreconditionViolation("cost: trajectories are not aligned");
  const Trajectory diff = y - y_d;
  double J = 0.5 * inner_l2q(diff, diff);
  if (lambda != 0.0) J += 0.5 * lambda * inner_l2q(u, u);
  return J;
}

double reduced_cost(const Trajectory& u, const ProblemData& pd) {
  const StateSolution s = solve_state(u, pd, {.record_norms = false});
  return cost(u, s.y, pd.y_d(), pd.lambda());
}

CostGradient cost_and_gradient(const Trajectory& u, const ProblemData& pd) {
  StateSolution s = solve_state(u, pd, {.record_norms = false});
  const double J = cost(u, s.y, pd.y_d(), pd.lambda());
  const AdjointState adj = solve_adjoint(s, pd);
  return {J, gradient_field(u, adj, pd.lambda()), std::move(s)};
}

Trajectory project_Uad(const Trajectory& u, double L) {
  if (!(L > 0.0)) throw PreconditionViolation("project_Uad: L must be positive");
  const double r = norm_l2h1(u);
  if (r <= L) return u;
  return (L / r) * u;
}

double vi_residual(const Trajectory& u, const Trajectory& g, double L) {
  return norm_l2q(u - project_Uad(u - g, L));
}

std::string OptimizeReport::to_csv() const {
  std::ostringstream out;
  char buf[160];
  out << "iteration,J,grad_norm,step,vi_residual\n";
  std::snprintf(buf, sizeof buf, "0,%.17g,,,%.17g\n", J_initial, vi_initial);
  out << buf;
  for (const auto& it : iterates) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", it.iteration, it.J, it.grad_norm, it.step,
                  it.vi_residual);
    out << buf;
  }
  return out.str();
}

void OptimizeReport::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << to_csv();
}

OptimizeReport optimize(const ProblemData& pd, const Trajectory& u_init, const OptimizeOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const double L = pd.L();
  Trajectory u = project_Uad(u_init, L);
  CostGradient cur = cost_and_gradient(u, pd);
  double vi = vi_residual(u, cur.gradient, L);

  OptimizeReport rep{.iterates = {},
                     .J_initial = cur.J,
                     .vi_initial = vi,
                     .tol = opts.tol.value_or(1e-8 * (1.0 + std::abs(cur.J))),
                     .u_final = u,
                     .J_final = cur.J,
                     .vi_final = vi,
                     .state_Linf_H1 = 0.0,
                     .state_Linf_H3 = 0.0,
                     .converged = false,
                     .stop_reason = {},
                     .wall_seconds = 0.0};

  // The lambda term alone has curvature lambda; the tracking part is O(1).
  const double curvature = 1.0 + pd.lambda();
  double step = 1.0 / curvature;
  std::optional<Trajectory> prev_u, prev_g;
  int k = 0;
  for (;; ++k) {
    if (vi <= rep.tol) {
      rep.converged = true;
      rep.stop_reason = "vi residual below tolerance";
      break;
    }
    if (k >= opts.max_iter) {
      rep.stop_reason = "iteration cap";
      break;
    }
    if (prev_u) {
      const Trajectory du = u - *prev_u;
      const Trajectory dg = cur.gradient - *prev_g;
      const double sy = inner_l2q(du, dg);
      if (sy > 0.0) step = std::clamp(inner_l2q(du, du) / sy, 1e-12 / curvature, 1e12);
    }

    bool accepted = false;
    for (int halving = 0; halving <= opts.max_halvings; ++halving, step *= 0.5) {
      Trajectory trial = project_Uad(u - step * cur.gradient, L);
      try {
        CostGradient next = cost_and_gradient(trial, pd);
        const double decrease = inner_l2q(cur.gradient, trial - u);
        if (next.J < cur.J && next.J <= cur.J + opts.armijo_c * decrease) {
          prev_u = std::move(u);
          prev_g = std::move(cur.gradient);
          u = std::move(trial);
          cur = std::move(next);
          accepted = true;
          break;
        }
      } catch (const BlowUpError&) {
        // treated as a rejected trial
      }
    }
    if (!accepted) {
      rep.stop_reason = "line search failed";
      break;
    }
    vi = vi_residual(u, cur.gradient, L);
    rep.iterates.push_back({k + 1, cur.J, norm_l2q(cur.gradient), step, vi});
  }

  rep.u_final = u;
  rep.J_final = cur.J;
  rep.vi_final = vi;
  rep.state_Linf_H1 = norm_linf_hk(cur.state.y, 1);
  rep.state_Linf_H3 = norm_linf_hk(cur.state.y, 3);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

// Solves (C V) chi = b by conjugate gradients; C V is symmetric positive
// semidefinite and b lies in its range.
Array2D solve_curl_velocity(const Array2D& b, const Grid& g) {
  auto apply = [&](const Array2D& x) { return curl2d(velocity_from_stream(ScalarField2D(g, x))).values(); };
  Array2D x = Array2D::Zero(b.rows(), b.cols());
  Array2D r = b;
  Array2D p = r;
  double rr = r.squaredNorm();
  const double stop = 1e-28 * std::max(rr, 1e-300);
  const int cap = 10 * g.n() * g.n();
  for (int it = 0; it < cap && rr > stop; ++it) {
    const Array2D ap = apply(p);
    const double pap = (p.array() * ap.array()).sum();
    if (!(pap > 0.0)) break;
    const double a = rr / pap;
    x += a * p;
    r -= a * ap;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  return x;
}

}  // namespace

Trajectory solenoidal_part(const Trajectory& u) {
  const Grid& g = u.grid();
  std::vector<VectorField2D> out;
  out.reserve(u.size());
  for (const auto& s : u) {
    const Array2D b = curl2d(s).values();
    out.push_back(velocity_from_stream(ScalarField2D(g, solve_curl_velocity(b, g))));
  }
  return Trajectory(std::move(out), u.dt(), u.kind());
}

Trajectory random_admissible_control(const ProblemData& pd, std::uint64_t seed) {
  auto rng = make_rng(seed, 0x5ee0);
  Trajectory u = random_control(pd.grid(), pd.m_steps(), pd.dt(), rng, true);
  const double r = norm_l2h1(u);
  if (r > 0.0) u *= 0.5 * pd.L() / r;
  return u;
}

std::string MultiStartReport::to_text() const {
  std::ostringstream out;
  char buf[200];
  out << "starts = " << runs.size() << '\n';
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "run_%zu = seed %llu, J %.17g, vi %.17g, iterations %zu, converged %s\n", i,
                  static_cast<unsigned long long>(seeds[i]), runs[i].J_final, runs[i].vi_final,
                  runs[i].iterates.size(), runs[i].converged ? "true" : "false");
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "max_distance = %.17g\n", max_distance);
  out << buf;
  out << "unique_within_tol = " << (unique_within_tol ? "true" : "false") << '\n';
  std::snprintf(buf, sizeof buf, "uniqueness_threshold = %.17g\n", certificate.uniqueness_threshold);
  out << buf;
  out << "lambda_exceeds_threshold = " << (lambda_exceeds_threshold ? "true" : "false") << '\n';
  out << "threshold_illustrative = " << (certificate.illustrative ? "true" : "false") << '\n';
  return out.str();
}

MultiStartReport multi_start_uniqueness(const ProblemData& pd, std::span<const std::uint64_t> seeds,
                                        const MultiStartOptions& opts) {
  if (seeds.size() < 2) throw PreconditionViolation("multi_start_uniqueness needs at least two starts");
  MultiStartReport rep;
  rep.seeds.assign(seeds.begin(), seeds.end());

  // The default tolerance is relative to J at the start, which is meaningless
  // for comparing runs; use a fraction of the distance tolerance instead.
  OptimizeOptions run_opts = opts.optimize;
  if (!run_opts.tol) run_opts.tol = 0.1 * opts.tol_factor * pd.L();

  std::vector<std::future<OptimizeReport>> jobs;
  for (const auto s : seeds)
    jobs.push_back(std::async(std::launch::async, [&pd, &run_opts, s] {
      return optimize(pd, random_admissible_control(pd, s), run_opts);
    }));
  for (auto& j : jobs) rep.runs.push_back(j.get());

  const auto n = static_cast<Eigen::Index>(rep.runs.size());
  rep.distances = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = norm_l2q(solenoidal_part(rep.runs[i].u_final - rep.runs[j].u_final));
      rep.distances(i, j) = rep.distances(j, i) = d;
      rep.max_distance = std::max(rep.max_distance, d);
    }
  rep.unique_within_tol = rep.max_distance <= opts.tol_factor * pd.L();

  CertificateInputs ci = certificate_inputs(pd, opts.constants);
  ci.reading = opts.reading;
  rep.certificate = certify(ci);
  rep.lambda_exceeds_threshold = pd.lambda() > rep.certificate.uniqueness_threshold;
  return rep;
}

MultiStartReport multi_start_uniqueness(const ProblemData& pd, int n_starts, std::uint64_t seed,
                                        const MultiStartOptions& opts) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < n_starts; ++i) seeds.push_back(seed + static_cast<std::uint64_t>(i));
  return multi_start_uniqueness(pd, seeds, opts);
}

}  // namespace sgfopt
