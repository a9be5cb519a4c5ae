#include "sgfopt/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sgfopt/field_io.hpp"
#include "sgfopt/optimizer.hpp"
#include "sgfopt/random_fields.hpp"

namespace sgfopt {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string indexed(const char* stem, int n, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%05d.%s", stem, n, ext);
  return buf;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw FormatError("cannot open " + p.string() + " for writing");
  out << text;
}

/// Everything derived from the configuration before any file is written.
struct Prepared {
  Subcommand sub;
  ProblemData pd;
  DomainConstants constants;
  Trajectory u;
};

Prepared prepare(const RunConfig& cfg) {
  if (!cfg.subcommand) throw ConfigError("no subcommand given");
  ProblemData pd = build_problem(cfg);
  DomainConstants constants = load_constants(cfg);
  const VectorField2D u_slice = velocity_from_modes(pd.grid(), cfg.u_modes);
  Trajectory u = Trajectory::constant(u_slice, pd.m_steps(), pd.dt(), TrajectoryKind::control);
  return {*cfg.subcommand, std::move(pd), constants, std::move(u)};
}

bool snapshot_due(int n, int m, int every) { return n == 0 || n == m || (every > 0 && n % every == 0); }

void write_snapshots(const fs::path& dir, const char* stem, const Trajectory& t, int every) {
  for (int n = 0; n <= t.steps(); ++n) {
    if (!snapshot_due(n, t.steps(), every)) continue;
    write_field(dir / indexed(stem, n, "bin"), t[n]);
    write_csv(dir / indexed(stem, n, "csv"), t[n]);
  }
}

std::string problem_summary(const ProblemData& pd) {
  std::ostringstream out;
  out << "alpha = " << fmt(pd.alpha()) << '\n'
      << "nu = " << fmt(pd.nu()) << '\n'
      << "T = " << fmt(pd.T()) << '\n'
      << "grid = " << pd.grid().n() << '\n'
      << "steps = " << pd.m_steps() << '\n'
      << "L = " << fmt(pd.L()) << '\n'
      << "lambda = " << fmt(pd.lambda()) << '\n'
      << "cfl = " << fmt(pd.cfl_number()) << '\n';
  for (const auto& w : pd.warnings()) out << "# warning: " << w << '\n';
  return out.str();
}

int run_simulate(const RunConfig& cfg, const Prepared& p, std::ostream& out) {
  const StateSolution sol = solve_state(p.u, p.pd);
  write_snapshots(cfg.out / "fields", "y", sol.y, cfg.snapshot_every);

  std::ostringstream log;
  log << "step,t,norm_H1,norm_H3,norm_V,energy\n";
  for (int n = 0; n <= p.pd.m_steps(); ++n)
    log << n << ',' << fmt(n * p.pd.dt()) << ',' << fmt(sol.norm_H1[n]) << ',' << fmt(sol.norm_H3[n]) << ','
        << fmt(norm_V(sol.y[n], p.pd.alpha())) << ',' << fmt(discrete_energy(sol.psi[n], sol.q[n])) << '\n';
  write_text(cfg.out / "log.csv", log.str());

  std::ostringstream rep;
  rep << "subcommand = simulate\n" << problem_summary(p.pd);
  rep << "final_norm_H1 = " << fmt(sol.norm_H1.back()) << '\n';
  rep << "final_norm_H3 = " << fmt(sol.norm_H3.back()) << '\n';
  rep << "cost = " << fmt(cost(p.u, sol.y, p.pd.y_d(), p.pd.lambda())) << '\n';
  write_text(cfg.out / "report.txt", rep.str());
  out << "simulate: " << p.pd.m_steps() << " steps, final |y|_H1 = " << sol.norm_H1.back() << '\n';
  return kExitOk;
}

int run_optimize(const RunConfig& cfg, const Prepared& p, std::ostream& out) {
  OptimizeOptions opts;
  opts.tol = cfg.tol;
  opts.max_iter = cfg.max_iter;
  const OptimizeReport r = optimize(p.pd, p.u, opts);
  r.write_csv(cfg.out / "log.csv");
  const StateSolution sol = solve_state(r.u_final, p.pd, {.record_norms = false});
  write_snapshots(cfg.out / "fields", "u", r.u_final, cfg.snapshot_every);
  write_snapshots(cfg.out / "fields", "y", sol.y, cfg.snapshot_every);

  std::ostringstream rep;
  rep << "subcommand = optimize\n" << problem_summary(p.pd);
  rep << "J_initial = " << fmt(r.J_initial) << '\n'
      << "J_final = " << fmt(r.J_final) << '\n'
      << "vi_residual = " << fmt(r.vi_final) << '\n'
      << "tol = " << fmt(r.tol) << '\n'
      << "iterations = " << r.iterates.size() << '\n'
      << "converged = " << (r.converged ? "true" : "false") << '\n'
      << "stop_reason = " << r.stop_reason << '\n'
      << "norm_u_L2H1 = " << fmt(norm_l2h1(r.u_final)) << '\n'
      << "state_Linf_H3 = " << fmt(r.state_Linf_H3) << '\n';
  write_text(cfg.out / "report.txt", rep.str());
  out << "optimize: J " << r.J_initial << " -> " << r.J_final << " in " << r.iterates.size() << " iterations ("
      << r.stop_reason << ")\n";
  return r.converged ? kExitOk : kExitSolverFailure;
}

int run_gradcheck(const RunConfig& cfg, const Prepared& p, std::ostream& out) {
  const Trajectory w = random_admissible_control(p.pd, cfg.seed);
  const CostGradient cg = cost_and_gradient(p.u, p.pd);
  const double adj = inner_l2q(cg.gradient, w);
  std::ostringstream log;
  log << "epsilon,fd,adjoint,rel_error\n";
  double worst = 0.0;
  for (const double eps : {1e-2, 1e-3, 1e-4}) {
    const double jp = reduced_cost(p.u + eps * w, p.pd);
    const double jm = reduced_cost(p.u - eps * w, p.pd);
    const double fd = (jp - jm) / (2.0 * eps);
    const double rel = std::abs(fd - adj) / std::max(std::abs(adj), 1e-300);
    worst = std::max(worst, rel);
    log << fmt(eps) << ',' << fmt(fd) << ',' << fmt(adj) << ',' << fmt(rel) << '\n';
  }
  write_text(cfg.out / "log.csv", log.str());
  std::ostringstream rep;
  rep << "subcommand = gradcheck\n" << problem_summary(p.pd);
  rep << "J = " << fmt(cg.J) << '\n' << "directional_derivative = " << fmt(adj) << '\n';
  rep << "max_rel_error = " << fmt(worst) << '\n';
  write_text(cfg.out / "report.txt", rep.str());
  out << "gradcheck: adjoint " << adj << ", worst relative error " << worst << '\n';
  return kExitOk;
}

int run_certify(const RunConfig& cfg, const Prepared& p, std::ostream& out) {
  const bool have_u = !cfg.u_modes.empty();
  CertificateInputs ci = certificate_inputs(p.pd, p.constants, have_u ? &p.u : nullptr);
  ci.reading = cfg.lambda3_reading;
  const CertificateReport r = certify(ci);
  write_certificate(cfg.out / "certificate.txt", r);

  const StateSolution s1 = solve_state(p.u, p.pd, {.record_norms = false});
  const Trajectory w = random_admissible_control(p.pd, cfg.seed);
  const StateSolution s2 = solve_state(p.u + w, p.pd, {.record_norms = false});
  const TangentState z = solve_linearized(s1, w, p.pd);
  const AdjointState adj = solve_adjoint(s1, p.pd);
  const BoundCheck checks[] = {check_state_bound(s1, r), check_stability_bound(s1, s2, p.u, p.u + w, r),
                               check_linearized_bound(z, w, r), check_adjoint_bound(adj, r)};

  std::ostringstream rep;
  rep << "subcommand = certify\n" << problem_summary(p.pd);
  if (r.illustrative) rep << "# ILLUSTRATIVE: unit default constants in use; bound checks are advisory\n";
  for (const auto& c : checks)
    rep << c.name << " = " << fmt(c.lhs) << " <= " << fmt(c.rhs) << " : " << (c.holds ? "holds" : "fails")
        << (c.advisory ? " (advisory)" : "") << '\n';
  write_text(cfg.out / "report.txt", rep.str());

  std::ostringstream csv;
  csv << certificate_csv(r);
  write_text(cfg.out / "log.csv", csv.str());
  out << "certify: coercivity threshold " << r.coercivity_threshold << ", uniqueness threshold "
      << r.uniqueness_threshold << (r.illustrative ? " (illustrative)" : "") << '\n';
  return kExitOk;
}

int run_estimate(const RunConfig& cfg, const Prepared& p, std::ostream& out) {
  DomainConstants c = p.constants;
  const Grid& g = p.pd.grid();
  c.K = {estimate_constant(InequalityKind::korn, cfg.samples, cfg.seed, g, p.pd.alpha()), ConstantSource::estimated};
  c.K_tilde = {estimate_constant(InequalityKind::elliptic, cfg.samples, cfg.seed, g, p.pd.alpha()),
               ConstantSource::estimated};
  c.K_hat = {estimate_constant(InequalityKind::trilinear, cfg.samples, cfg.seed, g, p.pd.alpha()),
             ConstantSource::estimated};
  std::ostringstream rep;
  rep << "# discrete lower-bound estimates: grid " << g.n() << ", alpha " << fmt(p.pd.alpha()) << ", samples "
      << cfg.samples << ", seed " << cfg.seed << '\n';
  rep << constants_to_text(c);
  write_text(cfg.out / "report.txt", rep.str());
  out << "estimate-constants: K = " << c.K.value << ", K_tilde = " << c.K_tilde.value << ", K_hat = " << c.K_hat.value
      << '\n';
  return kExitOk;
}

int run_multistart(const RunConfig& cfg, const Prepared& p, std::ostream& out) {
  MultiStartOptions opts;
  opts.optimize.tol = cfg.tol;
  opts.optimize.max_iter = cfg.max_iter;
  opts.constants = p.constants;
  opts.reading = cfg.lambda3_reading;
  const MultiStartReport r = multi_start_uniqueness(p.pd, cfg.starts, cfg.seed, opts);
  write_text(cfg.out / "report.txt", "subcommand = multistart\n" + problem_summary(p.pd) + r.to_text());
  write_certificate(cfg.out / "certificate.txt", r.certificate);
  std::ostringstream log;
  log << "run,seed,J_final,vi_residual,iterations,converged\n";
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    log << i << ',' << r.seeds[i] << ',' << fmt(r.runs[i].J_final) << ',' << fmt(r.runs[i].vi_final) << ','
        << r.runs[i].iterates.size() << ',' << (r.runs[i].converged ? "true" : "false") << '\n';
    write_snapshots(cfg.out / "fields", ("u_run" + std::to_string(i)).c_str(), r.runs[i].u_final, 0);
  }
  write_text(cfg.out / "log.csv", log.str());
  out << "multistart: " << r.runs.size() << " starts, max distance " << r.max_distance
      << (r.unique_within_tol ? " (unique)" : " (distinct)") << '\n';
  return kExitOk;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<Prepared> prepared;
  try {
    prepared.emplace(prepare(cfg));
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  for (const auto& w : prepared->pd.warnings()) err << "warning: " << w << '\n';

  try {
    fs::create_directories(cfg.out / "fields");
    switch (prepared->sub) {
      case Subcommand::simulate: return run_simulate(cfg, *prepared, out);
      case Subcommand::optimize: return run_optimize(cfg, *prepared, out);
      case Subcommand::gradcheck: return run_gradcheck(cfg, *prepared, out);
      case Subcommand::certify: return run_certify(cfg, *prepared, out);
      case Subcommand::estimate_constants: return run_estimate(cfg, *prepared, out);
      case Subcommand::multistart: return run_multistart(cfg, *prepared, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolverFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolverFailure;
  }
  return kExitSolverFailure;
}

}  // namespace sgfopt
