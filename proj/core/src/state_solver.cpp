#include "sgfopt/state_solver.hpp"

#include <cmath>
#include <sstream>

#include "sgfopt/function_spaces.hpp"

namespace sgfopt {

namespace {

void require_positive(double v, const char* field) {
  if (!(std::isfinite(v) && v > 0.0)) throw InvalidProblem(field, "must be finite and positive");
}

}  // namespace

ProblemData::ProblemData(ModelParams params, VectorField2D y0, Trajectory y_d)
    : p_(params), grid_(params.grid_n >= 3 ? params.grid_n : 3), y0_(std::move(y0)), y_d_(std::move(y_d)) {
  validate();
}

ProblemData::ProblemData(ModelParams params, VectorField2D y0, const VectorField2D& y_d)
    : ProblemData(params, std::move(y0),
                  Trajectory::constant(y_d, params.m_steps > 0 ? params.m_steps : 1,
                                       params.m_steps > 0 && params.T > 0.0 ? params.T / params.m_steps : 1.0,
                                       TrajectoryKind::velocity)) {}

void ProblemData::validate() {
  require_positive(p_.alpha, "alpha");
  require_positive(p_.nu, "nu");
  require_positive(p_.T, "T");
  require_positive(p_.L, "L");
  if (p_.grid_n < 3) throw InvalidProblem("grid", "needs at least 3 interior nodes per axis");
  if (p_.m_steps < 1) throw InvalidProblem("steps", "must be at least 1");
  if (!(std::isfinite(p_.lambda) && p_.lambda >= 0.0)) throw InvalidProblem("lambda", "must be finite and >= 0");
  if (!(y0_.grid() == grid_)) throw InvalidProblem("y0", "grid does not match the problem grid");
  if (!y0_.divergence_free()) throw InvalidProblem("y0", "must be built from a stream function");
  if (!y0_.all_finite()) throw InvalidProblem("y0", "non-finite entries");
  if (!(y_d_.grid() == grid_)) throw InvalidProblem("yd", "grid does not match the problem grid");
  if (y_d_.steps() != p_.m_steps) throw InvalidProblem("yd", "needs steps + 1 slices");
  if (std::abs(y_d_.dt() - dt()) > 1e-14 * dt()) throw InvalidProblem("yd", "time step differs from T / steps");
  for (const auto& s : y_d_)
    if (!s.all_finite()) throw InvalidProblem("yd", "non-finite entries");
  if (const double c = cfl_number(); c > 0.5) {
    std::ostringstream msg;
    msg << "CFL number " << c << " exceeds 0.5 (max|y0| dt / h)";
    warnings_.push_back(msg.str());
  }
}

double ProblemData::cfl_number() const {
  const double vmax = std::max(y0_.u1().cwiseAbs().maxCoeff(), y0_.u2().cwiseAbs().maxCoeff());
  return vmax * dt() / grid_.h();
}

ProblemData ProblemData::with_lambda(double lambda) const {
  ModelParams p = p_;
  p.lambda = lambda;
  return ProblemData(p, y0_, y_d_);
}

ProblemData ProblemData::with_target(Trajectory y_d) const { return ProblemData(p_, y0_, std::move(y_d)); }

Trajectory ProblemData::zero_trajectory(TrajectoryKind kind) const {
  return Trajectory::zeros(grid_, p_.m_steps, dt(), kind);
}

// ---------------------------------------------------------------------------

StepResult step_state(const ScalarField2D& q_n, const VectorField2D& y_n, const VectorField2D& u_slice,
                      const ProblemData& pd, int step) {
  require_same_grid(q_n.grid(), pd.grid(), "step_state");
  require_same_grid(y_n.grid(), pd.grid(), "step_state");
  require_same_grid(u_slice.grid(), pd.grid(), "step_state");
  const double dt = pd.dt();
  const double h = pd.grid().h();

  ScalarField2D rhs = q_n + dt * (curl2d(u_slice) - advect(y_n, q_n));
  if (!rhs.all_finite()) throw BlowUpError(step + 1, "non-finite right-hand side");
  Array2D omega = helmholtz_solve(rhs.values(), pd.alpha() + pd.nu() * dt, h);
  Array2D q = omega - pd.alpha() * laplacian(omega, h);
  Array2D psi = poisson_solve(omega, h);
  if (!q.allFinite() || !psi.allFinite()) throw BlowUpError(step + 1, "non-finite state");
  ScalarField2D psi_f(pd.grid(), std::move(psi));
  VectorField2D y = velocity_from_stream(psi_f);
  return {ScalarField2D(pd.grid(), std::move(q)), ScalarField2D(pd.grid(), std::move(omega)), std::move(psi_f),
          std::move(y)};
}

StateSolution solve_state(const Trajectory& u, const ProblemData& pd, const StateOptions& opts) {
  if (u.steps() != pd.m_steps()) throw PreconditionViolation("solve_state: control needs steps + 1 slices");
  require_same_grid(u.grid(), pd.grid(), "solve_state");
  const Grid& g = pd.grid();
  const double h = g.h();
  const double dt = pd.dt();

  ScalarField2D psi0(g, pd.y0().stream());
  ScalarField2D omega0(g, -laplacian(psi0.values(), h));
  ScalarField2D q0(g, omega0.values() - pd.alpha() * laplacian(omega0.values(), h));

  std::vector<VectorField2D> ys{pd.y0()};
  std::vector<ScalarField2D> omegas{omega0}, qs{q0}, psis{psi0};
  const auto size = static_cast<std::size_t>(pd.m_steps() + 1);
  ys.reserve(size), omegas.reserve(size), qs.reserve(size), psis.reserve(size);

  for (int n = 0; n < pd.m_steps(); ++n) {
    StepResult r = step_state(qs.back(), ys.back(), u[n], pd, n);
    ys.push_back(std::move(r.y));
    omegas.push_back(std::move(r.omega));
    qs.push_back(std::move(r.q));
    psis.push_back(std::move(r.psi));
  }

  StateSolution sol{Trajectory(std::move(ys), dt, TrajectoryKind::velocity),
                    ScalarTrajectory(std::move(omegas), dt, TrajectoryKind::vorticity),
                    ScalarTrajectory(std::move(qs), dt, TrajectoryKind::potential_vorticity),
                    ScalarTrajectory(std::move(psis), dt, TrajectoryKind::stream),
                    {},
                    {}};
  if (opts.record_norms) {
    for (const auto& y : sol.y) {
      sol.norm_H1.push_back(norm_hk(y, 1));
      sol.norm_H3.push_back(norm_hk(y, 3));
    }
  }
  return sol;
}

ScalarField2D state_step_residual(const StateSolution& sol, const Trajectory& u, const ProblemData& pd, int n) {
  if (n < 0 || n >= pd.m_steps()) throw PreconditionViolation("state_step_residual: step out of range");
  const double dt = pd.dt();
  const ScalarField2D& w = sol.omega[n + 1];
  ScalarField2D lhs = w - (pd.alpha() + pd.nu() * dt) * laplacian(w);
  ScalarField2D rhs = sol.q[n] + dt * (curl2d(u[n]) - advect(sol.y[n], sol.q[n]));
  return lhs - rhs;
}

double discrete_energy(const ScalarField2D& psi, const ScalarField2D& q) { return inner_l2(psi, q); }

// ---------------------------------------------------------------------------

double trilinear_b(const VectorField2D& phi, const VectorField2D& z, const VectorField2D& y) {
  require_same_grid(phi.grid(), z.grid(), "trilinear_b");
  require_same_grid(phi.grid(), y.grid(), "trilinear_b");
  const double h = phi.grid().h();
  double s = 0.0;
  for (int i = 0; i < 2; ++i) {
    const Array2D& zi = i == 0 ? z.u1() : z.u2();
    const Array2D& yi = i == 0 ? y.u1() : y.u2();
    const Array2D adv =
        phi.u1().cwiseProduct(centered_diff(zi, 0, h)) + phi.u2().cwiseProduct(centered_diff(zi, 1, h));
    s += adv.cwiseProduct(yi).sum();
  }
  return h * h * s;
}

VectorField2D upsilon(const VectorField2D& y, double alpha) {
  const double h = y.grid().h();
  return VectorField2D(y.grid(), y.u1() - alpha * laplacian(y.u1(), h), y.u2() - alpha * laplacian(y.u2(), h));
}

double cross_term(const VectorField2D& y, const VectorField2D& z, const VectorField2D& phi, double alpha) {
  require_same_grid(y.grid(), z.grid(), "cross_term");
  require_same_grid(y.grid(), phi.grid(), "cross_term");
  const double h = y.grid().h();
  const Array2D c = curl2d(upsilon(y, alpha)).values();
  const Array2D cross = z.u1().cwiseProduct(phi.u2()) - z.u2().cwiseProduct(phi.u1());
  return h * h * c.cwiseProduct(cross).sum();
}

double nonlinear_term(const VectorField2D& z, const VectorField2D& phi, double alpha) {
  return cross_term(z, z, phi, alpha);
}

}  // namespace sgfopt
