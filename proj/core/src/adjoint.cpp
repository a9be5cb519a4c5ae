#include "sgfopt/adjoint.hpp"

#include <algorithm>
#include <cmath>

#include "sgfopt/function_spaces.hpp"

namespace sgfopt {

AdjointState solve_adjoint_source(const StateSolution& base, const Trajectory& source, const ProblemData& pd) {
  require_compatible(base, pd);
  if (!source.aligned_with(base.y)) throw PreconditionViolation("adjoint source is not aligned with the state");
  const int m = pd.m_steps();
  const Grid& g = pd.grid();
  const double h = g.h();
  const double dt = pd.dt();
  const double alpha = pd.alpha();
  const double a = alpha + pd.nu() * dt;

  auto apply_H = [&](const Array2D& x) -> Array2D { return x - alpha * laplacian(x, h); };
  auto source_term = [&](int n) -> Array2D {
    return source.weight(n) * poisson_solve(curl2d(source[n]).values(), h);
  };

  std::vector<ScalarField2D> rho(static_cast<std::size_t>(m + 1), ScalarField2D(g));
  Array2D r = helmholtz_solve(source_term(m), a, h);
  rho[static_cast<std::size_t>(m - 1)] = ScalarField2D(g, r);
  for (int n = m - 1; n >= 1; --n) {
    Array2D lt = apply_H(r + dt * arakawa_transpose_second(base.psi[n].values(), r, h)) +
                 dt * poisson_solve(arakawa_transpose_first(base.q[n].values(), r, h), h);
    Array2D rhs = source_term(n) + lt;
    if (!rhs.allFinite()) throw BlowUpError(n, "non-finite adjoint");
    r = helmholtz_solve(rhs, a, h);
    rho[static_cast<std::size_t>(n - 1)] = ScalarField2D(g, r);
  }

  std::vector<VectorField2D> p;
  p.reserve(rho.size());
  for (const auto& x : rho) p.push_back(velocity_from_stream(x));
  return {Trajectory(std::move(p), dt, TrajectoryKind::adjoint),
          ScalarTrajectory(std::move(rho), dt, TrajectoryKind::adjoint)};
}

AdjointState solve_adjoint(const StateSolution& base, const Trajectory& y_d, const ProblemData& pd) {
  return solve_adjoint_source(base, base.y - y_d, pd);
}

AdjointState solve_adjoint(const StateSolution& base, const ProblemData& pd) {
  return solve_adjoint(base, pd.y_d(), pd);
}

DualityResult duality(const StateSolution& base, const Trajectory& w, const Trajectory& phi, const ProblemData& pd) {
  const TangentState z = solve_linearized(base, w, pd);
  const AdjointState adj = solve_adjoint_source(base, phi, pd);
  DualityResult r;
  r.forward = inner_l2q(z.z, phi);
  for (int n = 0; n < pd.m_steps(); ++n) r.backward += pd.dt() * inner_l2(w[n], adj.p[n]);
  r.gap = std::abs(r.forward - r.backward);
  const double scale = std::max({std::abs(r.forward), std::abs(r.backward), 1e-300});
  r.relative = r.gap / scale;
  return r;
}

double duality_gap(const StateSolution& base, const Trajectory& w, const Trajectory& phi, const ProblemData& pd) {
  return duality(base, w, phi, pd).gap;
}

Trajectory gradient_field(const Trajectory& u, const AdjointState& adj, double lambda) {
  if (!u.aligned_with(adj.p)) throw PreconditionViolation("gradient_field: control and adjoint are not aligned");
  std::vector<VectorField2D> g;
  g.reserve(u.size());
  for (int n = 0; n <= u.steps(); ++n) {
    VectorField2D s = (u.dt() / u.weight(n)) * adj.p[n];
    if (lambda != 0.0) s += lambda * u[n];
    g.push_back(std::move(s));
  }
  return Trajectory(std::move(g), u.dt(), TrajectoryKind::control);
}

}  // namespace sgfopt
