#include "sgfopt/sensitivity.hpp"

namespace sgfopt {

void require_compatible(const StateSolution& base, const ProblemData& pd) {
  if (base.y.steps() != pd.m_steps() || !(base.y.grid() == pd.grid()) || base.y.dt() != pd.dt())
    throw PreconditionViolation("state solution does not match the problem discretization");
}

TangentState propagate_tangent(const StateSolution& base, const std::vector<Array2D>& forcing,
                               const ProblemData& pd) {
  require_compatible(base, pd);
  const int m = pd.m_steps();
  if (static_cast<int>(forcing.size()) != m) throw PreconditionViolation("tangent forcing needs one slice per step");
  const Grid& g = pd.grid();
  const double h = g.h();
  const double dt = pd.dt();
  const double a = pd.alpha() + pd.nu() * dt;

  std::vector<ScalarField2D> om{ScalarField2D(g)}, qs{ScalarField2D(g)}, ps{ScalarField2D(g)};
  std::vector<VectorField2D> zs{velocity_from_stream(ScalarField2D(g))};
  for (int n = 0; n < m; ++n) {
    const Array2D& dq = qs.back().values();
    const Array2D& dpsi = ps.back().values();
    // -dt (A(psi, dq) + A(dpsi, q)) with A = -J
    Array2D rhs = dq + dt * (arakawa_jacobian(base.psi[n].values(), dq, h) +
                             arakawa_jacobian(dpsi, base.q[n].values(), h)) +
                  forcing[static_cast<std::size_t>(n)];
    if (!rhs.allFinite()) throw BlowUpError(n + 1, "non-finite tangent");
    Array2D w = helmholtz_solve(rhs, a, h);
    Array2D q = w - pd.alpha() * laplacian(w, h);
    ScalarField2D psi(g, poisson_solve(w, h));
    zs.push_back(velocity_from_stream(psi));
    om.emplace_back(g, std::move(w));
    qs.emplace_back(g, std::move(q));
    ps.push_back(std::move(psi));
  }
  return {Trajectory(std::move(zs), dt, TrajectoryKind::tangent),
          ScalarTrajectory(std::move(om), dt, TrajectoryKind::vorticity),
          ScalarTrajectory(std::move(qs), dt, TrajectoryKind::potential_vorticity),
          ScalarTrajectory(std::move(ps), dt, TrajectoryKind::stream)};
}

TangentState solve_linearized(const StateSolution& base, const Trajectory& w, const ProblemData& pd) {
  if (w.steps() != pd.m_steps()) throw PreconditionViolation("solve_linearized: direction needs steps + 1 slices");
  require_same_grid(w.grid(), pd.grid(), "solve_linearized");
  std::vector<Array2D> f;
  f.reserve(static_cast<std::size_t>(pd.m_steps()));
  for (int n = 0; n < pd.m_steps(); ++n) f.push_back(pd.dt() * curl2d(w[n]).values());
  return propagate_tangent(base, f, pd);
}

TangentState solve_second(const StateSolution& base, const TangentState& z1, const TangentState& z2,
                          const ProblemData& pd) {
  require_compatible(base, pd);
  if (z1.z.steps() != pd.m_steps() || z2.z.steps() != pd.m_steps())
    throw PreconditionViolation("solve_second: tangents do not match the base");
  const double h = pd.grid().h();
  std::vector<Array2D> f;
  f.reserve(static_cast<std::size_t>(pd.m_steps()));
  for (int n = 0; n < pd.m_steps(); ++n) {
    const Array2D t1 = arakawa_jacobian(z1.psi[n].values(), z2.q[n].values(), h);
    const Array2D t2 = arakawa_jacobian(z2.psi[n].values(), z1.q[n].values(), h);
    f.push_back(pd.dt() * (t1 + t2));
  }
  return propagate_tangent(base, f, pd);
}

}  // namespace sgfopt
