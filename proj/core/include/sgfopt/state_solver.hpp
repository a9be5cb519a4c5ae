#pragma once

// Forward solver for the vorticity form of the second-grade fluid
//
//   d/dt q + y . grad q = nu Lap omega + curl u,   q = (I - alpha Lap) omega,
//
// with omega = -Lap psi and y = (d2 psi, -d1 psi). Diffusion is implicit,
// advection explicit:
//
//   (I - (alpha + nu dt) Lap_h) omega_{n+1} = q_n + dt (curl u_n - y_n . grad q_n).

#include <string>
#include <vector>

#include "sgfopt/grid_ops.hpp"
#include "sgfopt/trajectory.hpp"

namespace sgfopt {

struct ModelParams {
  double alpha = 0.1;
  double nu = 0.1;
  double T = 1.0;
  int grid_n = 32;
  int m_steps = 50;
  double L = 1.0;
  double lambda = 0.0;
};

/// Validated problem description. Construction throws InvalidProblem naming
/// the offending field; a CFL number above 0.5 is only reported in warnings().
class ProblemData {
 public:
  ProblemData(ModelParams params, VectorField2D y0, Trajectory y_d);
  /// Target constant in time.
  ProblemData(ModelParams params, VectorField2D y0, const VectorField2D& y_d);

  const ModelParams& params() const noexcept { return p_; }
  double alpha() const noexcept { return p_.alpha; }
  double nu() const noexcept { return p_.nu; }
  double T() const noexcept { return p_.T; }
  double L() const noexcept { return p_.L; }
  double lambda() const noexcept { return p_.lambda; }
  int m_steps() const noexcept { return p_.m_steps; }
  double dt() const noexcept { return p_.T / p_.m_steps; }
  const Grid& grid() const noexcept { return grid_; }
  const VectorField2D& y0() const noexcept { return y0_; }
  const Trajectory& y_d() const noexcept { return y_d_; }

  /// max|y0| dt / h.
  double cfl_number() const;
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  ProblemData with_lambda(double lambda) const;
  ProblemData with_target(Trajectory y_d) const;

  /// Zero trajectory with the problem's time grid.
  Trajectory zero_trajectory(TrajectoryKind kind = TrajectoryKind::control) const;

 private:
  void validate();

  ModelParams p_;
  Grid grid_;
  VectorField2D y0_;
  Trajectory y_d_;
  std::vector<std::string> warnings_;
};

struct StepResult {
  ScalarField2D q, omega, psi;
  VectorField2D y;
};

/// One semi-implicit step from (q_n, y_n) with control slice u_n. `step` is
/// the index reported by BlowUpError.
StepResult step_state(const ScalarField2D& q_n, const VectorField2D& y_n, const VectorField2D& u_slice,
                      const ProblemData& pd, int step = 0);

struct StateSolution {
  Trajectory y;
  ScalarTrajectory omega;
  ScalarTrajectory q;
  ScalarTrajectory psi;
  /// Per time level; empty when norms were not recorded.
  std::vector<double> norm_H1;
  std::vector<double> norm_H3;
};

struct StateOptions {
  bool record_norms = true;
};

/// Marches step_state from y0 over all m_steps. u must have m_steps + 1 slices.
StateSolution solve_state(const Trajectory& u, const ProblemData& pd, const StateOptions& opts = {});

/// Residual of the defining step equation n -> n+1 of a computed solution.
ScalarField2D state_step_residual(const StateSolution& sol, const Trajectory& u, const ProblemData& pd, int n);

/// (psi, q)_h = ||grad_h psi||^2 + alpha ||Lap_h psi||^2.
double discrete_energy(const ScalarField2D& psi, const ScalarField2D& q);

// ---------------------------------------------------------------------------
// Nonlinear forms (centered differences, zero ghosts)

/// b(phi, z, y) = (phi . grad z, y).
double trilinear_b(const VectorField2D& phi, const VectorField2D& z, const VectorField2D& y);

/// y - alpha Lap_h y, componentwise.
VectorField2D upsilon(const VectorField2D& y, double alpha);

/// (curl v(y) x z, phi) with curl v(y) x z = c (-z2, z1), c = curl2d(v(y)).
double cross_term(const VectorField2D& y, const VectorField2D& z, const VectorField2D& phi, double alpha);

/// (curl v(z) x z, phi).
double nonlinear_term(const VectorField2D& z, const VectorField2D& phi, double alpha);

}  // namespace sgfopt
