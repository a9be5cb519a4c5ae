#pragma once

// Exact derivatives of the discrete state map u -> y.
//
// Differentiating one step gives, with H = I - alpha Lap_h,
// B = I - (alpha + nu dt) Lap_h and A(psi, q) = -J(psi, q):
//
//   B d_omega_{n+1} = H d_omega_n - dt (A(psi_n, H d_omega_n) + A(d_psi_n, q_n)) + f_n
//
// where f_n = dt curl w_n for S'(u)[w] and
// f_n = -dt (A(d_psi1_n, d_q2_n) + A(d_psi2_n, d_q1_n)) for S''(u)[w1, w2].

#include <vector>

#include "sgfopt/state_solver.hpp"

namespace sgfopt {

struct TangentState {
  Trajectory z;            // velocity tangent, z[0] = 0
  ScalarTrajectory omega;  // vorticity tangent
  ScalarTrajectory q;      // potential vorticity tangent
  ScalarTrajectory psi;    // stream function tangent
};

/// Throws PreconditionViolation when `base` was not produced under `pd`'s discretization.
void require_compatible(const StateSolution& base, const ProblemData& pd);

/// Propagates the linearized step with forcing f_n (n = 0..m-1) from zero.
TangentState propagate_tangent(const StateSolution& base, const std::vector<Array2D>& forcing, const ProblemData& pd);

/// z = S'(u)[w].
TangentState solve_linearized(const StateSolution& base, const Trajectory& w, const ProblemData& pd);

/// z~ = S''(u)[w1, w2] given z1 = S'(u)[w1], z2 = S'(u)[w2].
TangentState solve_second(const StateSolution& base, const TangentState& z1, const TangentState& z2,
                          const ProblemData& pd);

}  // namespace sgfopt
