#pragma once

// Discrete adjoint: the exact transpose of the tangent propagator.
//
// With K = -Lap_h, C = curl2d and V = velocity_from_stream (V = C^T), a
// source phi enters as e_n = tau_n K^{-1} C phi_n (tau: trapezoid weights)
// and the backward sweep is
//
//   rho_m = B^{-1} e_m,   rho_n = B^{-1} (e_n + L_n^T rho_{n+1}),  n = m-1..1,
//
// L_n^T r = H r + dt H J_2^T(psi_n, r) + dt K^{-1} J_1^T(q_n, r).
// The velocity adjoint is p_n = V rho_{n+1} (n < m), p_m = 0.

#include "sgfopt/sensitivity.hpp"

namespace sgfopt {

struct AdjointState {
  Trajectory p;          // p[m] = 0
  ScalarTrajectory rho;  // rho[n] is the adjoint vorticity paired with step n -> n+1; rho[m] = 0
};

/// Adjoint driven by an arbitrary velocity-space source trajectory.
AdjointState solve_adjoint_source(const StateSolution& base, const Trajectory& source, const ProblemData& pd);

/// Adjoint of the tracking cost: source y - y_d.
AdjointState solve_adjoint(const StateSolution& base, const Trajectory& y_d, const ProblemData& pd);
AdjointState solve_adjoint(const StateSolution& base, const ProblemData& pd);

struct DualityResult {
  double forward = 0.0;   // <S'(u)[w], phi>_{L2(Q)}
  double backward = 0.0;  // <w, p^phi> summed with the control quadrature
  double gap = 0.0;       // |forward - backward|
  double relative = 0.0;  // gap / max(|forward|, |backward|, tiny)
};

DualityResult duality(const StateSolution& base, const Trajectory& w, const Trajectory& phi, const ProblemData& pd);
/// Absolute gap |<S'(u)[w], phi> - <w, A*(phi)>|.
double duality_gap(const StateSolution& base, const Trajectory& w, const Trajectory& phi, const ProblemData& pd);

/// L2(Q) representative of J'(u): g_n = lambda u_n + (dt / tau_n) p_n.
/// Satisfies inner_l2q(g, w) = J'(u)[w].
Trajectory gradient_field(const Trajectory& u, const AdjointState& adj, double lambda);

}  // namespace sgfopt
