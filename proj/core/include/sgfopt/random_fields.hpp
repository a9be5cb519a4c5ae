#pragma once

// Random divergence-free sample fields built from sine-mode stream functions.

#include <cstdint>
#include <random>

#include "sgfopt/grid_ops.hpp"
#include "sgfopt/trajectory.hpp"

namespace sgfopt {

/// Independent generator for (seed, stream); streams do not overlap in practice.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// modes x modes array of N(0,1) coefficients, entry (k-1, l-1) scaled by
/// (k^2 + l^2)^(-decay/2). decay = 0 gives white coefficients.
Array2D random_mode_coefficients(std::mt19937_64& rng, int modes, double decay = 0.0);

/// psi = sum c(k-1, l-1) sin(k pi x1) sin(l pi x2).
ScalarField2D stream_from_modes(const Grid& grid, const Array2D& coeffs);

VectorField2D random_solenoidal_field(const Grid& grid, std::mt19937_64& rng, int modes = 8, double decay = 0.0);

/// (D1 phi, D2 phi) for a random mode sum phi; centered, zero ghosts. Not flagged.
VectorField2D random_gradient_field(const Grid& grid, std::mt19937_64& rng, int modes = 8, double decay = 0.0);

/// Smooth random control trajectory: each slice a low-mode solenoidal field
/// modulated in time, plus an optional curl-free part.
Trajectory random_control(const Grid& grid, int steps, double dt, std::mt19937_64& rng, bool with_gradient_part = false,
                          int modes = 4, double decay = 2.0);

}  // namespace sgfopt
