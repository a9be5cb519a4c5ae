#include "sgfopt/random_fields.hpp"

#include <cmath>
#include <numbers>

namespace sgfopt {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x5f3759dfu};
  return std::mt19937_64(seq);
}

Array2D random_mode_coefficients(std::mt19937_64& rng, int modes, double decay) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Array2D c(modes, modes);
  for (int k = 1; k <= modes; ++k)
    for (int l = 1; l <= modes; ++l) c(k - 1, l - 1) = normal(rng) * std::pow(double(k * k + l * l), -0.5 * decay);
  return c;
}

ScalarField2D stream_from_modes(const Grid& grid, const Array2D& coeffs) {
  const int n = grid.n();
  Array2D s1(n, coeffs.rows()), s2(n, coeffs.cols());
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < coeffs.rows(); ++k) s1(i, k) = std::sin((k + 1) * std::numbers::pi * grid.coord(i));
    for (int l = 0; l < coeffs.cols(); ++l) s2(i, l) = std::sin((l + 1) * std::numbers::pi * grid.coord(i));
  }
  return ScalarField2D(grid, s1 * coeffs * s2.transpose());
}

VectorField2D random_solenoidal_field(const Grid& grid, std::mt19937_64& rng, int modes, double decay) {
  return velocity_from_stream(stream_from_modes(grid, random_mode_coefficients(rng, modes, decay)));
}

VectorField2D random_gradient_field(const Grid& grid, std::mt19937_64& rng, int modes, double decay) {
  const ScalarField2D phi = stream_from_modes(grid, random_mode_coefficients(rng, modes, decay));
  return VectorField2D(grid, centered_diff(phi.values(), 0, grid.h()), centered_diff(phi.values(), 1, grid.h()));
}

Trajectory random_control(const Grid& grid, int steps, double dt, std::mt19937_64& rng, bool with_gradient_part,
                          int modes, double decay) {
  const VectorField2D a = random_solenoidal_field(grid, rng, modes, decay);
  const VectorField2D b = random_solenoidal_field(grid, rng, modes, decay);
  std::optional<VectorField2D> g;
  if (with_gradient_part) g = random_gradient_field(grid, rng, modes, decay);
  const double T = steps * dt;
  std::vector<VectorField2D> slices;
  slices.reserve(static_cast<std::size_t>(steps + 1));
  for (int n = 0; n <= steps; ++n) {
    const double t = n * dt / T;
    VectorField2D s = std::cos(std::numbers::pi * t) * a + std::sin(std::numbers::pi * t) * b;
    if (g) s += *g;
    slices.push_back(std::move(s));
  }
  return Trajectory(std::move(slices), dt, TrajectoryKind::control);
}

}  // namespace sgfopt
