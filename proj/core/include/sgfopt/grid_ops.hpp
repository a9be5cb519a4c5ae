#pragma once

// Uniform-grid discretization of the unit square: field types, finite
// difference operators and the two elliptic solves used by every solver.
//
// Fields are sampled on the n x n interior nodes x = ((i+1)h, (j+1)h),
// h = 1/(n+1). Entry (i, j) of an Array2D is the node with x1 index i and
// x2 index j. All stencils read zero at the boundary ring (homogeneous
// Dirichlet ghosts).

#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "sgfopt/errors.hpp"

namespace sgfopt {

using Array2D = Eigen::MatrixXd;

class Grid {
 public:
  explicit Grid(int n_interior);

  int n() const noexcept { return n_; }
  double h() const noexcept { return 1.0 / (n_ + 1); }
  /// Coordinate of interior index i along either axis.
  double coord(int i) const noexcept { return (i + 1) * h(); }

  bool operator==(const Grid&) const = default;

 private:
  int n_;
};

class ScalarField2D {
 public:
  explicit ScalarField2D(Grid grid);
  ScalarField2D(Grid grid, Array2D values);

  /// Samples f(x1, x2) at the interior nodes.
  template <class F>
  static ScalarField2D sample(Grid grid, F&& f) {
    Array2D v(grid.n(), grid.n());
    for (int j = 0; j < grid.n(); ++j)
      for (int i = 0; i < grid.n(); ++i) v(i, j) = f(grid.coord(i), grid.coord(j));
    return ScalarField2D(grid, std::move(v));
  }

  const Grid& grid() const noexcept { return grid_; }
  const Array2D& values() const noexcept { return values_; }
  Array2D& values() noexcept { return values_; }
  double operator()(int i, int j) const { return values_(i, j); }

  bool all_finite() const { return values_.allFinite(); }

  ScalarField2D& operator+=(const ScalarField2D& o);
  ScalarField2D& operator-=(const ScalarField2D& o);
  ScalarField2D& operator*=(double c);

 private:
  Grid grid_;
  Array2D values_;
};

ScalarField2D operator+(ScalarField2D a, const ScalarField2D& b);
ScalarField2D operator-(ScalarField2D a, const ScalarField2D& b);
ScalarField2D operator*(double c, ScalarField2D a);

/// Two-component field. A field produced by velocity_from_stream keeps its
/// stream function; that is what "flagged divergence-free" means, and it is
/// what the Arakawa advection operator consumes. Linear combinations of
/// flagged fields stay flagged.
class VectorField2D {
 public:
  explicit VectorField2D(Grid grid);
  VectorField2D(Grid grid, Array2D u1, Array2D u2);

  const Grid& grid() const noexcept { return grid_; }
  const Array2D& u1() const noexcept { return u1_; }
  const Array2D& u2() const noexcept { return u2_; }
  Array2D& u1() noexcept { return u1_; }
  Array2D& u2() noexcept { return u2_; }

  bool divergence_free() const noexcept { return stream_.has_value(); }
  /// Stream function; throws PreconditionViolation if the field is not flagged.
  const Array2D& stream() const;
  /// Drops the divergence-free flag (e.g. after editing components in place).
  void clear_stream() noexcept { stream_.reset(); }

  bool all_finite() const { return u1_.allFinite() && u2_.allFinite(); }

  VectorField2D& operator+=(const VectorField2D& o);
  VectorField2D& operator-=(const VectorField2D& o);
  VectorField2D& operator*=(double c);

 private:
  friend VectorField2D velocity_from_stream(const ScalarField2D& psi);

  Grid grid_;
  Array2D u1_, u2_;
  std::optional<Array2D> stream_;
};

VectorField2D operator+(VectorField2D a, const VectorField2D& b);
VectorField2D operator-(VectorField2D a, const VectorField2D& b);
VectorField2D operator*(double c, VectorField2D a);

void require_same_grid(const Grid& a, const Grid& b, const char* where);

// ---------------------------------------------------------------------------
// Difference operators (zero ghosts)

/// Centered first difference along x1 (axis 0) or x2 (axis 1).
Array2D centered_diff(const Array2D& f, int axis, double h);

/// 5-point Laplacian.
ScalarField2D laplacian(const ScalarField2D& f);
Array2D laplacian(const Array2D& f, double h);

/// y = (d2 psi, -d1 psi) with centered differences; the result is flagged.
VectorField2D velocity_from_stream(const ScalarField2D& psi);

/// d1 v2 - d2 v1 with centered differences. Its transpose is
/// velocity_from_stream (as linear maps on raw node values).
ScalarField2D curl2d(const VectorField2D& v);

/// d1 v1 + d2 v2 with centered differences.
ScalarField2D divergence(const VectorField2D& v);

/// Arakawa discretization of J(a, b) = a_x1 b_x2 - a_x2 b_x1.
Array2D arakawa_jacobian(const Array2D& a, const Array2D& b, double h);
/// Transpose of b -> J(a, b): returns t with sum(r * J(a, b)) = sum(t * b).
Array2D arakawa_transpose_second(const Array2D& a, const Array2D& r, double h);
/// Transpose of a -> J(a, b): returns t with sum(r * J(a, b)) = sum(t * a).
Array2D arakawa_transpose_first(const Array2D& b, const Array2D& r, double h);

/// y . grad q for a flagged y, i.e. -J(psi, q) with the Arakawa Jacobian.
/// Throws PreconditionViolation when y is not flagged divergence-free.
ScalarField2D advect(const VectorField2D& y, const ScalarField2D& q);

// ---------------------------------------------------------------------------
// Elliptic solves

/// Relative residual required of every elliptic solve.
inline constexpr double kEllipticTolerance = 1e-11;

/// Solves (I - a Lap_h) f = rhs, a > 0.
ScalarField2D helmholtz_solve(const ScalarField2D& rhs, double a);
Array2D helmholtz_solve(const Array2D& rhs, double a, double h);

/// Solves -Lap_h psi = omega.
ScalarField2D poisson_solve(const ScalarField2D& omega);
Array2D poisson_solve(const Array2D& omega, double h);

/// Eigenvalue of -Lap_h for the mode sin(k1 pi x1) sin(k2 pi x2).
double discrete_laplacian_eigenvalue(const Grid& grid, int k1, int k2);

}  // namespace sgfopt
