#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "sgfopt/grid_ops.hpp"

namespace sgfopt {

enum class TrajectoryKind { velocity, vorticity, potential_vorticity, stream, control, adjoint, tangent };

std::string_view to_string(TrajectoryKind kind);

/// Uniformly spaced time samples t_n = n dt, n = 0..steps(), all on one grid.
template <class Field>
class TrajectoryOf {
 public:
  TrajectoryOf(std::vector<Field> slices, double dt, TrajectoryKind kind)
      : slices_(std::move(slices)), dt_(dt), kind_(kind) {
    if (slices_.empty()) throw PreconditionViolation("trajectory needs at least one slice");
    if (!(dt_ > 0.0)) throw PreconditionViolation("trajectory time step must be positive");
    for (const auto& s : slices_) require_same_grid(s.grid(), slices_.front().grid(), "trajectory");
  }

  static TrajectoryOf constant(const Field& f, int steps, double dt, TrajectoryKind kind) {
    return TrajectoryOf(std::vector<Field>(static_cast<std::size_t>(steps + 1), f), dt, kind);
  }
  static TrajectoryOf zeros(Grid grid, int steps, double dt, TrajectoryKind kind) {
    return constant(Field(grid), steps, dt, kind);
  }

  int steps() const noexcept { return static_cast<int>(slices_.size()) - 1; }
  std::size_t size() const noexcept { return slices_.size(); }
  double dt() const noexcept { return dt_; }
  TrajectoryKind kind() const noexcept { return kind_; }
  const Grid& grid() const noexcept { return slices_.front().grid(); }

  const Field& operator[](std::size_t n) const { return slices_[n]; }
  Field& operator[](std::size_t n) { return slices_[n]; }
  auto begin() const { return slices_.begin(); }
  auto end() const { return slices_.end(); }

  /// Trapezoid weight of slice n.
  double weight(int n) const noexcept { return (n == 0 || n == steps()) ? 0.5 * dt_ : dt_; }

  bool aligned_with(const TrajectoryOf& o) const {
    return size() == o.size() && dt_ == o.dt_ && grid() == o.grid();
  }

  TrajectoryOf& operator+=(const TrajectoryOf& o) {
    check(o);
    for (std::size_t n = 0; n < size(); ++n) slices_[n] += o.slices_[n];
    return *this;
  }
  TrajectoryOf& operator-=(const TrajectoryOf& o) {
    check(o);
    for (std::size_t n = 0; n < size(); ++n) slices_[n] -= o.slices_[n];
    return *this;
  }
  TrajectoryOf& operator*=(double c) {
    for (auto& s : slices_) s *= c;
    return *this;
  }

  friend TrajectoryOf operator+(TrajectoryOf a, const TrajectoryOf& b) { return a += b; }
  friend TrajectoryOf operator-(TrajectoryOf a, const TrajectoryOf& b) { return a -= b; }
  friend TrajectoryOf operator*(double c, TrajectoryOf a) { return a *= c; }

 private:
  void check(const TrajectoryOf& o) const {
    if (!aligned_with(o)) throw PreconditionViolation("trajectories are not aligned");
  }

  std::vector<Field> slices_;
  double dt_;
  TrajectoryKind kind_;
};

using Trajectory = TrajectoryOf<VectorField2D>;
using ScalarTrajectory = TrajectoryOf<ScalarField2D>;

inline std::string_view to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::velocity: return "velocity";
    case TrajectoryKind::vorticity: return "vorticity";
    case TrajectoryKind::potential_vorticity: return "potential_vorticity";
    case TrajectoryKind::stream: return "stream";
    case TrajectoryKind::control: return "control";
    case TrajectoryKind::adjoint: return "adjoint";
    case TrajectoryKind::tangent: return "tangent";
  }
  return "unknown";
}

}  // namespace sgfopt
