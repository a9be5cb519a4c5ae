#pragma once

// Tracking-type control problem on the ball ||u||_{L2(0,T;H1)} <= L:
// cost, projection, projected gradient with Armijo backtracking, the
// variational-inequality residual, and the multi-start uniqueness experiment.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgfopt/certificates.hpp"

namespace sgfopt {

/// 1/2 ||y - y_d||^2_{L2(Q)} + lambda/2 ||u||^2_{L2(Q)}, trapezoid in time.
double cost(const Trajectory& u, const Trajectory& y, const Trajectory& y_d, double lambda);

/// J(u) = cost(u, S(u), y_d, lambda). Propagates BlowUpError.
double reduced_cost(const Trajectory& u, const ProblemData& pd);

struct CostGradient {
  double J = 0.0;
  Trajectory gradient;
  StateSolution state;
};

CostGradient cost_and_gradient(const Trajectory& u, const ProblemData& pd);

/// Radial projection onto the ball of radius L in L2(0,T;H1).
Trajectory project_Uad(const Trajectory& u, double L);

/// ||u - project_Uad(u - g, L)||_{L2(Q)}.
double vi_residual(const Trajectory& u, const Trajectory& g, double L);

struct OptimizeOptions {
  /// Defaults to 1e-8 (1 + |J(u_init)|).
  std::optional<double> tol;
  int max_iter = 500;
  double armijo_c = 1e-4;
  int max_halvings = 40;
};

struct IterationRecord {
  int iteration = 0;
  double J = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
  double vi_residual = 0.0;
};

struct OptimizeReport {
  /// Accepted iterations only; J is strictly decreasing along them.
  std::vector<IterationRecord> iterates;
  double J_initial = 0.0;
  double vi_initial = 0.0;
  double tol = 0.0;
  Trajectory u_final;
  double J_final = 0.0;
  double vi_final = 0.0;
  double state_Linf_H1 = 0.0;
  double state_Linf_H3 = 0.0;
  bool converged = false;
  std::string stop_reason;
  double wall_seconds = 0.0;

  /// iteration,J,grad_norm,step,vi_residual with iteration 0 the initial point.
  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;
};

OptimizeReport optimize(const ProblemData& pd, const Trajectory& u_init, const OptimizeOptions& opts = {});

/// Orthogonal projection of each slice onto the range of velocity_from_stream.
/// Curl-free parts of a control do not affect the state.
Trajectory solenoidal_part(const Trajectory& u);

/// Random admissible start: a smooth solenoidal trajectory plus a curl-free
/// part, scaled to L2(0,T;H1) norm L/2. Identical seeds give identical starts.
Trajectory random_admissible_control(const ProblemData& pd, std::uint64_t seed);

struct MultiStartOptions {
  /// An unset tol becomes 0.1 tol_factor L for every run.
  OptimizeOptions optimize;
  DomainConstants constants;
  Lambda3Reading reading = Lambda3Reading::as_printed;
  /// Distances below tol_factor * L count as one solution.
  double tol_factor = 1e-5;
};

struct MultiStartReport {
  std::vector<std::uint64_t> seeds;
  std::vector<OptimizeReport> runs;
  /// Pairwise L2(Q) distances of the solenoidal parts of the final controls.
  Eigen::MatrixXd distances;
  double max_distance = 0.0;
  bool unique_within_tol = false;
  CertificateReport certificate;
  bool lambda_exceeds_threshold = false;

  std::string to_text() const;
};

MultiStartReport multi_start_uniqueness(const ProblemData& pd, std::span<const std::uint64_t> seeds,
                                        const MultiStartOptions& opts = {});
/// Seeds seed, seed + 1, ..., seed + n_starts - 1.
MultiStartReport multi_start_uniqueness(const ProblemData& pd, int n_starts, std::uint64_t seed,
                                        const MultiStartOptions& opts = {});

}  // namespace sgfopt
