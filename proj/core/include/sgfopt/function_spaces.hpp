#pragma once

// Discrete inner products and Sobolev-type norms, the domain constants that
// appear in the a-priori estimates, and sampling estimators for K, K~, K^.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "sgfopt/grid_ops.hpp"
#include "sgfopt/kv_text.hpp"
#include "sgfopt/trajectory.hpp"

namespace sgfopt {

// ---------------------------------------------------------------------------
// Inner products and norms. Quadrature is h^2 times the sum over interior nodes.

double inner_l2(const ScalarField2D& a, const ScalarField2D& b);
double inner_l2(const VectorField2D& a, const VectorField2D& b);
double norm_l2(const ScalarField2D& f);
double norm_l2(const VectorField2D& v);

/// First difference without ghost values: centered inside, one-sided
/// (first order) at the two boundary-adjacent nodes. Constants map to zero.
Array2D one_sided_diff(const Array2D& f, int axis, double h);

/// sqrt of the sum of squared L2 norms of all difference quotients
/// D1^a D2^b, a + b <= k, over every component. k in {0, 1, 2, 3}.
double norm_hk(const ScalarField2D& f, int k);
double norm_hk(const VectorField2D& v, int k);

/// ||grad v||_2^2 and ||Dv||_2^2, with Dv the symmetric part of grad v.
double grad_norm_sq(const VectorField2D& v);
double sym_grad_norm_sq(const VectorField2D& v);

/// The V inner product (u, v) + 2 alpha (Du, Dv) on a fixed grid.
class NormSuite {
 public:
  NormSuite(Grid grid, double alpha);
  const Grid& grid() const noexcept { return grid_; }
  double alpha() const noexcept { return alpha_; }
  double norm_V(const VectorField2D& v) const;

 private:
  Grid grid_;
  double alpha_;
};

double norm_V(const VectorField2D& v, double alpha);

// Space-time norms with trapezoid weights in time.
double inner_l2q(const Trajectory& a, const Trajectory& b);
double norm_l2q(const Trajectory& a);
double norm_l2h1(const Trajectory& a);
double norm_l1h1(const Trajectory& a);
/// max over slices of the H^k norm.
double norm_linf_hk(const Trajectory& a, int k);

// ---------------------------------------------------------------------------
// Domain constants

enum class ConstantSource { user_supplied, estimated, default_unit };

std::string_view to_string(ConstantSource s);
ConstantSource constant_source_from_string(std::string_view s);

struct DomainConstant {
  double value = 1.0;
  ConstantSource source = ConstantSource::default_unit;
  bool operator==(const DomainConstant&) const = default;
};

struct DomainConstants {
  DomainConstant K;        // Korn
  DomainConstant K_tilde;  // elliptic (H^2 by L2 + Stokes-type operator)
  DomainConstant K_hat;    // nonlinear term
  DomainConstant C1, C2, C3, C4;

  bool operator==(const DomainConstants&) const = default;

  bool any_default() const;
  /// Throws PreconditionViolation unless every value is finite and positive.
  void validate() const;

  template <class Fn>
  void for_each(Fn&& fn) {
    fn("K", K), fn("K_tilde", K_tilde), fn("K_hat", K_hat);
    fn("C1", C1), fn("C2", C2), fn("C3", C3), fn("C4", C4);
  }
  template <class Fn>
  void for_each(Fn&& fn) const {
    fn("K", K), fn("K_tilde", K_tilde), fn("K_hat", K_hat);
    fn("C1", C1), fn("C2", C2), fn("C3", C3), fn("C4", C4);
  }
};

/// Keys `K`, `K_tilde`, `K_hat`, `C1`..`C4` and optional `<name>_source`.
/// A value given without a source tag counts as user_supplied; absent
/// constants stay at 1.0 with source default_unit.
DomainConstants constants_from_entries(const std::vector<KvEntry>& entries);
DomainConstants read_constants(const std::filesystem::path& path);
std::string constants_to_text(const DomainConstants& c);
void write_constants(const std::filesystem::path& path, const DomainConstants& c);

// ---------------------------------------------------------------------------
// Inequalities and constant estimation

enum class InequalityKind { korn, elliptic, trilinear };

std::string_view to_string(InequalityKind k);

/// ||y||_{H1}^2 / (||y||^2 + ||Dy||^2).
double korn_ratio(const VectorField2D& y);
/// ||y||_{H2}^2 / (||y||^2 + ||A y||^2), A y = velocity of Lap_h(stream); y must be flagged.
double elliptic_ratio(const VectorField2D& y);
/// |(curl v(z) x z, phi)| / (||phi||_{H2} ||z||_{H2}^2).
double trilinear_ratio(const VectorField2D& z, const VectorField2D& phi, double alpha);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

/// holds means lhs <= rhs up to a relative rounding allowance of 1e-12.
InequalityCheck check_korn(const VectorField2D& y, const DomainConstants& c);
InequalityCheck check_elliptic(const VectorField2D& y, const DomainConstants& c);
InequalityCheck check_trilinear(const VectorField2D& z, const VectorField2D& phi, double alpha,
                                const DomainConstants& c);
/// Dispatcher: korn/elliptic take one field, trilinear takes (z, phi).
InequalityCheck check_inequality(InequalityKind kind, std::span<const VectorField2D> fields, double alpha,
                                 const DomainConstants& c);

/// The sample family of the estimator: sample s of `kind` for `seed`
/// (one field for korn/elliptic, the pair (z, phi) for trilinear). Sample
/// s does not depend on how many samples are drawn in total.
std::vector<VectorField2D> inequality_sample(InequalityKind kind, std::uint64_t seed, int s, Grid grid);

inline constexpr int kEstimatorModes = 8;
inline constexpr int kAscentSteps = 50;

/// Largest ratio seen over `samples` random divergence-free fields, each
/// refined by kAscentSteps of random local ascent in mode space. A lower
/// bound on the discrete constant; deterministic in (kind, samples, seed)
/// and nondecreasing in `samples`.
double estimate_constant(InequalityKind kind, int samples, std::uint64_t seed, Grid grid, double alpha);

}  // namespace sgfopt
