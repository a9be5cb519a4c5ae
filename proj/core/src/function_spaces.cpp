#include "sgfopt/function_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sgfopt/random_fields.hpp"
#include "sgfopt/state_solver.hpp"

namespace sgfopt {

namespace {

double hk_sq(const Array2D& f, int k, double h) {
  double s = 0.0;
  Array2D d2 = f;
  for (int b = 0; b <= k; ++b) {
    Array2D d = d2;
    for (int a = 0; a + b <= k; ++a) {
      s += d.squaredNorm();
      if (a + b < k) d = one_sided_diff(d, 0, h);
    }
    if (b < k) d2 = one_sided_diff(d2, 1, h);
  }
  return h * h * s;
}

void check_order(int k) {
  if (k < 0 || k > 3) throw PreconditionViolation("norm_hk: order must be 0..3, got " + std::to_string(k));
}

}  // namespace

double inner_l2(const ScalarField2D& a, const ScalarField2D& b) {
  require_same_grid(a.grid(), b.grid(), "inner_l2");
  const double h = a.grid().h();
  return h * h * (a.values().array() * b.values().array()).sum();
}

double inner_l2(const VectorField2D& a, const VectorField2D& b) {
  require_same_grid(a.grid(), b.grid(), "inner_l2");
  const double h = a.grid().h();
  return h * h * ((a.u1().array() * b.u1().array()).sum() + (a.u2().array() * b.u2().array()).sum());
}

double norm_l2(const ScalarField2D& f) { return std::sqrt(inner_l2(f, f)); }
double norm_l2(const VectorField2D& v) { return std::sqrt(inner_l2(v, v)); }

Array2D one_sided_diff(const Array2D& f, int axis, double h) {
  const Eigen::Index n = f.rows();
  Array2D d(f.rows(), f.cols());
  if (axis == 0) {
    d.row(0) = (f.row(1) - f.row(0)) / h;
    d.row(n - 1) = (f.row(n - 1) - f.row(n - 2)) / h;
    d.middleRows(1, n - 2) = (f.bottomRows(n - 2) - f.topRows(n - 2)) / (2.0 * h);
  } else {
    const Eigen::Index m = f.cols();
    d.col(0) = (f.col(1) - f.col(0)) / h;
    d.col(m - 1) = (f.col(m - 1) - f.col(m - 2)) / h;
    d.middleCols(1, m - 2) = (f.rightCols(m - 2) - f.leftCols(m - 2)) / (2.0 * h);
  }
  return d;
}

double norm_hk(const ScalarField2D& f, int k) {
  check_order(k);
  return std::sqrt(hk_sq(f.values(), k, f.grid().h()));
}

double norm_hk(const VectorField2D& v, int k) {
  check_order(k);
  const double h = v.grid().h();
  return std::sqrt(hk_sq(v.u1(), k, h) + hk_sq(v.u2(), k, h));
}

double grad_norm_sq(const VectorField2D& v) {
  const double h = v.grid().h();
  double s = 0.0;
  for (const Array2D* c : {&v.u1(), &v.u2()})
    s += one_sided_diff(*c, 0, h).squaredNorm() + one_sided_diff(*c, 1, h).squaredNorm();
  return h * h * s;
}

double sym_grad_norm_sq(const VectorField2D& v) {
  const double h = v.grid().h();
  const Array2D d11 = one_sided_diff(v.u1(), 0, h);
  const Array2D d22 = one_sided_diff(v.u2(), 1, h);
  const Array2D off = 0.5 * (one_sided_diff(v.u1(), 1, h) + one_sided_diff(v.u2(), 0, h));
  return h * h * (d11.squaredNorm() + d22.squaredNorm() + 2.0 * off.squaredNorm());
}

NormSuite::NormSuite(Grid grid, double alpha) : grid_(grid), alpha_(alpha) {
  if (!(alpha > 0.0)) throw PreconditionViolation("NormSuite: alpha must be positive");
}

double NormSuite::norm_V(const VectorField2D& v) const {
  require_same_grid(grid_, v.grid(), "NormSuite::norm_V");
  return sgfopt::norm_V(v, alpha_);
}

double norm_V(const VectorField2D& v, double alpha) {
  return std::sqrt(inner_l2(v, v) + 2.0 * alpha * sym_grad_norm_sq(v));
}

double inner_l2q(const Trajectory& a, const Trajectory& b) {
  if (!a.aligned_with(b)) throw PreconditionViolation("inner_l2q: trajectories are not aligned");
  double s = 0.0;
  for (int n = 0; n <= a.steps(); ++n) s += a.weight(n) * inner_l2(a[n], b[n]);
  return s;
}

double norm_l2q(const Trajectory& a) { return std::sqrt(inner_l2q(a, a)); }

double norm_l2h1(const Trajectory& a) {
  double s = 0.0;
  for (int n = 0; n <= a.steps(); ++n) {
    const double r = norm_hk(a[n], 1);
    s += a.weight(n) * r * r;
  }
  return std::sqrt(s);
}

double norm_l1h1(const Trajectory& a) {
  double s = 0.0;
  for (int n = 0; n <= a.steps(); ++n) s += a.weight(n) * norm_hk(a[n], 1);
  return s;
}

double norm_linf_hk(const Trajectory& a, int k) {
  double m = 0.0;
  for (const auto& s : a) m = std::max(m, norm_hk(s, k));
  return m;
}

// ---------------------------------------------------------------------------

std::string_view to_string(ConstantSource s) {
  switch (s) {
    case ConstantSource::user_supplied: return "user_supplied";
    case ConstantSource::estimated: return "estimated";
    case ConstantSource::default_unit: return "default_unit";
  }
  return "unknown";
}

ConstantSource constant_source_from_string(std::string_view s) {
  if (s == "user_supplied") return ConstantSource::user_supplied;
  if (s == "estimated") return ConstantSource::estimated;
  if (s == "default_unit") return ConstantSource::default_unit;
  throw FormatError("unknown constant source `" + std::string(s) + "`");
}

bool DomainConstants::any_default() const {
  bool any = false;
  for_each([&](const char*, const DomainConstant& c) { any = any || c.source == ConstantSource::default_unit; });
  return any;
}

void DomainConstants::validate() const {
  for_each([](const char* name, const DomainConstant& c) {
    if (!(std::isfinite(c.value) && c.value > 0.0))
      throw PreconditionViolation(std::string("domain constant ") + name + " must be finite and positive");
  });
}

DomainConstants constants_from_entries(const std::vector<KvEntry>& entries) {
  DomainConstants out;
  std::map<std::string, DomainConstant*> slots;
  out.for_each([&](const char* name, DomainConstant& c) { slots[name] = &c; });
  std::map<std::string, std::pair<ConstantSource, int>> sources;

  for (const auto& e : entries) {
    if (auto it = slots.find(e.key); it != slots.end()) {
      const double v = parse_double(e.value, e.key, e.line);
      if (!(std::isfinite(v) && v > 0.0)) throw ConfigError("`" + e.key + "` must be positive", e.line, e.key);
      it->second->value = v;
      it->second->source = ConstantSource::user_supplied;
      continue;
    }
    const auto pos = e.key.rfind("_source");
    if (pos != std::string::npos && pos + 7 == e.key.size() && slots.count(e.key.substr(0, pos))) {
      try {
        sources[e.key.substr(0, pos)] = {constant_source_from_string(e.value), e.line};
      } catch (const FormatError& err) {
        throw ConfigError(err.what(), e.line, e.key);
      }
      continue;
    }
    std::string best;
    int best_d = 1 << 30;
    for (const auto& [name, _] : slots)
      if (int d = edit_distance(e.key, name); d < best_d) best_d = d, best = name;
    std::string msg = "unknown constant `" + e.key + "`";
    if (best_d <= 2) msg += " (did you mean `" + best + "`?)";
    throw ConfigError(msg, e.line, e.key);
  }
  for (const auto& [name, src] : sources) slots[name]->source = src.first;
  return out;
}

DomainConstants read_constants(const std::filesystem::path& path) {
  return constants_from_entries(parse_kv_file(path));
}

std::string constants_to_text(const DomainConstants& c) {
  std::ostringstream out;
  c.for_each([&](const char* name, const DomainConstant& k) {
    out << name << " = " << format_double(k.value) << '\n';
    out << name << "_source = " << to_string(k.source) << '\n';
  });
  return out.str();
}

void write_constants(const std::filesystem::path& path, const DomainConstants& c) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << constants_to_text(c);
}

// ---------------------------------------------------------------------------

std::string_view to_string(InequalityKind k) {
  switch (k) {
    case InequalityKind::korn: return "korn";
    case InequalityKind::elliptic: return "elliptic";
    case InequalityKind::trilinear: return "trilinear";
  }
  return "unknown";
}

namespace {

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

VectorField2D elliptic_operator(const VectorField2D& y) {
  return velocity_from_stream(laplacian(ScalarField2D(y.grid(), y.stream())));
}

}  // namespace

double korn_ratio(const VectorField2D& y) {
  const double l2 = inner_l2(y, y);
  return ratio_or_zero(l2 + grad_norm_sq(y), l2 + sym_grad_norm_sq(y));
}

double elliptic_ratio(const VectorField2D& y) {
  const VectorField2D ay = elliptic_operator(y);
  const double h2 = norm_hk(y, 2);
  return ratio_or_zero(h2 * h2, inner_l2(y, y) + inner_l2(ay, ay));
}

double trilinear_ratio(const VectorField2D& z, const VectorField2D& phi, double alpha) {
  const double hz = norm_hk(z, 2);
  return ratio_or_zero(std::abs(nonlinear_term(z, phi, alpha)), norm_hk(phi, 2) * hz * hz);
}

namespace {

InequalityCheck make_check(double lhs, double rhs) { return {lhs, rhs, lhs <= rhs * (1.0 + 1e-12)}; }

}  // namespace

InequalityCheck check_korn(const VectorField2D& y, const DomainConstants& c) {
  const double l2 = inner_l2(y, y);
  return make_check(l2 + grad_norm_sq(y), c.K.value * (l2 + sym_grad_norm_sq(y)));
}

InequalityCheck check_elliptic(const VectorField2D& y, const DomainConstants& c) {
  const VectorField2D ay = elliptic_operator(y);
  const double h2 = norm_hk(y, 2);
  return make_check(h2 * h2, c.K_tilde.value * (inner_l2(y, y) + inner_l2(ay, ay)));
}

InequalityCheck check_trilinear(const VectorField2D& z, const VectorField2D& phi, double alpha,
                                const DomainConstants& c) {
  const double hz = norm_hk(z, 2);
  return make_check(std::abs(nonlinear_term(z, phi, alpha)), c.K_hat.value * norm_hk(phi, 2) * hz * hz);
}

InequalityCheck check_inequality(InequalityKind kind, std::span<const VectorField2D> fields, double alpha,
                                 const DomainConstants& c) {
  const std::size_t need = kind == InequalityKind::trilinear ? 2 : 1;
  if (fields.size() != need)
    throw PreconditionViolation("check_inequality(" + std::string(to_string(kind)) + ") expects " +
                                std::to_string(need) + " field(s)");
  switch (kind) {
    case InequalityKind::korn: return check_korn(fields[0], c);
    case InequalityKind::elliptic: return check_elliptic(fields[0], c);
    case InequalityKind::trilinear: return check_trilinear(fields[0], fields[1], alpha, c);
  }
  return {};
}

// ---------------------------------------------------------------------------

namespace {

struct Sample {
  std::mt19937_64 rng;
  std::vector<Array2D> coeffs;
};

Sample draw_sample(InequalityKind kind, std::uint64_t seed, int s) {
  Sample out{make_rng(seed, static_cast<std::uint64_t>(s)), {}};
  const int count = kind == InequalityKind::trilinear ? 2 : 1;
  for (int i = 0; i < count; ++i) out.coeffs.push_back(random_mode_coefficients(out.rng, kEstimatorModes));
  return out;
}

std::vector<VectorField2D> fields_of(const std::vector<Array2D>& coeffs, const Grid& grid) {
  std::vector<VectorField2D> out;
  for (const auto& c : coeffs) out.push_back(velocity_from_stream(stream_from_modes(grid, c)));
  return out;
}

double sample_ratio(InequalityKind kind, const std::vector<Array2D>& coeffs, const Grid& grid, double alpha) {
  const auto f = fields_of(coeffs, grid);
  switch (kind) {
    case InequalityKind::korn: return korn_ratio(f[0]);
    case InequalityKind::elliptic: return elliptic_ratio(f[0]);
    case InequalityKind::trilinear: return trilinear_ratio(f[0], f[1], alpha);
  }
  return 0.0;
}

}  // namespace

std::vector<VectorField2D> inequality_sample(InequalityKind kind, std::uint64_t seed, int s, Grid grid) {
  return fields_of(draw_sample(kind, seed, s).coeffs, grid);
}

double estimate_constant(InequalityKind kind, int samples, std::uint64_t seed, Grid grid, double alpha) {
  if (samples < 1) throw PreconditionViolation("estimate_constant: samples must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    Sample smp = draw_sample(kind, seed, s);
    double r = sample_ratio(kind, smp.coeffs, grid, alpha);
    for (int step = 0; step < kAscentSteps; ++step) {
      std::vector<Array2D> trial = smp.coeffs;
      for (auto& c : trial) {
        const double rms = std::sqrt(c.squaredNorm() / static_cast<double>(c.size()));
        for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] += 0.1 * rms * normal(smp.rng);
      }
      const double rt = sample_ratio(kind, trial, grid, alpha);
      if (rt > r) r = rt, smp.coeffs = std::move(trial);
    }
    best = std::max(best, r);
  }
  return best;
}

}  // namespace sgfopt
