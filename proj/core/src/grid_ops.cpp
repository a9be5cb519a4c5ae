#include "sgfopt/grid_ops.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace sgfopt {

Grid::Grid(int n_interior) : n_(n_interior) {
  if (n_interior < 3)
    throw PreconditionViolation("grid needs at least 3 interior nodes per axis, got " +
                                std::to_string(n_interior));
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b))
    throw GridMismatch(std::string(where) + ": grid mismatch (" + std::to_string(a.n()) + " vs " +
                       std::to_string(b.n()) + ")");
}

// ---------------------------------------------------------------------------

ScalarField2D::ScalarField2D(Grid grid) : grid_(grid), values_(Array2D::Zero(grid.n(), grid.n())) {}

ScalarField2D::ScalarField2D(Grid grid, Array2D values) : grid_(grid), values_(std::move(values)) {
  if (values_.rows() != grid_.n() || values_.cols() != grid_.n())
    throw PreconditionViolation("scalar field values do not conform to the grid");
}

ScalarField2D& ScalarField2D::operator+=(const ScalarField2D& o) {
  require_same_grid(grid_, o.grid_, "ScalarField2D +=");
  values_ += o.values_;
  return *this;
}

ScalarField2D& ScalarField2D::operator-=(const ScalarField2D& o) {
  require_same_grid(grid_, o.grid_, "ScalarField2D -=");
  values_ -= o.values_;
  return *this;
}

ScalarField2D& ScalarField2D::operator*=(double c) {
  values_ *= c;
  return *this;
}

ScalarField2D operator+(ScalarField2D a, const ScalarField2D& b) { return a += b; }
ScalarField2D operator-(ScalarField2D a, const ScalarField2D& b) { return a -= b; }
ScalarField2D operator*(double c, ScalarField2D a) { return a *= c; }

// ---------------------------------------------------------------------------

VectorField2D::VectorField2D(Grid grid)
    : grid_(grid), u1_(Array2D::Zero(grid.n(), grid.n())), u2_(Array2D::Zero(grid.n(), grid.n())) {}

VectorField2D::VectorField2D(Grid grid, Array2D u1, Array2D u2)
    : grid_(grid), u1_(std::move(u1)), u2_(std::move(u2)) {
  const auto n = grid_.n();
  if (u1_.rows() != n || u1_.cols() != n || u2_.rows() != n || u2_.cols() != n)
    throw PreconditionViolation("vector field components do not conform to the grid");
}

const Array2D& VectorField2D::stream() const {
  if (!stream_) throw PreconditionViolation("vector field is not flagged divergence-free");
  return *stream_;
}

VectorField2D& VectorField2D::operator+=(const VectorField2D& o) {
  require_same_grid(grid_, o.grid_, "VectorField2D +=");
  u1_ += o.u1_;
  u2_ += o.u2_;
  if (stream_ && o.stream_)
    *stream_ += *o.stream_;
  else
    stream_.reset();
  return *this;
}

VectorField2D& VectorField2D::operator-=(const VectorField2D& o) {
  require_same_grid(grid_, o.grid_, "VectorField2D -=");
  u1_ -= o.u1_;
  u2_ -= o.u2_;
  if (stream_ && o.stream_)
    *stream_ -= *o.stream_;
  else
    stream_.reset();
  return *this;
}

VectorField2D& VectorField2D::operator*=(double c) {
  u1_ *= c;
  u2_ *= c;
  if (stream_) *stream_ *= c;
  return *this;
}

VectorField2D operator+(VectorField2D a, const VectorField2D& b) { return a += b; }
VectorField2D operator-(VectorField2D a, const VectorField2D& b) { return a -= b; }
VectorField2D operator*(double c, VectorField2D a) { return a *= c; }

// ---------------------------------------------------------------------------

Array2D centered_diff(const Array2D& f, int axis, double h) {
  const Eigen::Index n = f.rows();
  Array2D d(n, n);
  const double s = 0.5 / h;
  if (axis == 0) {
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) {
        const double fp = i + 1 < n ? f(i + 1, j) : 0.0;
        const double fm = i > 0 ? f(i - 1, j) : 0.0;
        d(i, j) = s * (fp - fm);
      }
  } else {
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) {
        const double fp = j + 1 < n ? f(i, j + 1) : 0.0;
        const double fm = j > 0 ? f(i, j - 1) : 0.0;
        d(i, j) = s * (fp - fm);
      }
  }
  return d;
}

Array2D laplacian(const Array2D& f, double h) {
  const Eigen::Index n = f.rows();
  Array2D out(n, n);
  const double s = 1.0 / (h * h);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double e = i + 1 < n ? f(i + 1, j) : 0.0;
      const double w = i > 0 ? f(i - 1, j) : 0.0;
      const double no = j + 1 < n ? f(i, j + 1) : 0.0;
      const double so = j > 0 ? f(i, j - 1) : 0.0;
      out(i, j) = s * (e + w + no + so - 4.0 * f(i, j));
    }
  return out;
}

ScalarField2D laplacian(const ScalarField2D& f) {
  return ScalarField2D(f.grid(), laplacian(f.values(), f.grid().h()));
}

VectorField2D velocity_from_stream(const ScalarField2D& psi) {
  const double h = psi.grid().h();
  VectorField2D y(psi.grid(), centered_diff(psi.values(), 1, h), -centered_diff(psi.values(), 0, h));
  y.stream_ = psi.values();
  return y;
}

ScalarField2D curl2d(const VectorField2D& v) {
  const double h = v.grid().h();
  return ScalarField2D(v.grid(), centered_diff(v.u2(), 0, h) - centered_diff(v.u1(), 1, h));
}

ScalarField2D divergence(const VectorField2D& v) {
  const double h = v.grid().h();
  return ScalarField2D(v.grid(), centered_diff(v.u1(), 0, h) + centered_diff(v.u2(), 1, h));
}

// ---------------------------------------------------------------------------
// Arakawa Jacobian as a table of bilinear terms coef * a(i+ai, j+aj) * b(i+bi, j+bj),
// the sum of the ++, +x and x+ forms. Global factor 1/(12 h^2).

namespace {

struct BilinearTerm {
  int ai, aj, bi, bj;
  double coef;
};

constexpr std::array<BilinearTerm, 24> kArakawa{{
    // J++
    {1, 0, 0, 1, 1.0},
    {1, 0, 0, -1, -1.0},
    {-1, 0, 0, 1, -1.0},
    {-1, 0, 0, -1, 1.0},
    {0, 1, 1, 0, -1.0},
    {0, 1, -1, 0, 1.0},
    {0, -1, 1, 0, 1.0},
    {0, -1, -1, 0, -1.0},
    // J+x
    {1, 0, 1, 1, 1.0},
    {1, 0, 1, -1, -1.0},
    {-1, 0, -1, 1, -1.0},
    {-1, 0, -1, -1, 1.0},
    {0, 1, 1, 1, -1.0},
    {0, 1, -1, 1, 1.0},
    {0, -1, 1, -1, 1.0},
    {0, -1, -1, -1, -1.0},
    // Jx+
    {1, 1, 0, 1, 1.0},
    {-1, 1, 0, 1, -1.0},
    {1, -1, 0, -1, -1.0},
    {-1, -1, 0, -1, 1.0},
    {1, 1, 1, 0, -1.0},
    {1, -1, 1, 0, 1.0},
    {-1, 1, -1, 0, 1.0},
    {-1, -1, -1, 0, -1.0},
}};

inline bool inside(Eigen::Index i, Eigen::Index j, Eigen::Index n) {
  return i >= 0 && j >= 0 && i < n && j < n;
}

}  // namespace

Array2D arakawa_jacobian(const Array2D& a, const Array2D& b, double h) {
  const Eigen::Index n = a.rows();
  const double s = 1.0 / (12.0 * h * h);
  Array2D out = Array2D::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      double acc = 0.0;
      for (const auto& t : kArakawa) {
        const auto ia = i + t.ai, ja = j + t.aj, ib = i + t.bi, jb = j + t.bj;
        if (inside(ia, ja, n) && inside(ib, jb, n)) acc += t.coef * a(ia, ja) * b(ib, jb);
      }
      out(i, j) = s * acc;
    }
  return out;
}

Array2D arakawa_transpose_second(const Array2D& a, const Array2D& r, double h) {
  const Eigen::Index n = a.rows();
  const double s = 1.0 / (12.0 * h * h);
  Array2D out = Array2D::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double rij = s * r(i, j);
      if (rij == 0.0) continue;
      for (const auto& t : kArakawa) {
        const auto ia = i + t.ai, ja = j + t.aj, ib = i + t.bi, jb = j + t.bj;
        if (inside(ia, ja, n) && inside(ib, jb, n)) out(ib, jb) += t.coef * a(ia, ja) * rij;
      }
    }
  return out;
}

Array2D arakawa_transpose_first(const Array2D& b, const Array2D& r, double h) {
  const Eigen::Index n = b.rows();
  const double s = 1.0 / (12.0 * h * h);
  Array2D out = Array2D::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double rij = s * r(i, j);
      if (rij == 0.0) continue;
      for (const auto& t : kArakawa) {
        const auto ia = i + t.ai, ja = j + t.aj, ib = i + t.bi, jb = j + t.bj;
        if (inside(ia, ja, n) && inside(ib, jb, n)) out(ia, ja) += t.coef * b(ib, jb) * rij;
      }
    }
  return out;
}

ScalarField2D advect(const VectorField2D& y, const ScalarField2D& q) {
  require_same_grid(y.grid(), q.grid(), "advect");
  if (!y.divergence_free())
    throw PreconditionViolation("advect: velocity is not flagged divergence-free");
  return ScalarField2D(q.grid(), -arakawa_jacobian(y.stream(), q.values(), q.grid().h()));
}

// ---------------------------------------------------------------------------
// Elliptic solves. The 5-point Laplacian with Dirichlet ghosts is diagonal in
// the discrete sine basis S(j, k) = sin((j+1)(k+1) pi h), S*S = (n+1)/2 I, so
// both solves are exact up to rounding; the residual is still verified.

namespace {

struct SineBasis {
  Array2D S;
  Eigen::VectorXd eig;  // 1D eigenvalues of -D2 with Dirichlet ghosts
  double inv_scale;     // (2/(n+1))^2 for the 2D inverse transform
};

std::shared_ptr<const SineBasis> sine_basis(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const SineBasis>> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  auto basis = std::make_shared<SineBasis>();
  const double h = 1.0 / (n + 1);
  basis->S.resize(n, n);
  basis->eig.resize(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      basis->S(j, k) = std::sin((j + 1) * (k + 1) * std::numbers::pi * h);
  for (int k = 0; k < n; ++k) {
    const double s = std::sin((k + 1) * std::numbers::pi * h / 2.0);
    basis->eig(k) = 4.0 / (h * h) * s * s;
  }
  basis->inv_scale = (2.0 / (n + 1)) * (2.0 / (n + 1));
  cache.emplace(n, basis);
  return basis;
}

// Solves (shift + a K) f = rhs where K = -Lap_h.
Array2D spectral_solve(const Array2D& rhs, double shift, double a) {
  const auto n = static_cast<int>(rhs.rows());
  const auto basis = sine_basis(n);
  Array2D hat = basis->S * rhs * basis->S;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) hat(i, j) /= shift + a * (basis->eig(i) + basis->eig(j));
  return basis->inv_scale * (basis->S * hat * basis->S);
}

void verify_residual(const Array2D& residual, const Array2D& rhs, const char* what) {
  const double scale = rhs.cwiseAbs().maxCoeff();
  const double res = residual.cwiseAbs().maxCoeff();
  if (!(res <= kEllipticTolerance * scale))  // also catches NaN
    throw SolverDivergence(std::string(what) + ": relative residual " + std::to_string(res / scale) +
                           " above tolerance");
}

}  // namespace

Array2D helmholtz_solve(const Array2D& rhs, double a, double h) {
  if (!(a > 0.0)) throw PreconditionViolation("helmholtz_solve: coefficient must be positive");
  if (rhs.isZero(0.0)) return Array2D::Zero(rhs.rows(), rhs.cols());
  Array2D f = spectral_solve(rhs, 1.0, a);
  verify_residual(rhs - (f - a * laplacian(f, h)), rhs, "helmholtz_solve");
  return f;
}

ScalarField2D helmholtz_solve(const ScalarField2D& rhs, double a) {
  return ScalarField2D(rhs.grid(), helmholtz_solve(rhs.values(), a, rhs.grid().h()));
}

Array2D poisson_solve(const Array2D& omega, double h) {
  if (omega.isZero(0.0)) return Array2D::Zero(omega.rows(), omega.cols());
  Array2D psi = spectral_solve(omega, 0.0, 1.0);
  verify_residual(omega + laplacian(psi, h), omega, "poisson_solve");
  return psi;
}

ScalarField2D poisson_solve(const ScalarField2D& omega) {
  return ScalarField2D(omega.grid(), poisson_solve(omega.values(), omega.grid().h()));
}

double discrete_laplacian_eigenvalue(const Grid& grid, int k1, int k2) {
  const double h = grid.h();
  const double s1 = std::sin(k1 * std::numbers::pi * h / 2.0);
  const double s2 = std::sin(k2 * std::numbers::pi * h / 2.0);
  return 4.0 / (h * h) * (s1 * s1 + s2 * s2);
}

}  // namespace sgfopt
