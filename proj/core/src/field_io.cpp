#include "sgfopt/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace sgfopt {

static_assert(std::endian::native == std::endian::little, "SGF2 I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'S', 'G', 'F', '2'};

void write_components(const std::filesystem::path& path, int n, const std::vector<const Array2D*>& comps) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  const std::uint32_t header[3] = {static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(comps.size()), 0u};
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  std::vector<double> row(static_cast<std::size_t>(n));
  for (const Array2D* c : comps)
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = (*c)(i, j);
      out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(n * sizeof(double)));
    }
  if (!out) throw FormatError("write failed: " + path.string());
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_field(const std::filesystem::path& path, const ScalarField2D& f) {
  write_components(path, f.grid().n(), {&f.values()});
}

void write_field(const std::filesystem::path& path, const VectorField2D& v) {
  write_components(path, v.grid().n(), {&v.u1(), &v.u2()});
}

std::variant<ScalarField2D, VectorField2D> read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  char magic[4];
  std::uint32_t header[3];
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw FormatError(path.string() + ": not an SGF2 file");
  const auto n = static_cast<int>(header[0]);
  const auto ncomp = header[1];
  if (n < 3 || n > 1 << 15 || (ncomp != 1 && ncomp != 2))
    throw FormatError(path.string() + ": bad SGF2 header");

  std::vector<Array2D> comps;
  std::vector<double> row(static_cast<std::size_t>(n));
  for (std::uint32_t c = 0; c < ncomp; ++c) {
    Array2D a(n, n);
    for (int i = 0; i < n; ++i) {
      in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(n * sizeof(double)));
      if (!in) throw FormatError(path.string() + ": truncated SGF2 payload");
      for (int j = 0; j < n; ++j) a(i, j) = row[static_cast<std::size_t>(j)];
    }
    if (!a.allFinite()) throw FormatError(path.string() + ": non-finite entries");
    comps.push_back(std::move(a));
  }
  Grid grid(n);
  if (ncomp == 1) return ScalarField2D(grid, std::move(comps[0]));
  return VectorField2D(grid, std::move(comps[0]), std::move(comps[1]));
}

ScalarField2D read_scalar_field(const std::filesystem::path& path) {
  auto f = read_field(path);
  if (auto* s = std::get_if<ScalarField2D>(&f)) return std::move(*s);
  throw FormatError(path.string() + ": expected a scalar field");
}

VectorField2D read_vector_field(const std::filesystem::path& path) {
  auto f = read_field(path);
  if (auto* v = std::get_if<VectorField2D>(&f)) return std::move(*v);
  throw FormatError(path.string() + ": expected a vector field");
}

void write_csv(const std::filesystem::path& path, const ScalarField2D& f) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << "x1,x2,value\n";
  const auto& g = f.grid();
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      out << fmt(g.coord(i)) << ',' << fmt(g.coord(j)) << ',' << fmt(f(i, j)) << '\n';
}

void write_csv(const std::filesystem::path& path, const VectorField2D& v) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << "x1,x2,u1,u2\n";
  const auto& g = v.grid();
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      out << fmt(g.coord(i)) << ',' << fmt(g.coord(j)) << ',' << fmt(v.u1()(i, j)) << ','
          << fmt(v.u2()(i, j)) << '\n';
}

}  // namespace sgfopt
