#include "sgfopt/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "sgfopt/field_io.hpp"
#include "sgfopt/random_fields.hpp"

namespace sgfopt {

namespace {

constexpr std::pair<Subcommand, std::string_view> kSubcommands[] = {
    {Subcommand::simulate, "simulate"},   {Subcommand::optimize, "optimize"},
    {Subcommand::gradcheck, "gradcheck"}, {Subcommand::certify, "certify"},
    {Subcommand::estimate_constants, "estimate-constants"}, {Subcommand::multistart, "multistart"},
};

}  // namespace

std::string_view to_string(Subcommand s) {
  for (const auto& [k, name] : kSubcommands)
    if (k == s) return name;
  return "unknown";
}

std::optional<Subcommand> subcommand_from_string(std::string_view s) {
  for (const auto& [k, name] : kSubcommands)
    if (name == s) return k;
  return std::nullopt;
}

std::vector<ModeTerm> parse_modes(const std::string& text, const std::string& key, int line) {
  static const std::regex term(R"(\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\))");
  std::vector<ModeTerm> out;
  std::string rest;
  auto begin = std::sregex_iterator(text.begin(), text.end(), term);
  std::size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    rest += text.substr(last, static_cast<std::size_t>(m.position()) - last);
    last = static_cast<std::size_t>(m.position() + m.length());
    ModeTerm t;
    t.k1 = static_cast<int>(parse_integer(m[1].str(), key, line));
    t.k2 = static_cast<int>(parse_integer(m[2].str(), key, line));
    t.amplitude = parse_double(m[3].str(), key, line);
    if (t.k1 < 1 || t.k2 < 1) throw ConfigError("`" + key + "`: mode numbers must be >= 1", line, key);
    if (!std::isfinite(t.amplitude)) throw ConfigError("`" + key + "`: amplitude must be finite", line, key);
    out.push_back(t);
  }
  rest += text.substr(last);
  if (rest.find_first_not_of(" \t") != std::string::npos)
    throw ConfigError("`" + key + "` expects a list of (k1,k2,amplitude) terms", line, key);
  return out;
}

VectorField2D velocity_from_modes(const Grid& grid, const std::vector<ModeTerm>& modes) {
  int kmax = 1;
  for (const auto& m : modes) kmax = std::max({kmax, m.k1, m.k2});
  Array2D c = Array2D::Zero(kmax, kmax);
  for (const auto& m : modes) c(m.k1 - 1, m.k2 - 1) += m.amplitude;
  return velocity_from_stream(stream_from_modes(grid, c));
}

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      "run.subcommand", "run.out",       "run.seed",     "run.snapshot_every", "run.constants",
      "run.tol",        "run.max_iter",  "run.starts",   "run.samples",        "run.lambda3_reading",
      "problem.alpha",  "problem.nu",    "problem.T",    "problem.grid",       "problem.steps",
      "problem.L",      "problem.lambda", "problem.y0",  "problem.yd",         "problem.yd_reference",
      "problem.u",
  };
  return keys;
}

namespace {

std::string suggestion(const std::string& full) {
  std::string best;
  int best_d = 1 << 30;
  for (const auto& k : known_config_keys()) {
    const auto dot = k.find('.');
    const int d = std::min(edit_distance(full, k), edit_distance(full.substr(full.find('.') + 1), k.substr(dot + 1)));
    if (d < best_d) best_d = d, best = k;
  }
  if (best_d > 2) return {};
  return best.substr(best.find('.') + 1);
}

int positive_int(const KvEntry& e, long long min) {
  const long long v = parse_integer(e.value, e.key, e.line);
  if (v < min || v > 1'000'000'000)
    throw ConfigError("`" + e.key + "` must be an integer >= " + std::to_string(min), e.line, e.key);
  return static_cast<int>(v);
}

std::filesystem::path resolve(const std::string& v, const std::filesystem::path& base) {
  std::filesystem::path p(v);
  return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  std::istringstream in(text);
  RunConfig cfg;
  for (const auto& e : parse_kv(in)) {
    const std::string section = e.section.empty() ? "run" : e.section;
    if (section != "run" && section != "problem")
      throw ConfigError("unknown section [" + e.section + "] (expected [run] or [problem])", e.line);
    const std::string full = section + "." + e.key;
    if (std::find(known_config_keys().begin(), known_config_keys().end(), full) == known_config_keys().end()) {
      std::string msg = "unknown key `" + e.key + "` in [" + section + "]";
      if (auto s = suggestion(full); !s.empty()) msg += " (did you mean `" + s + "`?)";
      throw ConfigError(msg, e.line, e.key);
    }
    if (!cfg.key_lines.emplace(full, e.line).second) throw ConfigError("duplicate key `" + e.key + "`", e.line, e.key);

    auto num = [&] { return parse_double(e.value, e.key, e.line); };
    if (full == "run.subcommand") {
      cfg.subcommand = subcommand_from_string(e.value);
      if (!cfg.subcommand) throw ConfigError("unknown subcommand `" + e.value + "`", e.line, e.key);
    } else if (full == "run.out") {
      cfg.out = resolve(e.value, base_dir);
    } else if (full == "run.seed") {
      const long long s = parse_integer(e.value, e.key, e.line);
      if (s < 0) throw ConfigError("`seed` must be nonnegative", e.line, e.key);
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (full == "run.snapshot_every") {
      cfg.snapshot_every = positive_int(e, 0);
    } else if (full == "run.constants") {
      cfg.constants_path = resolve(e.value, base_dir);
    } else if (full == "run.tol") {
      const double t = num();
      if (!(t > 0.0 && std::isfinite(t))) throw ConfigError("`tol` must be positive", e.line, e.key);
      cfg.tol = t;
    } else if (full == "run.max_iter") {
      cfg.max_iter = positive_int(e, 0);
    } else if (full == "run.starts") {
      cfg.starts = positive_int(e, 2);
    } else if (full == "run.samples") {
      cfg.samples = positive_int(e, 1);
    } else if (full == "run.lambda3_reading") {
      try {
        cfg.lambda3_reading = lambda3_reading_from_string(e.value);
      } catch (const FormatError&) {
        throw ConfigError("`lambda3_reading` must be as_printed or from_proof", e.line, e.key);
      }
    } else if (full == "problem.alpha") {
      cfg.params.alpha = num();
    } else if (full == "problem.nu") {
      cfg.params.nu = num();
    } else if (full == "problem.T") {
      cfg.params.T = num();
    } else if (full == "problem.grid") {
      cfg.params.grid_n = static_cast<int>(std::clamp<long long>(parse_integer(e.value, e.key, e.line), -1, 1 << 14));
    } else if (full == "problem.steps") {
      cfg.params.m_steps =
          static_cast<int>(std::clamp<long long>(parse_integer(e.value, e.key, e.line), -1, 1'000'000'000));
    } else if (full == "problem.L") {
      cfg.params.L = num();
    } else if (full == "problem.lambda") {
      cfg.params.lambda = num();
    } else if (full == "problem.y0") {
      cfg.y0_modes = parse_modes(e.value, e.key, e.line);
    } else if (full == "problem.yd") {
      cfg.yd_modes = parse_modes(e.value, e.key, e.line);
    } else if (full == "problem.yd_reference") {
      cfg.yd_reference = resolve(e.value, base_dir);
    } else if (full == "problem.u") {
      cfg.u_modes = parse_modes(e.value, e.key, e.line);
    }
  }
  if (cfg.key_lines.count("problem.yd") && cfg.key_lines.count("problem.yd_reference"))
    throw ConfigError("`yd` and `yd_reference` are mutually exclusive", cfg.key_lines["problem.yd_reference"],
                      "yd_reference");
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.parent_path());
}

ProblemData build_problem(const RunConfig& cfg) {
  auto line_of = [&](const std::string& field) {
    auto it = cfg.key_lines.find("problem." + field);
    return it == cfg.key_lines.end() ? 0 : it->second;
  };
  try {
    const int n = cfg.params.grid_n;
    if (n < 3) throw InvalidProblem("grid", "needs at least 3 interior nodes per axis");
    if (cfg.params.m_steps < 1) throw InvalidProblem("steps", "must be at least 1");
    const Grid grid(n);
    VectorField2D y0 = velocity_from_modes(grid, cfg.y0_modes);
    if (cfg.yd_reference) {
      const double dt = cfg.params.T / cfg.params.m_steps;
      if (!(dt > 0.0)) throw InvalidProblem("T", "must be finite and positive");
      std::vector<VectorField2D> slices;
      for (int k = 0; k <= cfg.params.m_steps; ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "y_%05d.bin", k);
        const auto p = *cfg.yd_reference / "fields" / name;
        try {
          slices.push_back(read_vector_field(p));
        } catch (const FormatError& err) {
          throw InvalidProblem("yd_reference", err.what());
        }
      }
      return ProblemData(cfg.params, std::move(y0), Trajectory(std::move(slices), dt, TrajectoryKind::velocity));
    }
    return ProblemData(cfg.params, std::move(y0), velocity_from_modes(grid, cfg.yd_modes));
  } catch (const InvalidProblem& e) {
    throw ConfigError(e.what(), line_of(e.field()), e.field());
  }
}

DomainConstants load_constants(const RunConfig& cfg) {
  if (!cfg.constants_path) return {};
  try {
    return read_constants(*cfg.constants_path);
  } catch (const ConfigError& e) {
    throw ConfigError(cfg.constants_path->string() + ": " + e.what(), 0, e.field());
  }
}

}  // namespace sgfopt
