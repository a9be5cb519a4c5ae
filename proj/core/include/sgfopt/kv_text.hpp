#pragma once

// Flat key-value text: one `name = value` per line, `#` starts a comment,
// optional `[section]` headers.

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace sgfopt {

struct KvEntry {
  std::string section;  // empty for keys before the first header
  std::string key;
  std::string value;
  int line = 0;
};

/// Throws ConfigError (with line number) on malformed lines.
std::vector<KvEntry> parse_kv(std::istream& in);
std::vector<KvEntry> parse_kv_file(const std::filesystem::path& path);

/// Parses a full-string double; throws ConfigError naming `key` and `line`.
double parse_double(const std::string& text, const std::string& key, int line);
long long parse_integer(const std::string& text, const std::string& key, int line);

/// Shortest round-trip representation.
std::string format_double(double v);

/// Levenshtein distance, used for "did you mean" suggestions.
int edit_distance(const std::string& a, const std::string& b);

}  // namespace sgfopt
