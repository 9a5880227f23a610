#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace anderson {

/// Flat key = value configuration with dotted keys, e.g. `volume.radius = 10`.
/// Blank lines and lines starting with '#' are ignored.
class Config {
 public:
  Config() = default;

  /// Throws ConfigError (with line number) on malformed or repeated keys.
  static Config parse(std::istream& in);
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key) const;
  long get_long(const std::string& key, long fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<long> get_longs(const std::string& key) const;

  /// Throws ConfigError naming the first key outside `allowed`.
  void require_known(const std::set<std::string>& allowed) const;

  const std::map<std::string, std::string>& values() const { return values_; }

  /// Canonical text: sorted "key=value" lines.
  std::string canonical() const;
  /// FNV-1a 64-bit hash of canonical(), as 16 hex digits.
  std::string hash() const;

 private:
  int line_of(const std::string& key) const;

  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
};

std::uint64_t fnv1a64(const std::string& text);

}  // namespace anderson
