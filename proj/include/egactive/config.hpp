#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace egactive {

/// Flat `key = value` settings with dotted section keys. `#` starts a
/// comment; blank lines are ignored; later assignments win.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source);
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  /// Applies a `key=value` override string.
  void set_assignment(const std::string& assignment);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void erase(const std::string& key) { values_.erase(key); }

  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated reals.
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

  /// Sorted `key = value` lines.
  std::string render() const;

 private:
  std::map<std::string, std::string> values_;
};

/// Splits on `sep`, trimming whitespace around each item; empty input gives
/// an empty list.
std::vector<std::string> split_list(const std::string& text, char sep);

/// Reals with 12 significant digits (the output format of every emitted file).
std::string format_real(double value);
/// Shortest text that reads back to the same double (used for config echo).
std::string format_exact(double value);

}  // namespace egactive
