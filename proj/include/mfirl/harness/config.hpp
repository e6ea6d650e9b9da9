#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfirl {

/// Invalid configuration (file contents, flag values, key combinations).
/// The CLI maps this to exit code 1; other exceptions mean runtime
/// failures and exit 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` text config. `#` starts a comment, blank lines are
/// skipped, later assignments win. Values keep internal spaces but are
/// trimmed at both ends.
class Config {
 public:
  Config() = default;
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) {
    kv_[key] = value;
  }

  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<int> get_int_list(const std::string& key,
                                const std::vector<int>& fallback) const;
  std::vector<std::string> get_list(
      const std::string& key, const std::vector<std::string>& fallback) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

/// Comma-separated integers, e.g. "10,100,1000".
std::vector<int> parse_int_list(const std::string& text);
std::vector<std::string> parse_string_list(const std::string& text);

}  // namespace mfirl
