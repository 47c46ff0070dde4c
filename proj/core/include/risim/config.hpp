#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "risim/types.hpp"

namespace risim {

/// Flat `key = value` text with `#` comments; nesting uses dotted keys.
///
/// Every key must appear in known_keys(). Overrides may name a key by its
/// last dotted component when that is unambiguous (`max_iter=1`).
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text, const std::string& origin = "<string>");
  static KeyValueConfig load(const std::filesystem::path& path);

  /// Applies `key=value` strings; throws InvalidArgument listing unknown keys.
  void apply_overrides(const std::vector<std::string>& overrides);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::optional<double> get_optional_double(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  Vec3 get_vec3(const std::string& key, const Vec3& fallback) const;
  Complex get_complex(const std::string& key, Complex fallback) const;
  std::vector<long long> get_int_list(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key, char separator = ',') const;

  /// Canonical text, one `key = value` per line in key order.
  std::string to_string() const;

  static const std::set<std::string>& known_keys();

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
};

/// Splits on `separator` and trims whitespace; empty fields are dropped.
std::vector<std::string> split_trimmed(const std::string& text, char separator);

}  // namespace risim
