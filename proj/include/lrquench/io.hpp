#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace lrq {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

/// Flat `key = value` configuration with `#` comments. Keys are kept sorted
/// so the hash does not depend on line order.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return values_; }

  /// Canonical `key=value\n` rendering.
  std::string canonical() const;
  /// 64-bit FNV-1a of canonical(), as 16 hex digits.
  std::string hash() const;

 private:
  std::map<std::string, std::string> values_;
};

std::uint64_t fnv1a(std::string_view data);

/// Comment line placed at the top of every CSV.
std::string csv_hash_comment(const KeyValueConfig& config);

}  // namespace lrq
