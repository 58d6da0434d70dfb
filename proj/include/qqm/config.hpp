#pragma once

// Flat "key = value" configuration text. '#' starts a comment; blank lines
// are ignored; duplicate keys are an error.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qqm {

class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(const std::string& text, const std::string& source = "<string>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  /// Directory relative paths in values resolve against.
  const std::filesystem::path& base_dir() const noexcept { return base_dir_; }
  void set_base_dir(std::filesystem::path dir) { base_dir_ = std::move(dir); }

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }

  std::string string(const std::string& key) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  long long integer(const std::string& key) const;
  long long integer(const std::string& key, long long fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::optional<std::string> optional(const std::string& key) const;

  std::filesystem::path path(const std::string& key) const;

  /// Throws ConfigError listing every key not in `allowed`.
  void reject_unknown(const std::set<std::string>& allowed) const;

 private:
  std::map<std::string, std::string> entries_;
  std::filesystem::path base_dir_ = ".";
  std::string source_ = "<string>";
};

}  // namespace qqm
