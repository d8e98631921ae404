#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace honeyclf {

/// Flat `key = value` text config. `#` starts a comment; blank lines ignored.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in, const std::string& source = "<stream>");
  static KeyValueConfig load(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  const std::map<std::string, std::string>& entries() const { return entries_; }
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }

  /// Keys present in the file that are not in `known`.
  std::vector<std::string> unknown_keys(const std::vector<std::string>& known) const;

 private:
  std::map<std::string, std::string> entries_;
};

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split_list(std::string_view s, char sep = ',');

}  // namespace honeyclf
