#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weaknet/types.hpp"

namespace weaknet {

/// Key/value configuration loaded from a TOML-style file. Supported syntax:
/// `key = value` lines, `[section]` headers (keys become "section.key"),
/// `#` comments, blank lines; values are numbers, booleans, or quoted
/// strings. This is a deliberate subset — just enough to override tool
/// defaults from a file; flags always win over file values.
class ConfigMap {
 public:
  ConfigMap() = default;

  static ConfigMap parse(const std::string& text, const std::string& origin);
  static ConfigMap load(const std::string& path);

  [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) > 0; }
  [[nodiscard]] std::optional<std::string> get_string(const std::string& key) const;
  [[nodiscard]] std::optional<Scalar> get_scalar(const std::string& key) const;
  [[nodiscard]] std::optional<long long> get_int(const std::string& key) const;
  [[nodiscard]] std::optional<bool> get_bool(const std::string& key) const;

  /// Keys in sorted order (stable manifests).
  [[nodiscard]] std::vector<std::string> keys() const;

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace weaknet
