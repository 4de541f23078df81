#pragma once

#include <map>
#include <string>
#include <vector>

namespace weaknet {

/// Everything needed to reproduce one tool invocation byte-for-byte: the
/// command, its input files, and every resolved option (tolerances, policies,
/// seed). Deliberately contains no timestamps or host details — identical
/// runs produce identical manifests.
struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::map<std::string, std::string> options;  // resolved values, as strings
  std::string version;

  [[nodiscard]] std::string to_json() const;
  void write(const std::string& path) const;
};

}  // namespace weaknet
