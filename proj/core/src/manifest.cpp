#include "weaknet/manifest.hpp"

#include <fstream>

#include "json.hpp"
#include "weaknet/types.hpp"

namespace weaknet {

std::string RunManifest::to_json() const {
  nlohmann::ordered_json root;
  root["command"] = command;
  root["version"] = version;
  root["inputs"] = inputs;
  nlohmann::ordered_json opts = nlohmann::ordered_json::object();
  for (const auto& [key, value] : options) {  // std::map: already sorted
    opts[key] = value;
  }
  root["options"] = std::move(opts);
  return root.dump(2) + "\n";
}

void RunManifest::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw input_error("cannot open '" + path + "' for writing");
  }
  out << to_json();
  if (!out) {
    throw input_error("failed while writing '" + path + "'");
  }
}

}  // namespace weaknet
