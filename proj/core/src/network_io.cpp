#include "weaknet/network_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace weaknet {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw input_error(origin + ": " + what);
}

Index require_positive_size(const json& node, const std::string& origin, const char* kind,
                            std::size_t position) {
  if (!node.is_object() || !node.contains("size") || !node["size"].is_number_integer()) {
    fail(origin, std::string(kind) + " sub-network " + std::to_string(position + 1) +
                     " needs an integer \"size\"");
  }
  const auto size = node["size"].get<long long>();
  if (size < 1) {
    fail(origin, std::string(kind) + " sub-network " + std::to_string(position + 1) +
                     " must have at least one agent");
  }
  return static_cast<Index>(size);
}

std::optional<StateId> optional_state(const json& node, const std::string& origin,
                                      std::size_t position) {
  if (!node.contains("true_state")) return std::nullopt;
  if (!node["true_state"].is_number_integer()) {
    fail(origin, "sub-network " + std::to_string(position + 1) +
                     " has a non-integer \"true_state\"");
  }
  const auto state = node["true_state"].get<long long>();
  if (state < 1) {
    fail(origin, "sub-network " + std::to_string(position + 1) +
                     " has a non-positive \"true_state\"");
  }
  return static_cast<StateId>(state);
}

AgentId parse_agent_id(const std::string& token, const std::string& origin,
                       const std::string& context) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(token, &used);
  } catch (const std::exception&) {
    fail(origin, "bad agent id '" + token + "' in " + context);
  }
  if (used != token.size() || value < 1) {
    fail(origin, "bad agent id '" + token + "' in " + context);
  }
  return value;
}

}  // namespace

StateSpace NetworkFile::state_space() const {
  std::optional<Index> count;
  if (num_states) count = static_cast<Index>(*num_states);
  return StateSpace::from_topology(topology, count, state_labels);
}

NetworkFile parse_network(const std::string& json_text, const std::string& origin) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& error) {
    fail(origin, std::string("not valid JSON (") + error.what() + ")");
  }
  if (!root.is_object()) {
    fail(origin, "top level must be a JSON object");
  }
  if (!root.contains("sending_subnets") || !root["sending_subnets"].is_array() ||
      root["sending_subnets"].empty()) {
    fail(origin, "\"sending_subnets\" must be a non-empty array");
  }
  if (root.contains("receiving_subnets") && !root["receiving_subnets"].is_array()) {
    fail(origin, "\"receiving_subnets\" must be an array");
  }

  std::vector<SubnetSpec> sending;
  for (std::size_t i = 0; i < root["sending_subnets"].size(); ++i) {
    const json& node = root["sending_subnets"][i];
    SubnetSpec spec;
    spec.size = require_positive_size(node, origin, "sending", i);
    spec.true_state = optional_state(node, origin, i);
    sending.push_back(spec);
  }
  std::vector<SubnetSpec> receiving;
  if (root.contains("receiving_subnets")) {
    for (std::size_t i = 0; i < root["receiving_subnets"].size(); ++i) {
      const json& node = root["receiving_subnets"][i];
      SubnetSpec spec;
      spec.size = require_positive_size(node, origin, "receiving", i);
      spec.true_state = optional_state(node, origin, sending.size() + i);
      receiving.push_back(spec);
    }
  }

  std::vector<Edge> edges;
  if (root.contains("edges")) {
    if (!root["edges"].is_array()) {
      fail(origin, "\"edges\" must be an array of [from, to] pairs");
    }
    for (const json& node : root["edges"]) {
      if (!node.is_array() || node.size() != 2 || !node[0].is_number_integer() ||
          !node[1].is_number_integer()) {
        fail(origin, "every edge must be an integer pair [from, to]");
      }
      edges.emplace_back(node[0].get<int>(), node[1].get<int>());
    }
  }

  NetworkFile file{NetworkTopology(std::move(sending), std::move(receiving), edges),
                   Matrix(), false, std::nullopt, {}};
  const Index n = file.topology.num_agents();
  file.weights = Matrix::Zero(n, n);

  if (root.contains("weights")) {
    if (!root["weights"].is_object()) {
      fail(origin, "\"weights\" must be an object keyed by \"from,to\"");
    }
    file.has_weights = true;
    for (const auto& [key, value] : root["weights"].items()) {
      const auto comma = key.find(',');
      if (comma == std::string::npos) {
        fail(origin, "weight key '" + key + "' is not of the form \"from,to\"");
      }
      const AgentId from = parse_agent_id(key.substr(0, comma), origin, "weight key '" + key + "'");
      const AgentId to = parse_agent_id(key.substr(comma + 1), origin, "weight key '" + key + "'");
      if (from > n || to > n) {
        fail(origin, "weight key '" + key + "' references an agent beyond " + std::to_string(n));
      }
      if (!value.is_number()) {
        fail(origin, "weight '" + key + "' must be a number");
      }
      file.weights(from - 1, to - 1) = value.get<Scalar>();
    }
  }

  if (root.contains("num_states")) {
    if (!root["num_states"].is_number_integer() || root["num_states"].get<long long>() < 1) {
      fail(origin, "\"num_states\" must be a positive integer");
    }
    file.num_states = root["num_states"].get<int>();
  }
  if (root.contains("state_labels")) {
    if (!root["state_labels"].is_array()) {
      fail(origin, "\"state_labels\" must be an array of strings");
    }
    for (const json& node : root["state_labels"]) {
      if (!node.is_string()) {
        fail(origin, "\"state_labels\" must be an array of strings");
      }
      file.state_labels.push_back(node.get<std::string>());
    }
  }
  return file;
}

NetworkFile load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw input_error("cannot open '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_network(text.str(), path);
}

std::string network_to_json(const NetworkTopology& topology, const Matrix& weights,
                            std::optional<int> num_states) {
  json root;
  root["sending_subnets"] = json::array();
  root["receiving_subnets"] = json::array();
  for (SubnetId s = 1; s <= topology.num_subnets(); ++s) {
    json node;
    node["size"] = topology.subnet_size(s);
    if (const auto state = topology.true_state(s)) {
      node["true_state"] = *state;
    }
    root[topology.is_sending_subnet(s) ? "sending_subnets" : "receiving_subnets"].push_back(node);
  }
  root["edges"] = json::array();
  for (const Edge& edge : topology.edges()) {
    root["edges"].push_back({edge.first, edge.second});
  }
  if (weights.size() != 0) {
    if (weights.rows() != topology.num_agents() || weights.cols() != topology.num_agents()) {
      throw input_error("weight matrix shape does not match the topology");
    }
    json table = json::object();
    for (const Edge& edge : topology.edges()) {
      table[std::to_string(edge.first) + "," + std::to_string(edge.second)] =
          weights(edge.first - 1, edge.second - 1);
    }
    root["weights"] = std::move(table);
  }
  if (num_states) {
    root["num_states"] = *num_states;
  }
  return root.dump(2) + "\n";
}

void save_network(const std::string& path, const NetworkTopology& topology, const Matrix& weights,
                  std::optional<int> num_states) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw input_error("cannot open '" + path + "' for writing");
  }
  out << network_to_json(topology, weights, num_states);
  if (!out) {
    throw input_error("failed while writing '" + path + "'");
  }
}

}  // namespace weaknet
