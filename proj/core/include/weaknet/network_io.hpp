#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weaknet/state_space.hpp"
#include "weaknet/topology.hpp"
#include "weaknet/types.hpp"

namespace weaknet {

/// A network description file, decoded but not yet judged: weights are kept
/// exactly as given (including invalid ones) so that validation can report on
/// them.
struct NetworkFile {
  NetworkTopology topology;
  /// N x N combination weights, (from, to) entry = weight agent `to` places
  /// on data from agent `from`. Zero matrix when the file omits weights.
  Matrix weights;
  bool has_weights = false;
  /// Number of states if declared; otherwise the largest referenced state.
  std::optional<int> num_states;
  std::vector<std::string> state_labels;  // optional, aligned with state IDs

  [[nodiscard]] StateSpace state_space() const;
};

/// Decodes the JSON network format:
///   {
///     "sending_subnets":   [{"size": int, "true_state": int}, ...],
///     "receiving_subnets": [{"size": int, "true_state": int?}, ...],
///     "edges":             [[from, to], ...],            // 1-based agent IDs
///     "weights":           {"from,to": float, ...},      // optional
///     "num_states":        int,                          // optional
///     "state_labels":      ["...", ...]                  // optional
///   }
/// Structural nonsense (bad JSON, missing keys, IDs out of range) raises
/// input_error; questionable weights are loaded verbatim for validation.
[[nodiscard]] NetworkFile parse_network(const std::string& json_text, const std::string& origin);

[[nodiscard]] NetworkFile load_network(const std::string& path);

/// Inverse of parse_network, used to persist generated networks. Weights are
/// emitted for every edge when `weights` is non-empty.
[[nodiscard]] std::string network_to_json(const NetworkTopology& topology, const Matrix& weights,
                                          std::optional<int> num_states = std::nullopt);

void save_network(const std::string& path, const NetworkTopology& topology, const Matrix& weights,
                  std::optional<int> num_states = std::nullopt);

}  // namespace weaknet
