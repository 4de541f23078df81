#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weaknet/topology.hpp"
#include "weaknet/types.hpp"

namespace weaknet {

/// Ordered hypothesis set plus the map from sending sub-networks to the states
/// they observe. Sending true states must be present and pairwise distinct;
/// the interesting states (those actually observed by a sending sub-network)
/// are a subset of the full list.
class StateSpace {
 public:
  /// Labels default to theta1..thetaK.
  explicit StateSpace(Index num_states, std::vector<std::string> labels = {});

  /// Pulls the sending true states out of the topology. num_states defaults
  /// to the largest true state referenced by any sub-network; labels default
  /// as in the constructor.
  static StateSpace from_topology(const NetworkTopology& topology,
                                  std::optional<Index> num_states = {},
                                  std::vector<std::string> labels = {});

  [[nodiscard]] Index num_states() const { return static_cast<Index>(labels_.size()); }
  [[nodiscard]] const std::string& label(StateId state) const;
  [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }

  /// theta-circle of sending sub-network s (1-based state id).
  [[nodiscard]] StateId sending_true_state(SubnetId s) const;
  [[nodiscard]] const std::vector<StateId>& sending_true_states() const { return sending_true_; }
  [[nodiscard]] int num_sending_subnets() const { return static_cast<int>(sending_true_.size()); }

 private:
  std::vector<std::string> labels_;
  std::vector<StateId> sending_true_;
};

}  // namespace weaknet
