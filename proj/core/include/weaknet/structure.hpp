#pragma once

#include <vector>

#include "weaknet/topology.hpp"
#include "weaknet/types.hpp"

namespace weaknet {

/// S x N_gS block indicator: row s is 1 exactly on the agents of sending
/// sub-network s. Multiplying a sending-indexed column by E sums it per
/// sub-network.
[[nodiscard]] Matrix build_e(const NetworkTopology& topology);

/// S x N_gR connectivity indicator: C(s, k) = 1 when receiving agent k has an
/// edge from at least one agent of sending sub-network s. A fully isolated
/// receiving agent yields a zero column.
[[nodiscard]] IntMatrix build_c(const NetworkTopology& topology);

/// Column problem of one receiving agent, reduced to the sending agents that
/// actually influence it. Retained sending agents and sub-networks keep their
/// global order, so reduced vectors scatter back deterministically.
struct AgentReduction {
  AgentId agent_id = 0;
  /// S' x N_gS^k block indicator over the retained sending agents.
  Matrix e;
  /// Global ids of the retained sending agents, ascending.
  std::vector<AgentId> sending_ids;
  /// Sub-networks with at least one retained agent, ascending.
  std::vector<SubnetId> subnet_ids;
  /// N_s^k: retained agents per retained sub-network.
  std::vector<Index> counts;
};

/// Drops the sending agents (and then the sub-networks) with no edge into
/// receiving agent k. The reduction can be empty when k hears no sender.
[[nodiscard]] AgentReduction reduce_for_agent(const NetworkTopology& topology, AgentId k);

/// Receiving in-neighbors of receiving agent k (global ids, ascending,
/// including k itself when it has a self-loop).
[[nodiscard]] std::vector<AgentId> receiving_in_neighbors(const NetworkTopology& topology,
                                                          AgentId k);

}  // namespace weaknet
