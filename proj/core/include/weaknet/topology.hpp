#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "weaknet/types.hpp"

namespace weaknet {

/// One sub-network: its agent count and, when known, the state it observes.
/// Sending sub-networks must carry a true state before limits can be computed;
/// receiving sub-networks only need one to run simulations.
struct SubnetSpec {
  Index size = 0;
  std::optional<StateId> true_state;
};

/// Directed edge between global 1-based agent ids: from influences to.
using Edge = std::pair<AgentId, AgentId>;

/// Partitioned directed graph: S sending sub-networks followed by R receiving
/// sub-networks. Agents are numbered globally, sending agents first, in
/// sub-network order. Construction checks shapes and ranges only; semantic
/// requirements (strong connectivity, no receiving-to-sending edges, ...) are
/// the job of validate_network so that they can be reported, not thrown.
class NetworkTopology {
 public:
  NetworkTopology(std::vector<SubnetSpec> sending,
                  std::vector<SubnetSpec> receiving,
                  const std::vector<Edge>& edges);

  [[nodiscard]] int num_sending_subnets() const { return static_cast<int>(sending_.size()); }
  [[nodiscard]] int num_receiving_subnets() const { return static_cast<int>(receiving_.size()); }
  [[nodiscard]] int num_subnets() const { return num_sending_subnets() + num_receiving_subnets(); }

  [[nodiscard]] Index num_sending_agents() const { return n_sending_; }
  [[nodiscard]] Index num_receiving_agents() const { return n_receiving_; }
  [[nodiscard]] Index num_agents() const { return n_sending_ + n_receiving_; }

  [[nodiscard]] bool is_sending_subnet(SubnetId s) const;
  [[nodiscard]] bool is_sending_agent(AgentId k) const;

  /// Sub-network size; s is 1-based over sending then receiving.
  [[nodiscard]] Index subnet_size(SubnetId s) const;
  [[nodiscard]] std::optional<StateId> true_state(SubnetId s) const;

  /// Global 1-based id of the n-th agent (n 1-based) of sub-network s.
  /// Out-of-range (s, n) is a hard input error.
  [[nodiscard]] AgentId agent_global_id(SubnetId s, Index n) const;
  [[nodiscard]] SubnetId subnet_of(AgentId k) const;
  /// 1-based position of agent k inside its own sub-network.
  [[nodiscard]] Index local_index(AgentId k) const;

  [[nodiscard]] bool has_edge(AgentId from, AgentId to) const;
  /// adjacency()(l, k) is true when agent l+1 influences agent k+1.
  [[nodiscard]] const BoolMatrix& adjacency() const { return adjacency_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }

  /// Global ids of agents influencing k, ascending.
  [[nodiscard]] std::vector<AgentId> in_neighbors(AgentId k) const;

 private:
  std::vector<SubnetSpec> sending_;
  std::vector<SubnetSpec> receiving_;
  std::vector<Index> subnet_offset_;  // global 0-based start per subnet
  Index n_sending_ = 0;
  Index n_receiving_ = 0;
  BoolMatrix adjacency_;
  std::vector<Edge> edges_;
};

/// Left-stochastic combination matrix with the weak-graph block layout
/// [T_SS T_SR; 0 T_RR]. The wrapper only fixes the split point; whether the
/// entries actually honor stochasticity and the zero block is reported by
/// validate_network.
class CombinationMatrix {
 public:
  CombinationMatrix(Matrix entries, Index num_sending);

  [[nodiscard]] const Matrix& full() const { return entries_; }
  [[nodiscard]] Index num_sending() const { return n_gs_; }
  [[nodiscard]] Index num_receiving() const { return entries_.rows() - n_gs_; }

  [[nodiscard]] auto t_ss() const { return entries_.topLeftCorner(n_gs_, n_gs_); }
  [[nodiscard]] auto t_sr() const { return entries_.topRightCorner(n_gs_, num_receiving()); }
  [[nodiscard]] auto t_rr() const { return entries_.bottomRightCorner(num_receiving(), num_receiving()); }
  [[nodiscard]] auto lower_left() const { return entries_.bottomLeftCorner(num_receiving(), n_gs_); }

 private:
  Matrix entries_;
  Index n_gs_ = 0;
};

}  // namespace weaknet
