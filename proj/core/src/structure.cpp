#include "weaknet/structure.hpp"

#include <algorithm>

namespace weaknet {

Matrix build_e(const NetworkTopology& topology) {
  const int s_count = topology.num_sending_subnets();
  Matrix e = Matrix::Zero(s_count, topology.num_sending_agents());
  for (SubnetId s = 1; s <= s_count; ++s) {
    for (Index n = 1; n <= topology.subnet_size(s); ++n) {
      e(s - 1, topology.agent_global_id(s, n) - 1) = 1.0;
    }
  }
  return e;
}

IntMatrix build_c(const NetworkTopology& topology) {
  const int s_count = topology.num_sending_subnets();
  const Index n_gs = topology.num_sending_agents();
  const Index n_gr = topology.num_receiving_agents();
  IntMatrix c = IntMatrix::Zero(s_count, n_gr);
  const BoolMatrix& adj = topology.adjacency();
  for (Index k = 0; k < n_gr; ++k) {
    for (Index l = 0; l < n_gs; ++l) {
      if (adj(l, n_gs + k)) {
        c(topology.subnet_of(static_cast<AgentId>(l + 1)) - 1, k) = 1;
      }
    }
  }
  return c;
}

AgentReduction reduce_for_agent(const NetworkTopology& topology, AgentId k) {
  if (topology.is_sending_agent(k)) {
    throw input_error("agent " + std::to_string(k) + " is not a receiving agent");
  }
  AgentReduction red;
  red.agent_id = k;
  const Index n_gs = topology.num_sending_agents();
  for (Index l = 1; l <= n_gs; ++l) {
    if (topology.has_edge(static_cast<AgentId>(l), k)) {
      red.sending_ids.push_back(static_cast<AgentId>(l));
    }
  }
  for (AgentId id : red.sending_ids) {
    const SubnetId s = topology.subnet_of(id);
    if (red.subnet_ids.empty() || red.subnet_ids.back() != s) {
      red.subnet_ids.push_back(s);
      red.counts.push_back(0);
    }
    ++red.counts.back();
  }
  red.e = Matrix::Zero(static_cast<Index>(red.subnet_ids.size()),
                       static_cast<Index>(red.sending_ids.size()));
  for (std::size_t j = 0; j < red.sending_ids.size(); ++j) {
    const SubnetId s = topology.subnet_of(red.sending_ids[j]);
    const auto row = std::find(red.subnet_ids.begin(), red.subnet_ids.end(), s);
    red.e(row - red.subnet_ids.begin(), static_cast<Index>(j)) = 1.0;
  }
  return red;
}

std::vector<AgentId> receiving_in_neighbors(const NetworkTopology& topology, AgentId k) {
  if (topology.is_sending_agent(k)) {
    throw input_error("agent " + std::to_string(k) + " is not a receiving agent");
  }
  std::vector<AgentId> result;
  for (Index l = topology.num_sending_agents(); l < topology.num_agents(); ++l) {
    if (topology.has_edge(static_cast<AgentId>(l + 1), k)) {
      result.push_back(static_cast<AgentId>(l + 1));
    }
  }
  return result;
}

}  // namespace weaknet
