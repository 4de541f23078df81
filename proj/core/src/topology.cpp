#include "weaknet/topology.hpp"

#include <algorithm>

namespace weaknet {

namespace {

Index checked_total(const std::vector<SubnetSpec>& subnets, const char* kind) {
  Index total = 0;
  for (const auto& sn : subnets) {
    if (sn.size <= 0) {
      throw input_error(std::string(kind) + " sub-network must have at least one agent");
    }
    if (sn.true_state && *sn.true_state < 1) {
      throw input_error("true state ids are 1-based");
    }
    total += sn.size;
  }
  return total;
}

}  // namespace

NetworkTopology::NetworkTopology(std::vector<SubnetSpec> sending,
                                 std::vector<SubnetSpec> receiving,
                                 const std::vector<Edge>& edges)
    : sending_(std::move(sending)), receiving_(std::move(receiving)) {
  if (sending_.empty()) {
    throw input_error("at least one sending sub-network is required");
  }
  n_sending_ = checked_total(sending_, "sending");
  n_receiving_ = checked_total(receiving_, "receiving");

  subnet_offset_.reserve(sending_.size() + receiving_.size());
  Index offset = 0;
  for (const auto& sn : sending_) {
    subnet_offset_.push_back(offset);
    offset += sn.size;
  }
  for (const auto& sn : receiving_) {
    subnet_offset_.push_back(offset);
    offset += sn.size;
  }

  const Index n = num_agents();
  adjacency_ = BoolMatrix::Constant(n, n, false);
  edges_.reserve(edges.size());
  for (const auto& [from, to] : edges) {
    if (from < 1 || from > n || to < 1 || to > n) {
      throw input_error("edge (" + std::to_string(from) + ", " + std::to_string(to) +
                        ") references an unknown agent");
    }
    if (!adjacency_(from - 1, to - 1)) {
      adjacency_(from - 1, to - 1) = true;
      edges_.emplace_back(from, to);
    }
  }
  std::sort(edges_.begin(), edges_.end());
}

bool NetworkTopology::is_sending_subnet(SubnetId s) const {
  if (s < 1 || s > num_subnets()) {
    throw input_error("sub-network id " + std::to_string(s) + " out of range");
  }
  return s <= num_sending_subnets();
}

bool NetworkTopology::is_sending_agent(AgentId k) const {
  if (k < 1 || k > num_agents()) {
    throw input_error("agent id " + std::to_string(k) + " out of range");
  }
  return k <= n_sending_;
}

Index NetworkTopology::subnet_size(SubnetId s) const {
  return is_sending_subnet(s) ? sending_[s - 1].size
                              : receiving_[s - 1 - num_sending_subnets()].size;
}

std::optional<StateId> NetworkTopology::true_state(SubnetId s) const {
  return is_sending_subnet(s) ? sending_[s - 1].true_state
                              : receiving_[s - 1 - num_sending_subnets()].true_state;
}

AgentId NetworkTopology::agent_global_id(SubnetId s, Index n) const {
  if (n < 1 || n > subnet_size(s)) {
    throw input_error("local index " + std::to_string(n) + " out of range for sub-network " +
                      std::to_string(s));
  }
  return static_cast<AgentId>(subnet_offset_[s - 1] + n);
}

SubnetId NetworkTopology::subnet_of(AgentId k) const {
  if (k < 1 || k > num_agents()) {
    throw input_error("agent id " + std::to_string(k) + " out of range");
  }
  const Index pos = k - 1;
  for (std::size_t i = subnet_offset_.size(); i-- > 0;) {
    if (pos >= subnet_offset_[i]) {
      return static_cast<SubnetId>(i + 1);
    }
  }
  throw input_error("agent id " + std::to_string(k) + " out of range");
}

Index NetworkTopology::local_index(AgentId k) const {
  const SubnetId s = subnet_of(k);
  return k - subnet_offset_[s - 1];
}

bool NetworkTopology::has_edge(AgentId from, AgentId to) const {
  if (from < 1 || from > num_agents() || to < 1 || to > num_agents()) {
    throw input_error("edge endpoint out of range");
  }
  return adjacency_(from - 1, to - 1);
}

std::vector<AgentId> NetworkTopology::in_neighbors(AgentId k) const {
  if (k < 1 || k > num_agents()) {
    throw input_error("agent id " + std::to_string(k) + " out of range");
  }
  std::vector<AgentId> result;
  for (Index l = 0; l < num_agents(); ++l) {
    if (adjacency_(l, k - 1)) {
      result.push_back(static_cast<AgentId>(l + 1));
    }
  }
  return result;
}

CombinationMatrix::CombinationMatrix(Matrix entries, Index num_sending)
    : entries_(std::move(entries)), n_gs_(num_sending) {
  if (entries_.rows() != entries_.cols()) {
    throw input_error("combination matrix must be square");
  }
  if (n_gs_ < 1 || n_gs_ > entries_.rows()) {
    throw input_error("sending block size out of range");
  }
}

}  // namespace weaknet
