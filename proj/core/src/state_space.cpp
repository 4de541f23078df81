#include "weaknet/state_space.hpp"

#include <algorithm>
#include <set>

namespace weaknet {

StateSpace::StateSpace(Index num_states, std::vector<std::string> labels) {
  if (num_states < 1) {
    throw input_error("state space must contain at least one state");
  }
  if (!labels.empty() && static_cast<Index>(labels.size()) != num_states) {
    throw input_error("state label count does not match state count");
  }
  if (labels.empty()) {
    labels_.reserve(num_states);
    for (Index i = 1; i <= num_states; ++i) {
      labels_.push_back("theta" + std::to_string(i));
    }
  } else {
    labels_ = std::move(labels);
  }
}

StateSpace StateSpace::from_topology(const NetworkTopology& topology,
                                     std::optional<Index> num_states,
                                     std::vector<std::string> labels) {
  StateId max_state = 0;
  std::vector<StateId> sending;
  sending.reserve(topology.num_sending_subnets());
  for (SubnetId s = 1; s <= topology.num_subnets(); ++s) {
    const auto state = topology.true_state(s);
    if (state) {
      max_state = std::max(max_state, *state);
    }
    if (topology.is_sending_subnet(s)) {
      if (!state) {
        throw input_error("sending sub-network " + std::to_string(s) + " has no true state");
      }
      sending.push_back(*state);
    }
  }
  std::set<StateId> distinct(sending.begin(), sending.end());
  if (distinct.size() != sending.size()) {
    throw input_error("sending sub-networks must observe pairwise distinct states");
  }
  const Index count = num_states.value_or(static_cast<Index>(max_state));
  if (count < max_state) {
    throw input_error("state count smaller than a referenced true state");
  }
  StateSpace space(count, std::move(labels));
  space.sending_true_ = std::move(sending);
  return space;
}

const std::string& StateSpace::label(StateId state) const {
  if (state < 1 || state > num_states()) {
    throw input_error("state id " + std::to_string(state) + " out of range");
  }
  return labels_[state - 1];
}

StateId StateSpace::sending_true_state(SubnetId s) const {
  if (s < 1 || s > num_sending_subnets()) {
    throw input_error("sending sub-network id " + std::to_string(s) + " out of range");
  }
  return sending_true_[s - 1];
}

}  // namespace weaknet
