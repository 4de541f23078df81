#pragma once

#include <string>
#include <vector>

#include "weaknet/topology.hpp"
#include "weaknet/types.hpp"

namespace weaknet {

enum class ViolationCode {
  non_stochastic_column,      // column does not sum to 1 within tolerance
  negative_weight,            // entry below zero
  sparsity_mismatch,          // nonzero weight on a non-edge
  nonzero_lower_left,         // receiving-to-sending edge or weight
  sending_block_reducible,    // sending sub-network not strongly connected
  missing_positive_diagonal,  // sending sub-network has no positive self-weight
  receiving_block_disconnected,
};

enum class WarningCode {
  zero_weight_edge,  // declared edge carries weight 0
};

[[nodiscard]] std::string to_string(ViolationCode code);
[[nodiscard]] std::string to_string(WarningCode code);

struct Violation {
  ViolationCode code;
  std::string message;
  AgentId agent_id = 0;   // offending column / agent when applicable
  SubnetId subnet_id = 0;
  AgentId from_id = 0;    // offending edge when applicable
  AgentId to_id = 0;
};

struct ValidationWarning {
  WarningCode code;
  std::string message;
  AgentId from_id = 0;
  AgentId to_id = 0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<ValidationWarning> warnings;
  [[nodiscard]] bool valid() const { return violations.empty(); }
  [[nodiscard]] bool clean() const { return valid() && warnings.empty(); }
};

struct ValidationConfig {
  Scalar stochastic_tol = 1e-12;
};

/// Checks the weak-graph contract of (topology, A): column stochasticity,
/// sparsity agreement, the zero lower-left block, strong connectivity of each
/// sending sub-network (on the declared edges), one strictly positive
/// self-weight per sending sub-network, and connectivity of each receiving
/// sub-network through its own and incoming edges. Declared edges carrying
/// zero weight are reported as warnings, not violations. Shape mismatches are
/// hard input errors.
[[nodiscard]] ValidationReport validate_network(const NetworkTopology& topology, const Matrix& a,
                                                const ValidationConfig& config = {});

}  // namespace weaknet
