#include "weaknet/validation.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <sstream>

namespace weaknet {

namespace {

std::string agent_list(const NetworkTopology& topology, SubnetId s) {
  std::ostringstream out;
  out << "sub-network " << s << " (agents " << topology.agent_global_id(s, 1) << ".."
      << topology.agent_global_id(s, topology.subnet_size(s)) << ")";
  return out.str();
}

/// Forward/backward reachability of the first member inside one sub-network.
bool strongly_connected(const NetworkTopology& topology, SubnetId s) {
  const Index size = topology.subnet_size(s);
  const Index base = topology.agent_global_id(s, 1) - 1;
  const BoolMatrix& adj = topology.adjacency();
  auto reach = [&](bool forward) {
    std::vector<bool> seen(size, false);
    std::deque<Index> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop_front();
      for (Index v = 0; v < size; ++v) {
        const bool edge = forward ? adj(base + u, base + v) : adj(base + v, base + u);
        if (edge && !seen[v]) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
    for (bool b : seen) {
      if (!b) return false;
    }
    return true;
  };
  return reach(true) && reach(false);
}

/// Union-find over the members of a receiving sub-network, merging through
/// internal edges (either direction) and through shared outside sources.
bool receiving_connected(const NetworkTopology& topology, SubnetId s) {
  const Index size = topology.subnet_size(s);
  if (size <= 1) return true;
  const Index base = topology.agent_global_id(s, 1) - 1;
  std::vector<Index> parent(size);
  for (Index i = 0; i < size; ++i) parent[i] = i;
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](Index a, Index b) { parent[find(a)] = find(b); };

  const BoolMatrix& adj = topology.adjacency();
  for (Index i = 0; i < size; ++i) {
    for (Index j = 0; j < size; ++j) {
      if (i != j && adj(base + i, base + j)) unite(i, j);
    }
  }
  std::map<Index, Index> source_anchor;  // outside agent -> first member it feeds
  for (Index i = 0; i < size; ++i) {
    for (Index l = 0; l < topology.num_agents(); ++l) {
      if (l >= base && l < base + size) continue;
      if (adj(l, base + i)) {
        auto [it, fresh] = source_anchor.emplace(l, i);
        if (!fresh) unite(i, it->second);
      }
    }
  }
  const Index root = find(0);
  for (Index i = 1; i < size; ++i) {
    if (find(i) != root) return false;
  }
  return true;
}

}  // namespace

std::string to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::non_stochastic_column: return "non-stochastic-column";
    case ViolationCode::negative_weight: return "negative-weight";
    case ViolationCode::sparsity_mismatch: return "sparsity-mismatch";
    case ViolationCode::nonzero_lower_left: return "nonzero-lower-left";
    case ViolationCode::sending_block_reducible: return "sending-block-reducible";
    case ViolationCode::missing_positive_diagonal: return "missing-positive-diagonal";
    case ViolationCode::receiving_block_disconnected: return "receiving-block-disconnected";
  }
  return "unknown";
}

std::string to_string(WarningCode code) {
  switch (code) {
    case WarningCode::zero_weight_edge: return "zero-weight-edge";
  }
  return "unknown";
}

ValidationReport validate_network(const NetworkTopology& topology, const Matrix& a,
                                  const ValidationConfig& config) {
  const Index n = topology.num_agents();
  if (a.rows() != n || a.cols() != n) {
    throw input_error("combination matrix is " + std::to_string(a.rows()) + "x" +
                      std::to_string(a.cols()) + " but the topology has " + std::to_string(n) +
                      " agents");
  }

  ValidationReport report;
  const Index n_gs = topology.num_sending_agents();
  const BoolMatrix& adj = topology.adjacency();

  for (Index k = 0; k < n; ++k) {
    const Scalar sum = a.col(k).sum();
    if (std::abs(sum - 1.0) > config.stochastic_tol) {
      std::ostringstream msg;
      msg << "column of agent " << (k + 1) << " sums to " << sum;
      report.violations.push_back({ViolationCode::non_stochastic_column, msg.str(),
                                   static_cast<AgentId>(k + 1)});
    }
  }

  for (Index l = 0; l < n; ++l) {
    for (Index k = 0; k < n; ++k) {
      const Scalar w = a(l, k);
      const AgentId from = static_cast<AgentId>(l + 1);
      const AgentId to = static_cast<AgentId>(k + 1);
      const bool lower_left = l >= n_gs && k < n_gs;
      if (lower_left) {
        if (adj(l, k) || w != 0.0) {
          std::ostringstream msg;
          msg << (adj(l, k) ? "edge" : "weight") << " from receiving agent " << from
              << " to sending agent " << to;
          report.violations.push_back(
              {ViolationCode::nonzero_lower_left, msg.str(), to, 0, from, to});
        }
        continue;
      }
      if (w < 0.0) {
        std::ostringstream msg;
        msg << "weight " << w << " on (" << from << ", " << to << ") is negative";
        report.violations.push_back({ViolationCode::negative_weight, msg.str(), to, 0, from, to});
      }
      if (w != 0.0 && !adj(l, k)) {
        std::ostringstream msg;
        msg << "weight " << w << " on undeclared edge (" << from << ", " << to << ")";
        report.violations.push_back({ViolationCode::sparsity_mismatch, msg.str(), to, 0, from, to});
      }
      if (w == 0.0 && adj(l, k)) {
        std::ostringstream msg;
        msg << "declared edge (" << from << ", " << to << ") carries zero weight";
        report.warnings.push_back({WarningCode::zero_weight_edge, msg.str(), from, to});
      }
    }
  }

  for (SubnetId s = 1; s <= topology.num_sending_subnets(); ++s) {
    if (!strongly_connected(topology, s)) {
      report.violations.push_back({ViolationCode::sending_block_reducible,
                                   agent_list(topology, s) + " is not strongly connected", 0, s});
    }
    bool positive_diagonal = false;
    for (Index m = 1; m <= topology.subnet_size(s); ++m) {
      const Index k = topology.agent_global_id(s, m) - 1;
      if (a(k, k) > 0.0) {
        positive_diagonal = true;
        break;
      }
    }
    if (!positive_diagonal) {
      report.violations.push_back({ViolationCode::missing_positive_diagonal,
                                   agent_list(topology, s) + " has no positive self-weight", 0, s});
    }
  }

  for (SubnetId s = topology.num_sending_subnets() + 1; s <= topology.num_subnets(); ++s) {
    if (!receiving_connected(topology, s)) {
      report.violations.push_back({ViolationCode::receiving_block_disconnected,
                                   agent_list(topology, s) + " is not connected", 0, s});
    }
  }

  return report;
}

}  // namespace weaknet
