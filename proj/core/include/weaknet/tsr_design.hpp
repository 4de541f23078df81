#pragma once

#include <map>
#include <vector>

#include "weaknet/structure.hpp"
#include "weaknet/topology.hpp"
#include "weaknet/types.hpp"

namespace weaknet {

/// Per-sub-network required cross mass: V = Q (I - T_RR). Column k lists, for
/// each sending sub-network, the total weight agent k's cross edges must carry
/// so that the limit of the receiving recursion lands on q_k. Q must be
/// column-stochastic within 1e-9 and non-negative.
[[nodiscard]] Matrix compute_v(const Matrix& q, const Matrix& t_rr);

struct AttainabilityTols {
  Scalar tol_zero = 1e-9;  // |v| below this counts as zero
  Scalar tol_pos = 1e-9;   // v below this fails a required-positive slot
};

enum class AttainKind {
  negative,                // required mass is negative
  zero_required_positive,  // connected sub-network ends up with no mass
  positive_required_zero,  // unconnected sub-network would need mass
};

[[nodiscard]] std::string to_string(AttainKind kind);

struct AttainabilityViolation {
  AgentId agent_id = 0;       // global id (local index + sending offset)
  Index receiving_index = 0;  // 1-based position among receiving agents
  SubnetId subnet_id = 0;
  AttainKind kind{};
  Scalar value = 0;
};

struct AttainabilityReport {
  bool attainable = false;
  std::vector<AttainabilityViolation> violations;  // exhaustive, row-major order
};

/// Entry-wise comparison of V against the connectivity indicator C: a target
/// is attainable exactly when every required mass is positive where an edge
/// exists and zero where none does. n_sending_agents only shifts the reported
/// global agent ids.
[[nodiscard]] AttainabilityReport check_attainable(const Matrix& v, const IntMatrix& c,
                                                   const AttainabilityTols& tols = {},
                                                   Index n_sending_agents = 0);

/// All cross-weight columns hitting one attainable target: t = base + P y,
/// where base spreads each sub-network's required mass evenly over the
/// connected agents and P centers y within each sub-network block. Every
/// member of the family satisfies the block sums exactly; instantiation
/// rejects y values that leave the non-negative region.
class ColumnSolutionFamily {
 public:
  ColumnSolutionFamily(AgentReduction reduction, Vector base);

  [[nodiscard]] const AgentReduction& reduction() const { return reduction_; }
  [[nodiscard]] const Vector& base() const { return base_; }
  [[nodiscard]] Index dimension() const { return base_.size(); }

  /// Zero-sum part of y within each sub-network block (the only part that
  /// moves the solution).
  [[nodiscard]] Vector project(const Vector& y) const;
  /// base + P y; throws domain_error when any entry would go negative beyond
  /// round-off. Entries may legitimately come out exactly zero.
  [[nodiscard]] Vector instantiate(const Vector& y) const;

 private:
  AgentReduction reduction_;
  Vector base_;
};

/// Family for one receiving agent k (global id). The column of V must be
/// attainable for k; otherwise this throws domain_error.
[[nodiscard]] ColumnSolutionFamily solution_family(const NetworkTopology& topology, AgentId k,
                                                   const Matrix& v,
                                                   const AttainabilityTols& tols = {});

/// Free-parameter choices for design_tsr: y vectors per global receiving
/// agent id, applied through the family projector. Missing agents use y = 0,
/// which spreads mass evenly.
struct TsrPolicy {
  std::map<AgentId, Vector> y;
};

struct TsrDesign {
  AttainabilityReport attainability;
  /// N_gS x N_gR; empty when the target is unattainable.
  Matrix t_sr;
};

/// Designs the full cross block for a target profile, one independent column
/// per receiving agent.
[[nodiscard]] TsrDesign design_tsr(const NetworkTopology& topology, const Matrix& q,
                                   const Matrix& t_rr, const TsrPolicy& policy = {},
                                   const AttainabilityTols& tols = {});

enum class UniformVerdict { all, none, partial };

[[nodiscard]] std::string to_string(UniformVerdict verdict);

struct UniformPrecheckEntry {
  AgentId agent_id = 0;
  UniformVerdict verdict{};
};

struct UniformPrecheckReport {
  std::vector<UniformPrecheckEntry> agents;
  /// Uniform targets need all-or-none connectivity for every receiving agent.
  bool uniform_compatible = false;
};

[[nodiscard]] UniformPrecheckReport uniform_precheck(const NetworkTopology& topology);

}  // namespace weaknet
