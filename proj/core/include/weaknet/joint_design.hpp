#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weaknet/qp.hpp"
#include "weaknet/structure.hpp"
#include "weaknet/topology.hpp"
#include "weaknet/types.hpp"

namespace weaknet {

/// How a receiving agent hears the sending side: every sub-network, a proper
/// non-empty subset, or none at all. The three cases need different designs.
enum class AgentCase { all_subnets, some_subnets, no_subnets };

[[nodiscard]] std::string to_string(AgentCase c);

[[nodiscard]] AgentCase classify_agent(const NetworkTopology& topology, AgentId k);

/// One receiving agent's column equation q = E t_SR + Q_nb t_RR restricted to
/// its in-neighborhood. Rows span all S sending sub-networks; unconnected
/// sub-networks appear as zero rows of e. Receiving in-neighbors include the
/// agent itself when it has a self-loop, and their columns of the target
/// profile enter as fixed data.
struct JointColumnProblem {
  AgentId agent_id = 0;
  Vector q;            // S
  Matrix e;            // S x n_sr
  Matrix q_neighbors;  // S x n_rr
  std::vector<AgentId> sending_ids;
  std::vector<AgentId> receiving_ids;
};

[[nodiscard]] JointColumnProblem build_joint_problem(const NetworkTopology& topology, AgentId k,
                                                     const Matrix& q);

/// Strict-positivity floor for receiving weights. Resolution order: explicit
/// per-agent value, explicit global value, then min(cap, bound/2) where the
/// bound is the largest admissible floor (defined in the all-sub-networks
/// case).
struct EpsilonPolicy {
  Scalar cap = 0.01;
  std::optional<Scalar> global;
  std::map<AgentId, Scalar> per_agent;

  [[nodiscard]] Scalar resolve(AgentId k, std::optional<Scalar> bound) const;
};

struct ConstraintReport {
  enum class Kind { equality, inequality, floor, bound };
  Kind kind{};
  SubnetId subnet_id = 0;  // state row for equality/inequality/bound
  Index var = -1;          // variable index for floor
  Scalar lhs = 0;
  Scalar rhs = 0;
};

[[nodiscard]] std::string to_string(ConstraintReport::Kind kind);

enum class DesignStatus { exact, approximate, infeasible };

[[nodiscard]] std::string to_string(DesignStatus status);

struct CaseDesign {
  DesignStatus status = DesignStatus::infeasible;
  Vector t_sr;  // n_sr, present unless infeasible
  Vector t_rr;  // n_rr, present unless infeasible
  Scalar residual = 0;
  Scalar epsilon = 0;
  std::optional<Scalar> epsilon_bound;       // all-sub-networks case only
  std::optional<Vector> equality_solution;   // square equality subsystem solution
  std::vector<ConstraintReport> violations;  // why the exact design failed
};

/// Heard by every sub-network: receiving weights sit at the floor and the
/// cross weights absorb the exact remainder. The floor must stay within
/// q_k(s) / sum_j q_{k(j)}(s) minimized over states, else no strictly
/// positive design exists.
[[nodiscard]] CaseDesign design_case1(const JointColumnProblem& problem,
                                      const EpsilonPolicy& policy = {});

/// Heard by a proper subset: the unheard states pin t_RR through equality
/// rows. A square subsystem is solved directly and checked against the
/// inequality and floor constraints; otherwise feasibility is decided by the
/// constrained least-squares solve. fallback_ls turns an infeasible verdict
/// into the best approximation instead.
[[nodiscard]] CaseDesign design_case2(const JointColumnProblem& problem,
                                      const EpsilonPolicy& policy = {}, bool fallback_ls = false);

/// Heard by nobody: the target must be a floor-respecting convex combination
/// of the neighbors' targets.
[[nodiscard]] CaseDesign design_case3(const JointColumnProblem& problem,
                                      const EpsilonPolicy& policy = {}, bool fallback_ls = false);

/// Constrained least squares on the full column system: min ||B t - q|| with
/// B = [E Q_nb], sum(t) = 1, cross weights >= 0, receiving weights >= epsilon.
/// Always produces the closest representable column when the polytope is
/// non-empty.
[[nodiscard]] CaseDesign solve_constrained_ls(const JointColumnProblem& problem, Scalar epsilon);

/// Hand-picked values overriding the per-column design: explicit receiving
/// weights (ordered like receiving_in_neighbors) and optionally explicit
/// cross weights (ordered like the reduction's sending agents). Overrides are
/// validated against the column equations.
struct JointOverrides {
  std::map<AgentId, Vector> t_rr;
  std::map<AgentId, Vector> t_sr;
};

struct JointPolicy {
  EpsilonPolicy epsilon;
  JointOverrides overrides;
  bool fallback_ls = false;
};

struct AgentDesignReport {
  AgentId agent_id = 0;
  AgentCase agent_case{};
  DesignStatus status = DesignStatus::infeasible;
  /// After the all-or-downgrade rule: an exact column inside an approximate
  /// overall design is only approximately honored, because the limit couples
  /// all columns.
  DesignStatus effective_status = DesignStatus::infeasible;
  Scalar residual = 0;
  Scalar epsilon = 0;
  std::optional<Scalar> epsilon_bound;
  std::optional<Vector> equality_solution;
  std::vector<ConstraintReport> violations;
  Scalar predicted_deviation = 0;  // max |predicted limit - target| for this agent
};

struct JointDesignResult {
  DesignStatus overall = DesignStatus::infeasible;
  Matrix t_sr;       // N_gS x N_gR when overall != infeasible
  Matrix t_rr;       // N_gR x N_gR when overall != infeasible
  Matrix predicted;  // S x N_gR limits implied by the designed pair
  std::vector<AgentDesignReport> per_agent;
  /// Every receiving agent stays reachable from the sending side through
  /// positive designed weights; this is the structural face of the
  /// strict-positivity requirement.
  bool in_path_preserved = false;
};

/// Designs [T_SR; T_RR] jointly for every receiving agent. Columns are
/// independent; the assembled pair is re-verified as a whole through its
/// implied limits.
[[nodiscard]] JointDesignResult joint_design(const NetworkTopology& topology, const Matrix& q,
                                             const JointPolicy& policy = {});

}  // namespace weaknet
