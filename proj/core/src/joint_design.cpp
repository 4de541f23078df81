#include "weaknet/joint_design.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "weaknet/limits.hpp"

namespace weaknet {

namespace {

constexpr Scalar k_exact_tol = 1e-10;
constexpr Scalar k_eq_tol = 1e-9;

std::vector<Index> connected_rows(const JointColumnProblem& problem) {
  std::vector<Index> rows;
  for (Index s = 0; s < problem.e.rows(); ++s) {
    if (problem.e.cols() > 0 && problem.e.row(s).sum() > 0.0) {
      rows.push_back(s);
    }
  }
  return rows;
}

std::vector<Index> complement_rows(const JointColumnProblem& problem,
                                   const std::vector<Index>& rows) {
  std::vector<Index> out;
  for (Index s = 0; s < problem.e.rows(); ++s) {
    if (!std::binary_search(rows.begin(), rows.end(), s)) {
      out.push_back(s);
    }
  }
  return out;
}

/// Even within-sub-network split of the required masses v; only block sums
/// enter the column equation, so this canonical choice never changes the
/// residual.
Vector split_cross_weights(const JointColumnProblem& problem, const Vector& v) {
  Vector t_sr = Vector::Zero(problem.e.cols());
  for (Index s = 0; s < problem.e.rows(); ++s) {
    const Scalar count = problem.e.cols() > 0 ? problem.e.row(s).sum() : 0.0;
    if (count <= 0.0) continue;
    const Scalar share = std::max(v(s), 0.0) / count;
    for (Index j = 0; j < problem.e.cols(); ++j) {
      if (problem.e(s, j) > 0.0) t_sr(j) = share;
    }
  }
  return t_sr;
}

Scalar column_residual(const JointColumnProblem& problem, const Vector& t_sr,
                       const Vector& t_rr) {
  Vector achieved = Vector::Zero(problem.q.size());
  if (t_sr.size() > 0) achieved += problem.e * t_sr;
  if (t_rr.size() > 0) achieved += problem.q_neighbors * t_rr;
  return (achieved - problem.q).norm();
}

/// Rows the canonical column still misses, worst offenders included, reported
/// as equality rows (unheard sub-networks) or inequality rows (heard ones).
void report_row_misses(const JointColumnProblem& problem, const Vector& t_sr, const Vector& t_rr,
                       const std::vector<Index>& unheard, CaseDesign& design) {
  Vector achieved = Vector::Zero(problem.q.size());
  if (t_sr.size() > 0) achieved += problem.e * t_sr;
  if (t_rr.size() > 0) achieved += problem.q_neighbors * t_rr;
  for (Index s = 0; s < problem.q.size(); ++s) {
    if (std::abs(achieved(s) - problem.q(s)) <= k_eq_tol) continue;
    const bool is_equality = std::binary_search(unheard.begin(), unheard.end(), s);
    design.violations.push_back({is_equality ? ConstraintReport::Kind::equality
                                             : ConstraintReport::Kind::inequality,
                                 static_cast<SubnetId>(s + 1), -1, achieved(s), problem.q(s)});
  }
}

/// Runs the constrained least-squares solve and canonicalizes the cross part.
CaseDesign run_ls(const JointColumnProblem& problem, Scalar epsilon) {
  const Index n_sr = problem.e.cols();
  const Index n_rr = problem.q_neighbors.cols();
  Matrix b(problem.q.size(), n_sr + n_rr);
  if (n_sr > 0) b.leftCols(n_sr) = problem.e;
  if (n_rr > 0) b.rightCols(n_rr) = problem.q_neighbors;
  Vector lb = Vector::Zero(n_sr + n_rr);
  lb.tail(n_rr).setConstant(epsilon);

  CaseDesign design;
  design.epsilon = epsilon;
  const LsqResult ls = solve_simplex_lsq(b, problem.q, lb);
  if (!ls.feasible) {
    design.status = DesignStatus::infeasible;
    design.violations.push_back({ConstraintReport::Kind::floor, 0, -1, lb.sum(), 1.0});
    return design;
  }
  design.t_rr = ls.x.tail(n_rr);
  Vector v = problem.q;
  if (n_rr > 0) v -= problem.q_neighbors * design.t_rr;
  design.t_sr = split_cross_weights(problem, v);
  design.residual = column_residual(problem, design.t_sr, design.t_rr);
  design.status =
      design.residual <= k_exact_tol ? DesignStatus::exact : DesignStatus::approximate;
  return design;
}

}  // namespace

std::string to_string(AgentCase c) {
  switch (c) {
    case AgentCase::all_subnets: return "all-subnets";
    case AgentCase::some_subnets: return "some-subnets";
    case AgentCase::no_subnets: return "no-subnets";
  }
  return "unknown";
}

std::string to_string(DesignStatus status) {
  switch (status) {
    case DesignStatus::exact: return "exact";
    case DesignStatus::approximate: return "approximate";
    case DesignStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

std::string to_string(ConstraintReport::Kind kind) {
  switch (kind) {
    case ConstraintReport::Kind::equality: return "equality";
    case ConstraintReport::Kind::inequality: return "inequality";
    case ConstraintReport::Kind::floor: return "floor";
    case ConstraintReport::Kind::bound: return "bound";
  }
  return "unknown";
}

AgentCase classify_agent(const NetworkTopology& topology, AgentId k) {
  const AgentReduction reduction = reduce_for_agent(topology, k);
  if (reduction.subnet_ids.empty()) {
    return AgentCase::no_subnets;
  }
  return static_cast<int>(reduction.subnet_ids.size()) == topology.num_sending_subnets()
             ? AgentCase::all_subnets
             : AgentCase::some_subnets;
}

JointColumnProblem build_joint_problem(const NetworkTopology& topology, AgentId k,
                                       const Matrix& q) {
  if (q.rows() != topology.num_sending_subnets() ||
      q.cols() != topology.num_receiving_agents()) {
    throw input_error("target profile must be S x N_gR");
  }
  const AgentReduction reduction = reduce_for_agent(topology, k);

  JointColumnProblem problem;
  problem.agent_id = k;
  problem.q = q.col(k - topology.num_sending_agents() - 1);
  problem.sending_ids = reduction.sending_ids;
  problem.receiving_ids = receiving_in_neighbors(topology, k);
  problem.e = Matrix::Zero(topology.num_sending_subnets(),
                           static_cast<Index>(problem.sending_ids.size()));
  for (std::size_t j = 0; j < problem.sending_ids.size(); ++j) {
    problem.e(topology.subnet_of(problem.sending_ids[j]) - 1, static_cast<Index>(j)) = 1.0;
  }
  problem.q_neighbors =
      Matrix::Zero(topology.num_sending_subnets(), static_cast<Index>(problem.receiving_ids.size()));
  for (std::size_t j = 0; j < problem.receiving_ids.size(); ++j) {
    problem.q_neighbors.col(static_cast<Index>(j)) =
        q.col(problem.receiving_ids[j] - topology.num_sending_agents() - 1);
  }
  return problem;
}

Scalar EpsilonPolicy::resolve(AgentId k, std::optional<Scalar> bound) const {
  if (const auto it = per_agent.find(k); it != per_agent.end()) {
    if (!(it->second > 0.0)) {
      throw input_error("positivity floor for agent " + std::to_string(k) +
                        " must be strictly positive");
    }
    return it->second;
  }
  if (global) {
    if (!(*global > 0.0)) {
      throw input_error("positivity floor must be strictly positive");
    }
    return *global;
  }
  return bound ? std::min(cap, *bound / 2.0) : cap;
}

CaseDesign design_case1(const JointColumnProblem& problem, const EpsilonPolicy& policy) {
  const std::vector<Index> heard = connected_rows(problem);
  if (static_cast<Index>(heard.size()) != problem.e.rows()) {
    throw input_error("agent " + std::to_string(problem.agent_id) +
                      " does not hear every sending sub-network");
  }

  CaseDesign design;
  const Index n_rr = problem.q_neighbors.cols();
  if (n_rr == 0) {
    design.t_rr = Vector(0);
    design.t_sr = split_cross_weights(problem, problem.q);
    design.residual = column_residual(problem, design.t_sr, design.t_rr);
    design.status = DesignStatus::exact;
    return design;
  }

  std::optional<Scalar> bound;
  SubnetId bound_row = 0;
  for (Index s = 0; s < problem.q.size(); ++s) {
    const Scalar denom = problem.q_neighbors.row(s).sum();
    if (denom <= 0.0) continue;
    const Scalar ratio = problem.q(s) / denom;
    if (!bound || ratio < *bound) {
      bound = ratio;
      bound_row = static_cast<SubnetId>(s + 1);
    }
  }
  design.epsilon_bound = bound;

  const Scalar epsilon = policy.resolve(problem.agent_id, bound);
  design.epsilon = epsilon;
  if (!(epsilon > 0.0) || (bound && epsilon > *bound + 1e-12)) {
    design.status = DesignStatus::infeasible;
    design.violations.push_back(
        {ConstraintReport::Kind::bound, bound_row, -1, epsilon, bound.value_or(0.0)});
    return design;
  }

  design.t_rr = Vector::Constant(n_rr, epsilon);
  Vector v = problem.q - problem.q_neighbors * design.t_rr;
  for (Index s = 0; s < v.size(); ++s) {
    if (v(s) < 0.0) v(s) = 0.0;  // bound keeps true values non-negative; round-off only
  }
  design.t_sr = split_cross_weights(problem, v);
  design.residual = column_residual(problem, design.t_sr, design.t_rr);
  design.status = DesignStatus::exact;
  return design;
}

CaseDesign design_case2(const JointColumnProblem& problem, const EpsilonPolicy& policy,
                        bool fallback_ls) {
  const std::vector<Index> heard = connected_rows(problem);
  const std::vector<Index> unheard = complement_rows(problem, heard);
  if (heard.empty() || unheard.empty()) {
    throw input_error("agent " + std::to_string(problem.agent_id) +
                      " does not hear a proper non-empty subset of sending sub-networks");
  }

  const Index n_rr = problem.q_neighbors.cols();
  const Scalar epsilon = policy.resolve(problem.agent_id, std::nullopt);

  CaseDesign design;
  design.epsilon = epsilon;

  if (static_cast<Index>(unheard.size()) == n_rr && n_rr > 0) {
    Matrix a_eq(n_rr, n_rr);
    Vector b_eq(n_rr);
    for (Index i = 0; i < n_rr; ++i) {
      a_eq.row(i) = problem.q_neighbors.row(unheard[i]);
      b_eq(i) = problem.q(unheard[i]);
    }
    Eigen::FullPivLU<Matrix> lu(a_eq);
    if (lu.isInvertible()) {
      const Vector alpha = lu.solve(b_eq);
      design.equality_solution = alpha;
      for (Index i = 0; i < n_rr; ++i) {
        if (alpha(i) < epsilon - 1e-12) {
          design.violations.push_back(
              {ConstraintReport::Kind::floor, 0, i, alpha(i), epsilon});
        }
      }
      for (Index s : heard) {
        const Scalar lhs = problem.q_neighbors.row(s).dot(alpha);
        if (lhs > problem.q(s) + 1e-12) {
          design.violations.push_back(
              {ConstraintReport::Kind::inequality, static_cast<SubnetId>(s + 1), -1, lhs,
               problem.q(s)});
        }
      }
      if (design.violations.empty()) {
        design.t_rr = alpha;
        Vector v = problem.q - problem.q_neighbors * alpha;
        design.t_sr = split_cross_weights(problem, v);
        design.residual = column_residual(problem, design.t_sr, design.t_rr);
        design.status = DesignStatus::exact;
        return design;
      }
      // The equality subsystem pins t_RR uniquely, so a violated constraint
      // certifies infeasibility of the exact design.
      if (!fallback_ls) {
        design.status = DesignStatus::infeasible;
        return design;
      }
      CaseDesign fallback = run_ls(problem, epsilon);
      fallback.epsilon = epsilon;
      fallback.equality_solution = design.equality_solution;
      fallback.violations.insert(fallback.violations.begin(), design.violations.begin(),
                                 design.violations.end());
      if (fallback.status == DesignStatus::exact) {
        fallback.status = DesignStatus::approximate;  // exact was already ruled out
      }
      return fallback;
    }
  }

  CaseDesign ls = run_ls(problem, epsilon);
  if (ls.status == DesignStatus::approximate && !fallback_ls) {
    report_row_misses(problem, ls.t_sr, ls.t_rr, unheard, ls);
    ls.status = DesignStatus::infeasible;
    ls.t_sr = Vector(0);
    ls.t_rr = Vector(0);
  }
  return ls;
}

CaseDesign design_case3(const JointColumnProblem& problem, const EpsilonPolicy& policy,
                        bool fallback_ls) {
  if (!connected_rows(problem).empty() || problem.e.cols() > 0) {
    throw input_error("agent " + std::to_string(problem.agent_id) +
                      " hears a sending sub-network");
  }
  CaseDesign design;
  const Index n_rr = problem.q_neighbors.cols();
  if (n_rr == 0) {
    design.status = DesignStatus::infeasible;
    design.violations.push_back({ConstraintReport::Kind::floor, 0, -1, 0.0, 1.0});
    return design;
  }
  const Scalar epsilon = policy.resolve(problem.agent_id, std::nullopt);
  std::vector<Index> all_rows(problem.q.size());
  for (Index s = 0; s < problem.q.size(); ++s) all_rows[s] = s;

  CaseDesign ls = run_ls(problem, epsilon);
  if (ls.status == DesignStatus::approximate && !fallback_ls) {
    report_row_misses(problem, ls.t_sr, ls.t_rr, all_rows, ls);
    ls.status = DesignStatus::infeasible;
    ls.t_sr = Vector(0);
    ls.t_rr = Vector(0);
  }
  return ls;
}

CaseDesign solve_constrained_ls(const JointColumnProblem& problem, Scalar epsilon) {
  if (!(epsilon >= 0.0)) {
    throw input_error("positivity floor must be non-negative");
  }
  return run_ls(problem, epsilon);
}

namespace {

CaseDesign design_from_overrides(const JointColumnProblem& problem, const Vector& t_rr_given,
                                 const Vector* t_sr_given,
                                 const std::vector<Index>& unheard) {
  const Index n_rr = problem.q_neighbors.cols();
  if (t_rr_given.size() != n_rr) {
    throw input_error("receiving-weight override for agent " + std::to_string(problem.agent_id) +
                      " must have " + std::to_string(n_rr) + " entries");
  }
  for (Index i = 0; i < n_rr; ++i) {
    if (!(t_rr_given(i) > 0.0)) {
      throw domain_error("receiving-weight override for agent " +
                         std::to_string(problem.agent_id) + " must be strictly positive");
    }
  }
  Vector v = problem.q;
  if (n_rr > 0) v -= problem.q_neighbors * t_rr_given;
  for (Index s : unheard) {
    if (std::abs(v(s)) > k_eq_tol) {
      throw domain_error("override for agent " + std::to_string(problem.agent_id) +
                         " misses the unheard sub-network " + std::to_string(s + 1) + " by " +
                         std::to_string(v(s)));
    }
  }
  for (Index s = 0; s < v.size(); ++s) {
    if (v(s) < -1e-12) {
      throw domain_error("override for agent " + std::to_string(problem.agent_id) +
                         " requires negative cross mass from sub-network " + std::to_string(s + 1));
    }
    if (v(s) < 0.0) v(s) = 0.0;
  }

  CaseDesign design;
  design.t_rr = t_rr_given;
  design.epsilon = n_rr > 0 ? t_rr_given.minCoeff() : 0.0;
  if (t_sr_given) {
    if (t_sr_given->size() != problem.e.cols()) {
      throw input_error("cross-weight override for agent " + std::to_string(problem.agent_id) +
                        " must have " + std::to_string(problem.e.cols()) + " entries");
    }
    if (t_sr_given->size() > 0 && t_sr_given->minCoeff() < 0.0) {
      throw domain_error("cross-weight override for agent " + std::to_string(problem.agent_id) +
                         " has negative entries");
    }
    const Vector sums = problem.e * *t_sr_given;
    for (Index s = 0; s < sums.size(); ++s) {
      if (std::abs(sums(s) - v(s)) > k_eq_tol) {
        throw domain_error("cross-weight override for agent " +
                           std::to_string(problem.agent_id) + " puts mass " +
                           std::to_string(sums(s)) + " on sub-network " + std::to_string(s + 1) +
                           " instead of " + std::to_string(v(s)));
      }
    }
    design.t_sr = *t_sr_given;
  } else {
    design.t_sr = split_cross_weights(problem, v);
  }
  design.residual = column_residual(problem, design.t_sr, design.t_rr);
  design.status = DesignStatus::exact;
  return design;
}

bool in_path_preserved(const Matrix& t_sr, const Matrix& t_rr) {
  const Index n_gr = t_rr.cols();
  std::vector<bool> reached(n_gr, false);
  std::deque<Index> queue;
  for (Index k = 0; k < n_gr; ++k) {
    if (t_sr.rows() > 0 && t_sr.col(k).maxCoeff() > 0.0) {
      reached[k] = true;
      queue.push_back(k);
    }
  }
  while (!queue.empty()) {
    const Index l = queue.front();
    queue.pop_front();
    for (Index k = 0; k < n_gr; ++k) {
      if (!reached[k] && t_rr(l, k) > 0.0) {
        reached[k] = true;
        queue.push_back(k);
      }
    }
  }
  return std::all_of(reached.begin(), reached.end(), [](bool b) { return b; });
}

}  // namespace

JointDesignResult joint_design(const NetworkTopology& topology, const Matrix& q,
                               const JointPolicy& policy) {
  if (q.rows() != topology.num_sending_subnets() ||
      q.cols() != topology.num_receiving_agents()) {
    throw input_error("target profile must be S x N_gR");
  }
  for (Index k = 0; k < q.cols(); ++k) {
    if (std::abs(q.col(k).sum() - 1.0) > 1e-9) {
      throw input_error("target column " + std::to_string(k + 1) + " does not sum to 1");
    }
  }
  if (q.size() > 0 && q.minCoeff() < -1e-12) {
    throw input_error("target profile has negative entries");
  }

  const Index n_gs = topology.num_sending_agents();
  const Index n_gr = topology.num_receiving_agents();

  JointDesignResult result;
  Matrix t_sr = Matrix::Zero(n_gs, n_gr);
  Matrix t_rr = Matrix::Zero(n_gr, n_gr);

  bool any_infeasible = false;
  bool any_approximate = false;
  for (Index col = 0; col < n_gr; ++col) {
    const AgentId k = static_cast<AgentId>(n_gs + col + 1);
    const JointColumnProblem problem = build_joint_problem(topology, k, q);
    const AgentCase agent_case = classify_agent(topology, k);
    const std::vector<Index> heard = connected_rows(problem);
    const std::vector<Index> unheard = complement_rows(problem, heard);

    CaseDesign design;
    if (const auto it = policy.overrides.t_rr.find(k); it != policy.overrides.t_rr.end()) {
      const auto sr_it = policy.overrides.t_sr.find(k);
      design = design_from_overrides(
          problem, it->second, sr_it != policy.overrides.t_sr.end() ? &sr_it->second : nullptr,
          unheard);
    } else if (policy.overrides.t_sr.count(k) > 0) {
      throw input_error("cross-weight override for agent " + std::to_string(k) +
                        " requires a receiving-weight override");
    } else {
      switch (agent_case) {
        case AgentCase::all_subnets:
          design = design_case1(problem, policy.epsilon);
          if (design.status == DesignStatus::infeasible && policy.fallback_ls) {
            // The exact floor bound is broken; approximate with the plain
            // policy floor instead.
            CaseDesign fallback =
                solve_constrained_ls(problem, policy.epsilon.resolve(k, std::nullopt));
            fallback.epsilon_bound = design.epsilon_bound;
            fallback.violations.insert(fallback.violations.begin(), design.violations.begin(),
                                       design.violations.end());
            if (fallback.status == DesignStatus::exact) {
              fallback.status = DesignStatus::approximate;
            }
            design = fallback;
          }
          break;
        case AgentCase::some_subnets:
          design = design_case2(problem, policy.epsilon, policy.fallback_ls);
          break;
        case AgentCase::no_subnets:
          design = design_case3(problem, policy.epsilon, policy.fallback_ls);
          break;
      }
    }

    if (design.status == DesignStatus::infeasible) {
      any_infeasible = true;
    } else {
      any_approximate |= design.status == DesignStatus::approximate;
      for (Index j = 0; j < design.t_sr.size(); ++j) {
        t_sr(problem.sending_ids[j] - 1, col) = design.t_sr(j);
      }
      for (Index j = 0; j < design.t_rr.size(); ++j) {
        t_rr(problem.receiving_ids[j] - n_gs - 1, col) = design.t_rr(j);
      }
    }

    AgentDesignReport report;
    report.agent_id = k;
    report.agent_case = agent_case;
    report.status = design.status;
    report.effective_status = design.status;
    report.residual = design.residual;
    report.epsilon = design.epsilon;
    report.epsilon_bound = design.epsilon_bound;
    report.equality_solution = design.equality_solution;
    report.violations = design.violations;
    result.per_agent.push_back(std::move(report));
  }

  result.overall = any_infeasible    ? DesignStatus::infeasible
                   : any_approximate ? DesignStatus::approximate
                                     : DesignStatus::exact;
  if (result.overall == DesignStatus::infeasible) {
    return result;
  }

  // One approximate column perturbs every limit, so exact columns are only
  // honored approximately in the assembled design.
  if (result.overall == DesignStatus::approximate) {
    for (auto& report : result.per_agent) {
      if (report.status == DesignStatus::exact) {
        report.effective_status = DesignStatus::approximate;
      }
    }
  }

  result.t_sr = std::move(t_sr);
  result.t_rr = std::move(t_rr);
  result.in_path_preserved = in_path_preserved(result.t_sr, result.t_rr);
  if (result.in_path_preserved) {
    const Matrix w = compute_w(result.t_sr, result.t_rr);
    result.predicted = build_e(topology) * w;
    for (Index col = 0; col < n_gr; ++col) {
      result.per_agent[col].predicted_deviation =
          (result.predicted.col(col) - q.col(col)).cwiseAbs().maxCoeff();
    }
  }
  return result;
}

}  // namespace weaknet
