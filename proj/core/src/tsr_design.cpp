#include "weaknet/tsr_design.hpp"

#include <cmath>
#include <sstream>

namespace weaknet {

Matrix compute_v(const Matrix& q, const Matrix& t_rr) {
  const Index n_gr = t_rr.rows();
  if (t_rr.cols() != n_gr) {
    throw input_error("receiving block must be square");
  }
  if (q.cols() != n_gr) {
    throw input_error("target profile has " + std::to_string(q.cols()) +
                      " columns but the receiving block has " + std::to_string(n_gr));
  }
  for (Index k = 0; k < q.cols(); ++k) {
    if (std::abs(q.col(k).sum() - 1.0) > 1e-9) {
      throw input_error("target column " + std::to_string(k + 1) + " does not sum to 1");
    }
  }
  if (q.size() > 0 && q.minCoeff() < -1e-12) {
    throw input_error("target profile has negative entries");
  }
  return q - q * t_rr;
}

std::string to_string(AttainKind kind) {
  switch (kind) {
    case AttainKind::negative: return "negative";
    case AttainKind::zero_required_positive: return "zero-required-positive";
    case AttainKind::positive_required_zero: return "positive-required-zero";
  }
  return "unknown";
}

AttainabilityReport check_attainable(const Matrix& v, const IntMatrix& c,
                                     const AttainabilityTols& tols, Index n_sending_agents) {
  if (v.rows() != c.rows() || v.cols() != c.cols()) {
    throw input_error("required-mass matrix and connectivity indicator differ in shape");
  }
  AttainabilityReport report;
  for (Index s = 0; s < v.rows(); ++s) {
    for (Index k = 0; k < v.cols(); ++k) {
      const Scalar value = v(s, k);
      AttainabilityViolation violation;
      violation.agent_id = static_cast<AgentId>(n_sending_agents + k + 1);
      violation.receiving_index = k + 1;
      violation.subnet_id = static_cast<SubnetId>(s + 1);
      violation.value = value;
      if (c(s, k) == 0) {
        if (std::abs(value) > tols.tol_zero) {
          violation.kind =
              value < 0.0 ? AttainKind::negative : AttainKind::positive_required_zero;
          report.violations.push_back(violation);
        }
      } else {
        if (value < tols.tol_pos) {
          violation.kind =
              value < -tols.tol_zero ? AttainKind::negative : AttainKind::zero_required_positive;
          report.violations.push_back(violation);
        }
      }
    }
  }
  report.attainable = report.violations.empty();
  return report;
}

ColumnSolutionFamily::ColumnSolutionFamily(AgentReduction reduction, Vector base)
    : reduction_(std::move(reduction)), base_(std::move(base)) {
  if (base_.size() != static_cast<Index>(reduction_.sending_ids.size())) {
    throw input_error("base length does not match the reduction");
  }
}

Vector ColumnSolutionFamily::project(const Vector& y) const {
  if (y.size() != dimension()) {
    throw input_error("free parameter must have " + std::to_string(dimension()) + " entries");
  }
  Vector centered = y;
  Index offset = 0;
  for (Index count : reduction_.counts) {
    auto block = centered.segment(offset, count);
    block.array() -= block.mean();
    offset += count;
  }
  return centered;
}

Vector ColumnSolutionFamily::instantiate(const Vector& y) const {
  Vector t = base_ + project(y);
  for (Index i = 0; i < t.size(); ++i) {
    if (t(i) < 0.0) {
      if (t(i) < -1e-12) {
        std::ostringstream msg;
        msg << "free parameter drives the weight on sending agent " << reduction_.sending_ids[i]
            << " to " << t(i);
        throw domain_error(msg.str());
      }
      t(i) = 0.0;
    }
  }
  return t;
}

ColumnSolutionFamily solution_family(const NetworkTopology& topology, AgentId k, const Matrix& v,
                                     const AttainabilityTols& tols) {
  if (topology.is_sending_agent(k)) {
    throw input_error("agent " + std::to_string(k) + " is not a receiving agent");
  }
  const Index col = k - topology.num_sending_agents() - 1;
  if (v.rows() != topology.num_sending_subnets() || col >= v.cols()) {
    throw input_error("required-mass matrix shape does not match the topology");
  }

  AgentReduction reduction = reduce_for_agent(topology, k);
  Vector base = Vector::Zero(static_cast<Index>(reduction.sending_ids.size()));
  std::size_t retained = 0;
  Index offset = 0;
  for (SubnetId s = 1; s <= topology.num_sending_subnets(); ++s) {
    const bool connected =
        retained < reduction.subnet_ids.size() && reduction.subnet_ids[retained] == s;
    const Scalar required = v(s - 1, col);
    if (!connected) {
      if (std::abs(required) > tols.tol_zero) {
        throw domain_error("agent " + std::to_string(k) + " requires mass from sub-network " +
                           std::to_string(s) + " without hearing it");
      }
      continue;
    }
    if (required < -tols.tol_zero) {
      throw domain_error("agent " + std::to_string(k) + " requires negative mass from sub-network " +
                         std::to_string(s));
    }
    const Index count = reduction.counts[retained];
    base.segment(offset, count).setConstant(std::max(required, 0.0) / static_cast<Scalar>(count));
    offset += count;
    ++retained;
  }
  return {std::move(reduction), std::move(base)};
}

TsrDesign design_tsr(const NetworkTopology& topology, const Matrix& q, const Matrix& t_rr,
                     const TsrPolicy& policy, const AttainabilityTols& tols) {
  if (q.rows() != topology.num_sending_subnets() ||
      q.cols() != topology.num_receiving_agents() ||
      t_rr.rows() != topology.num_receiving_agents()) {
    throw input_error("target profile or receiving block does not match the topology");
  }
  const Matrix v = compute_v(q, t_rr);
  const IntMatrix c = build_c(topology);

  TsrDesign design;
  design.attainability = check_attainable(v, c, tols, topology.num_sending_agents());
  if (!design.attainability.attainable) {
    return design;
  }

  design.t_sr = Matrix::Zero(topology.num_sending_agents(), topology.num_receiving_agents());
  for (Index col = 0; col < topology.num_receiving_agents(); ++col) {
    const AgentId k = static_cast<AgentId>(topology.num_sending_agents() + col + 1);
    const ColumnSolutionFamily family = solution_family(topology, k, v, tols);
    Vector y = Vector::Zero(family.dimension());
    if (const auto it = policy.y.find(k); it != policy.y.end()) {
      if (it->second.size() != family.dimension()) {
        throw input_error("free parameter for agent " + std::to_string(k) + " must have " +
                          std::to_string(family.dimension()) + " entries");
      }
      y = it->second;
    }
    const Vector t = family.instantiate(y);
    for (Index i = 0; i < t.size(); ++i) {
      design.t_sr(family.reduction().sending_ids[i] - 1, col) = t(i);
    }
  }
  return design;
}

std::string to_string(UniformVerdict verdict) {
  switch (verdict) {
    case UniformVerdict::all: return "all";
    case UniformVerdict::none: return "none";
    case UniformVerdict::partial: return "partial";
  }
  return "unknown";
}

UniformPrecheckReport uniform_precheck(const NetworkTopology& topology) {
  const IntMatrix c = build_c(topology);
  UniformPrecheckReport report;
  report.uniform_compatible = true;
  for (Index k = 0; k < c.cols(); ++k) {
    const int connected = c.col(k).sum();
    UniformVerdict verdict = UniformVerdict::partial;
    if (connected == 0) {
      verdict = UniformVerdict::none;
    } else if (connected == c.rows()) {
      verdict = UniformVerdict::all;
    } else {
      report.uniform_compatible = false;
    }
    report.agents.push_back(
        {static_cast<AgentId>(topology.num_sending_agents() + k + 1), verdict});
  }
  return report;
}

}  // namespace weaknet
