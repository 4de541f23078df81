#include "weaknet/simulation.hpp"

#include <cmath>
#include <sstream>

#include "weaknet/limits.hpp"
#include "weaknet/rng.hpp"

namespace weaknet {

namespace {

constexpr Scalar k_flush = 1e-300;

template <typename Row>
void flush_and_normalize(Row&& row, const char* stage) {
  for (Index i = 0; i < row.size(); ++i) {
    if (row(i) < k_flush) row(i) = 0.0;
  }
  const Scalar sum = row.sum();
  if (!(sum > 0.0)) {
    throw domain_error(std::string("belief vector vanished during ") + stage +
                       "; likelihood positivity invariants must be broken");
  }
  row /= sum;
}

}  // namespace

const Matrix& Trace::final_beliefs() const {
  if (beliefs.empty()) {
    throw input_error("trace is empty");
  }
  return beliefs.back();
}

Vector bayesian_update(const Vector& prior, const Vector& likelihood) {
  if (prior.size() != likelihood.size()) {
    throw input_error("prior and likelihood dimensions disagree");
  }
  Vector posterior = prior.cwiseProduct(likelihood);
  flush_and_normalize(posterior.transpose(), "a Bayes step");
  return posterior;
}

Matrix combine_step(const Matrix& psi, const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() != psi.rows()) {
    throw input_error("combination matrix and belief table dimensions disagree");
  }
  return a.transpose() * psi;
}

Trace run_simulation(const Matrix& a, const LikelihoodModel& likelihoods,
                     const NetworkTopology& topology, const SimConfig& config) {
  const Index n = topology.num_agents();
  if (a.rows() != n || a.cols() != n) {
    throw input_error("combination matrix shape does not match the topology");
  }
  if (likelihoods.num_agents() != n) {
    throw input_error("likelihood model covers " + std::to_string(likelihoods.num_agents()) +
                      " agents, topology has " + std::to_string(n));
  }
  if (config.iterations < 1) {
    throw input_error("iteration count must be positive");
  }
  if (config.trace_stride < 1) {
    throw input_error("trace stride must be positive");
  }
  const Index k_states = likelihoods.num_states();

  std::vector<Index> true_state(n);
  for (Index i = 0; i < n; ++i) {
    const auto state = topology.true_state(topology.subnet_of(static_cast<AgentId>(i + 1)));
    if (!state) {
      throw input_error("sub-network of agent " + std::to_string(i + 1) +
                        " declares no true state; simulation cannot draw its signals");
    }
    if (*state > k_states) {
      throw input_error("true state " + std::to_string(*state) +
                        " outside the likelihood state range");
    }
    true_state[i] = *state - 1;
  }

  Matrix mu;
  if (config.initial.size() == 0) {
    mu = Matrix::Constant(n, k_states, 1.0 / static_cast<Scalar>(k_states));
  } else {
    if (config.initial.rows() != n || config.initial.cols() != k_states) {
      throw input_error("initial beliefs must be N x K");
    }
    if (config.initial.minCoeff() < 0.0) {
      throw input_error("initial beliefs must be non-negative");
    }
    for (Index i = 0; i < n; ++i) {
      if (std::abs(config.initial.row(i).sum() - 1.0) > 1e-9) {
        throw input_error("initial belief row " + std::to_string(i + 1) + " does not sum to 1");
      }
    }
    mu = config.initial;
  }

  std::vector<AgentRng> streams;
  streams.reserve(n);
  for (Index i = 0; i < n; ++i) {
    streams.emplace_back(config.seed, static_cast<std::uint64_t>(i));
  }

  Trace trace;
  Matrix psi(n, k_states);
  for (Index iteration = 1; iteration <= config.iterations; ++iteration) {
    for (Index i = 0; i < n; ++i) {
      const Matrix& table = likelihoods.table(i);
      const Index signal = streams[i].categorical(table.row(true_state[i]).transpose());
      psi.row(i) = mu.row(i).cwiseProduct(table.col(signal).transpose());
      flush_and_normalize(psi.row(i), "a Bayes step");
    }
    mu = combine_step(psi, a);
    for (Index i = 0; i < n; ++i) {
      flush_and_normalize(mu.row(i), "a combine step");
    }
    if (config.check_invariants) {
      for (Index i = 0; i < n; ++i) {
        if (std::abs(mu.row(i).sum() - 1.0) > 1e-9 || mu.row(i).minCoeff() < 0.0) {
          std::ostringstream msg;
          msg << "belief row " << (i + 1) << " left the simplex at iteration " << iteration;
          throw domain_error(msg.str());
        }
      }
    }
    if (iteration % config.trace_stride == 0 || iteration == config.iterations) {
      trace.iterations.push_back(iteration);
      trace.beliefs.push_back(mu);
    }
  }
  return trace;
}

Matrix empirical_limit(const Trace& trace, Index window) {
  const Index stored = static_cast<Index>(trace.beliefs.size());
  if (window < 1 || window > stored) {
    throw input_error("averaging window must lie in [1, " + std::to_string(stored) + "]");
  }
  Matrix mean = Matrix::Zero(trace.beliefs.front().rows(), trace.beliefs.front().cols());
  for (Index i = stored - window; i < stored; ++i) {
    mean += trace.beliefs[static_cast<std::size_t>(i)];
  }
  return mean / static_cast<Scalar>(window);
}

VerificationReport verify_design(const NetworkTopology& topology, const StateSpace& space,
                                 const Matrix& a, const Matrix& q,
                                 const LikelihoodModel* likelihoods, const SimConfig& config) {
  const Index n = topology.num_agents();
  const Index n_gs = topology.num_sending_agents();
  const Index n_gr = topology.num_receiving_agents();
  if (a.rows() != n || a.cols() != n) {
    throw input_error("combination matrix shape does not match the topology");
  }
  if (q.rows() != topology.num_sending_subnets() || q.cols() != n_gr) {
    throw input_error("target profile must be S x N_gR");
  }

  VerificationReport report;
  report.w = compute_w(a.topRightCorner(n_gs, n_gr), a.bottomRightCorner(n_gr, n_gr));
  report.analytic = limiting_beliefs(report.w, space, topology);
  for (SubnetId s = 1; s <= topology.num_sending_subnets(); ++s) {
    const Index theta = space.sending_true_state(s) - 1;
    report.max_analytic_deviation =
        std::max(report.max_analytic_deviation,
                 (report.analytic.col(theta) - q.row(s - 1).transpose()).cwiseAbs().maxCoeff());
  }

  if (likelihoods != nullptr) {
    if (likelihoods->num_states() < space.num_states()) {
      throw input_error("likelihood model covers fewer states than the state space");
    }
    const Trace trace = run_simulation(a, *likelihoods, topology, config);
    report.empirical = empirical_limit(
        trace, std::min<Index>(config.averaging_window, static_cast<Index>(trace.beliefs.size())));
    report.has_empirical = true;
    report.max_empirical_deviation =
        (report.empirical.bottomRows(n_gr).leftCols(report.analytic.cols()) - report.analytic)
            .cwiseAbs()
            .maxCoeff();
  }
  return report;
}

}  // namespace weaknet
