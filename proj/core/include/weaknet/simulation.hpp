#pragma once

#include <cstdint>
#include <vector>

#include "weaknet/likelihood.hpp"
#include "weaknet/state_space.hpp"
#include "weaknet/topology.hpp"
#include "weaknet/types.hpp"

namespace weaknet {

struct SimConfig {
  Index iterations = 0;
  std::uint64_t seed = 0;
  /// Empty means uniform; otherwise N x K, rows summing to 1 within 1e-9.
  Matrix initial;
  /// Beliefs are recorded every trace_stride iterations plus at the end.
  Index trace_stride = 10;
  /// Stored states averaged by empirical_limit (and verify_design).
  Index averaging_window = 1;
  /// Re-check row stochasticity after every iteration (tests; costs time).
  bool check_invariants = false;
};

/// Recorded belief snapshots: iterations[i] is the 1-based iteration number of
/// beliefs[i]; the last entry is always the final state.
struct Trace {
  std::vector<Index> iterations;
  std::vector<Matrix> beliefs;  // N x K each

  [[nodiscard]] const Matrix& final_beliefs() const;
};

/// One Bayes step: posterior proportional to prior * likelihood, with
/// sub-1e-300 values flushed to zero before normalizing. An all-zero posterior
/// can only arise from broken likelihood invariants and throws domain_error.
[[nodiscard]] Vector bayesian_update(const Vector& prior, const Vector& likelihood);

/// Social step: every agent convex-combines its in-neighborhood, new beliefs
/// = A^T psi for row-stochastic psi.
[[nodiscard]] Matrix combine_step(const Matrix& psi, const Matrix& a);

/// Runs the learn-then-combine recursion. Every agent draws one private
/// signal per iteration from its own likelihood under its sub-network's true
/// state (every sub-network must therefore declare one), using its own seeded
/// stream. Same inputs, same trace, bit for bit.
[[nodiscard]] Trace run_simulation(const Matrix& a, const LikelihoodModel& likelihoods,
                                   const NetworkTopology& topology, const SimConfig& config);

/// Entry-wise average of the last `window` recorded snapshots (1 <= window <=
/// recorded count).
[[nodiscard]] Matrix empirical_limit(const Trace& trace, Index window);

struct VerificationReport {
  Matrix w;         // N_gS x N_gR limit weights
  Matrix analytic;  // N_gR x K limiting beliefs
  /// Max |analytic - target| over receiving agents at the sending true states.
  Scalar max_analytic_deviation = 0;
  bool has_empirical = false;
  Matrix empirical;  // N x K window average
  /// Max |empirical - analytic| over receiving agents and all states.
  Scalar max_empirical_deviation = 0;
};

/// Confronts a designed combination matrix with its target profile: the
/// implied limits analytically, and optionally a finite-run estimate when a
/// likelihood model is supplied.
[[nodiscard]] VerificationReport verify_design(const NetworkTopology& topology,
                                               const StateSpace& space, const Matrix& a,
                                               const Matrix& q,
                                               const LikelihoodModel* likelihoods,
                                               const SimConfig& config);

}  // namespace weaknet
