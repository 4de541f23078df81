#pragma once

#include "weaknet/state_space.hpp"
#include "weaknet/topology.hpp"
#include "weaknet/types.hpp"

namespace weaknet {

struct LimitOptions {
  /// Condition estimate above which (I - T_RR) is treated as effectively
  /// singular; this is what a receiving block with no external inflow looks
  /// like numerically.
  Scalar max_condition = 1e12;
  /// Columns of the limit matrix must sum to 1 within this.
  Scalar column_sum_tol = 1e-9;
  /// Round-off negatives above -clamp_tol are clamped to 0, anything below is
  /// an error.
  Scalar clamp_tol = 1e-12;
};

/// Limit matrix W = T_SR (I - T_RR)^{-1}, computed by factorizing
/// (I - T_RR)^T and solving, never by forming the inverse. W is
/// column-stochastic: column k holds the asymptotic weights receiving agent k
/// places on each sending agent. Throws domain_error when the receiving block
/// is effectively closed (condition estimate above max_condition) or when the
/// result is not a clean stochastic matrix.
[[nodiscard]] Matrix compute_w(const Matrix& t_sr, const Matrix& t_rr,
                               const LimitOptions& options = {});

/// Limiting belief of every sending agent at one state: the indicator of the
/// sub-networks whose true state it is.
[[nodiscard]] Vector sending_limit(StateId state, const StateSpace& space,
                                   const NetworkTopology& topology);

/// N_gR x K table of receiving limiting beliefs over the full state list.
/// Row k is supported on the sending true states: the mass at theta-circle_s
/// is the total weight column k of W places on sub-network s.
[[nodiscard]] Matrix limiting_beliefs(const Matrix& w, const StateSpace& space,
                                      const NetworkTopology& topology);

/// Expands a target S x N_gR profile to all agents (S x N): sending agents
/// contribute their point-mass columns, receiving agents the given targets.
[[nodiscard]] Matrix expand_profile(const Matrix& q, const NetworkTopology& topology);

/// Max abs residual, over receiving agents, of the stationarity relation
/// q_k = sum_l a(l, k) q_l applied to a full S x N profile.
[[nodiscard]] Scalar fixed_point_residual(const Matrix& a, const Matrix& q_full,
                                          const NetworkTopology& topology);

}  // namespace weaknet
