#pragma once

#include <vector>

#include "weaknet/types.hpp"

namespace weaknet {

/// Per-agent signal models: table(agent) is num_states x alphabet_size(agent)
/// with rows L_k(.|theta). Rows must sum to 1 within 1e-12 and every entry
/// must be strictly inside (0, 1); zero or one would make some signal fully
/// revealing or impossible and breaks the update's positivity invariants, so
/// such tables are rejected at construction.
class LikelihoodModel {
 public:
  explicit LikelihoodModel(std::vector<Matrix> tables, Scalar row_sum_tol = 1e-12);

  /// Binary alphabet from a num_states x num_agents table of P(first signal).
  static LikelihoodModel from_binary(const Matrix& p_first);

  [[nodiscard]] Index num_agents() const { return static_cast<Index>(tables_.size()); }
  [[nodiscard]] Index num_states() const { return num_states_; }
  [[nodiscard]] Index alphabet_size(Index agent) const;
  /// agent is a 0-based position.
  [[nodiscard]] const Matrix& table(Index agent) const;

 private:
  std::vector<Matrix> tables_;
  Index num_states_ = 0;
};

}  // namespace weaknet
