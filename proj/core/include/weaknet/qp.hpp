#pragma once

#include <vector>

#include "weaknet/types.hpp"

namespace weaknet {

struct LsqResult {
  bool feasible = false;  // the polytope {sum x = 1, x >= lb} is non-empty
  Vector x;
  Scalar residual = 0;    // ||B x - q||_2 at the solution
  int iterations = 0;
  std::vector<Index> active;  // variables pinned at their lower bound, ascending
};

/// min ||B x - q||_2 subject to sum(x) = 1 and x >= lb, solved with a primal
/// active-set method on the bound constraints. The equality is eliminated by a
/// fixed orthonormal null-space basis and each restricted problem is solved by
/// a complete orthogonal decomposition, so rank-deficient B is fine and the
/// minimizer picked on flat faces is the minimum-norm one. Blocking and
/// dropping both break ties toward the smallest variable index, which makes
/// the returned active set (and hence the solution) deterministic.
[[nodiscard]] LsqResult solve_simplex_lsq(const Matrix& b, const Vector& q, const Vector& lb);

}  // namespace weaknet
