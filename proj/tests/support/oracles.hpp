#pragma once

// Independent reference implementations used to cross-check the library:
// deliberately different algorithms (tableau simplex, Neumann series,
// rejection/probing samplers) so that agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "weaknet/topology.hpp"
#include "weaknet/types.hpp"

namespace oracles {

using weaknet::Index;
using weaknet::Matrix;
using weaknet::Vector;

/// Phase-1 tableau simplex deciding whether {x >= 0 : A x = b} is non-empty.
/// Bland's rule, so it terminates on any input. Small dense problems only.
inline bool linear_system_feasible(Matrix a, Vector b, double tol = 1e-9) {
  const Index m = a.rows();
  const Index n = a.cols();
  for (Index i = 0; i < m; ++i) {
    if (b(i) < 0) {
      a.row(i) = -a.row(i);
      b(i) = -b(i);
    }
  }
  // Tableau over [x, artificials | rhs]; objective row minimizes the sum of
  // artificials.
  Matrix t = Matrix::Zero(m + 1, n + m + 1);
  t.block(0, 0, m, n) = a;
  t.block(0, n, m, m) = Matrix::Identity(m, m);
  t.block(0, n + m, m, 1) = b;
  std::vector<Index> basis(m);
  for (Index i = 0; i < m; ++i) {
    basis[i] = n + i;
  }
  // Objective row: cost 1 on artificials, reduced to the basis.
  for (Index j = 0; j <= n + m; ++j) {
    double s = 0;
    for (Index i = 0; i < m; ++i) {
      s -= t(i, j);
    }
    t(m, j) = s;
  }
  for (Index i = 0; i < m; ++i) {
    t(m, n + i) += 1.0;
  }
  for (int guard = 0; guard < 10000; ++guard) {
    Index enter = -1;
    for (Index j = 0; j < n + m; ++j) {
      if (t(m, j) < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) {
      break;
    }
    Index leave = -1;
    double best = 0;
    for (Index i = 0; i < m; ++i) {
      if (t(i, enter) > tol) {
        const double ratio = t(i, n + m) / t(i, enter);
        if (leave < 0 || ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave < 0) {
      return false;  // unbounded phase-1 cannot happen; treat as failure
    }
    t.row(leave) /= t(leave, enter);
    for (Index i = 0; i <= m; ++i) {
      if (i != leave && t(i, enter) != 0.0) {
        t.row(i) -= t(i, enter) * t.row(leave);
      }
    }
    basis[leave] = enter;
  }
  return std::abs(t(m, n + m)) <= tol;
}

/// Feasibility of {x : sum x = 1, x >= lb, B x = q} via the shifted phase-1
/// problem in y = x - lb >= 0.
inline bool shifted_system_feasible(const Matrix& b, const Vector& q, const Vector& lb,
                                    double tol = 1e-9) {
  const Index n = b.cols();
  Matrix a(b.rows() + 1, n);
  a.topRows(b.rows()) = b;
  a.bottomRows(1).setOnes();
  Vector rhs(b.rows() + 1);
  rhs.head(b.rows()) = q - b * lb;
  rhs(b.rows()) = 1.0 - lb.sum();
  if (rhs(b.rows()) < -tol) {
    return false;
  }
  return linear_system_feasible(a, rhs, tol);
}

/// Uniform-ish random point of {x : sum x = 1, x >= lb} (Dirichlet over the
/// slack). Requires sum(lb) <= 1.
template <typename Rng>
Vector sample_simplex_point(Rng& rng, const Vector& lb) {
  std::exponential_distribution<double> exp_dist(1.0);
  const Index n = lb.size();
  Vector g(n);
  for (Index i = 0; i < n; ++i) {
    g(i) = exp_dist(rng);
  }
  g /= g.sum();
  return lb + (1.0 - lb.sum()) * g;
}

/// Limit weights by truncated Neumann series: T_SR (I + T_RR + T_RR^2 + ...).
/// Converges whenever the receiving block is sub-stochastic with external
/// inflow; `terms` controls the truncation error ~ rho^terms.
inline Matrix limit_weights_series(const Matrix& t_sr, const Matrix& t_rr, int terms = 400) {
  Matrix sum = Matrix::Identity(t_rr.rows(), t_rr.cols());
  Matrix power = Matrix::Identity(t_rr.rows(), t_rr.cols());
  for (int i = 0; i < terms; ++i) {
    power = power * t_rr;
    sum += power;
  }
  return t_sr * sum;
}

/// Brute-force attainability decision for one receiving agent: does a cross
/// column exist that is strictly positive on every declared cross edge and
/// meets the required per-sub-network mass? Decided by phase-1 feasibility at
/// a small positive floor rather than by the characterization under test.
inline bool column_attainable_bruteforce(const weaknet::NetworkTopology& topology,
                                         weaknet::AgentId k, const Vector& v_col,
                                         double floor = 1e-7, double tol = 1e-9) {
  const int s_count = topology.num_sending_subnets();
  std::vector<weaknet::AgentId> senders;
  for (weaknet::AgentId from = 1; from <= topology.num_sending_agents(); ++from) {
    if (topology.has_edge(from, k)) {
      senders.push_back(from);
    }
  }
  // States of sub-networks with no edge into k must carry no mass at all.
  for (int s = 1; s <= s_count; ++s) {
    bool heard = false;
    for (weaknet::AgentId from : senders) {
      heard = heard || topology.subnet_of(from) == s;
    }
    if (!heard && std::abs(v_col(s - 1)) > tol) {
      return false;
    }
  }
  if (senders.empty()) {
    return true;  // all rows already checked to be zero
  }
  Matrix e = Matrix::Zero(s_count, static_cast<Index>(senders.size()));
  for (std::size_t j = 0; j < senders.size(); ++j) {
    e(topology.subnet_of(senders[j]) - 1, static_cast<Index>(j)) = 1.0;
  }
  // Strict positivity probed at a small floor: t = floor + y, y >= 0.
  Vector rhs = v_col - e * Vector::Constant(static_cast<Index>(senders.size()), floor);
  return linear_system_feasible(e, rhs, tol);
}

}  // namespace oracles
