#include "weaknet/limits.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace weaknet {

Matrix compute_w(const Matrix& t_sr, const Matrix& t_rr, const LimitOptions& options) {
  const Index n_gr = t_rr.rows();
  if (t_rr.cols() != n_gr) {
    throw input_error("receiving block must be square");
  }
  if (t_sr.cols() != n_gr) {
    throw input_error("cross block has " + std::to_string(t_sr.cols()) +
                      " columns but the receiving block has " + std::to_string(n_gr));
  }
  if (n_gr == 0) {
    return Matrix(t_sr.rows(), 0);
  }

  const Matrix m = Matrix::Identity(n_gr, n_gr) - t_rr;
  // Small systems: an SVD condition estimate is affordable and robust.
  Eigen::JacobiSVD<Matrix> svd(m);
  const Scalar smin = svd.singularValues().minCoeff();
  const Scalar smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0 || smax / smin > options.max_condition) {
    throw domain_error(
        "receiving block is effectively closed: I - T_RR is numerically singular "
        "(no external inflow reaches part of the receiving network)");
  }

  Eigen::PartialPivLU<Matrix> lu(m.transpose());
  Matrix w = lu.solve(t_sr.transpose()).transpose();

  for (Index k = 0; k < w.cols(); ++k) {
    const Scalar sum = w.col(k).sum();
    if (std::abs(sum - 1.0) > options.column_sum_tol) {
      std::ostringstream msg;
      msg << "limit column of receiving agent " << (k + 1) << " sums to " << sum
          << "; inputs are not a valid weak-graph pair";
      throw domain_error(msg.str());
    }
  }
  for (Index i = 0; i < w.rows(); ++i) {
    for (Index k = 0; k < w.cols(); ++k) {
      if (w(i, k) < 0.0) {
        if (w(i, k) < -options.clamp_tol) {
          std::ostringstream msg;
          msg << "limit weight (" << (i + 1) << ", " << (k + 1) << ") = " << w(i, k)
              << " is negative beyond round-off";
          throw domain_error(msg.str());
        }
        w(i, k) = 0.0;
      }
    }
  }
  return w;
}

Vector sending_limit(StateId state, const StateSpace& space, const NetworkTopology& topology) {
  if (state < 1 || state > space.num_states()) {
    throw input_error("state id " + std::to_string(state) + " out of range");
  }
  Vector limit = Vector::Zero(topology.num_sending_agents());
  for (SubnetId s = 1; s <= topology.num_sending_subnets(); ++s) {
    if (space.sending_true_state(s) == state) {
      for (Index n = 1; n <= topology.subnet_size(s); ++n) {
        limit(topology.agent_global_id(s, n) - 1) = 1.0;
      }
    }
  }
  return limit;
}

Matrix limiting_beliefs(const Matrix& w, const StateSpace& space,
                        const NetworkTopology& topology) {
  if (w.rows() != topology.num_sending_agents() || w.cols() != topology.num_receiving_agents()) {
    throw input_error("limit matrix shape does not match the topology");
  }
  Matrix beliefs = Matrix::Zero(topology.num_receiving_agents(), space.num_states());
  for (SubnetId s = 1; s <= topology.num_sending_subnets(); ++s) {
    const StateId theta = space.sending_true_state(s);
    const Index base = topology.agent_global_id(s, 1) - 1;
    const Index size = topology.subnet_size(s);
    beliefs.col(theta - 1) += w.middleRows(base, size).colwise().sum().transpose();
  }
  return beliefs;
}

Matrix expand_profile(const Matrix& q, const NetworkTopology& topology) {
  const int s_count = topology.num_sending_subnets();
  if (q.rows() != s_count || q.cols() != topology.num_receiving_agents()) {
    throw input_error("target profile must be S x N_gR");
  }
  Matrix full = Matrix::Zero(s_count, topology.num_agents());
  for (SubnetId s = 1; s <= s_count; ++s) {
    for (Index n = 1; n <= topology.subnet_size(s); ++n) {
      full(s - 1, topology.agent_global_id(s, n) - 1) = 1.0;
    }
  }
  full.rightCols(topology.num_receiving_agents()) = q;
  return full;
}

Scalar fixed_point_residual(const Matrix& a, const Matrix& q_full,
                            const NetworkTopology& topology) {
  const Index n = topology.num_agents();
  if (a.rows() != n || a.cols() != n) {
    throw input_error("combination matrix shape does not match the topology");
  }
  if (q_full.cols() != n || q_full.rows() != topology.num_sending_subnets()) {
    throw input_error("full profile must be S x N");
  }
  const Matrix residual = q_full * a - q_full;
  if (topology.num_receiving_agents() == 0) {
    return 0.0;
  }
  return residual.rightCols(topology.num_receiving_agents()).cwiseAbs().maxCoeff();
}

}  // namespace weaknet
