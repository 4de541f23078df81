#include "weaknet/likelihood.hpp"

#include <cmath>
#include <sstream>

namespace weaknet {

LikelihoodModel::LikelihoodModel(std::vector<Matrix> tables, Scalar row_sum_tol)
    : tables_(std::move(tables)) {
  if (tables_.empty()) {
    throw input_error("likelihood model needs at least one agent table");
  }
  num_states_ = tables_.front().rows();
  for (std::size_t agent = 0; agent < tables_.size(); ++agent) {
    const Matrix& table = tables_[agent];
    if (table.rows() != num_states_) {
      throw input_error("likelihood tables disagree on the number of states");
    }
    if (table.cols() < 2) {
      throw input_error("agent " + std::to_string(agent + 1) +
                        " needs at least a two-signal alphabet");
    }
    for (Index theta = 0; theta < table.rows(); ++theta) {
      const Scalar sum = table.row(theta).sum();
      if (std::abs(sum - 1.0) > row_sum_tol) {
        std::ostringstream msg;
        msg << "likelihood row (agent " << (agent + 1) << ", state " << (theta + 1)
            << ") sums to " << sum;
        throw input_error(msg.str());
      }
      for (Index z = 0; z < table.cols(); ++z) {
        const Scalar value = table(theta, z);
        if (!(value > 0.0) || !(value < 1.0)) {
          std::ostringstream msg;
          msg << "likelihood entry (agent " << (agent + 1) << ", state " << (theta + 1)
              << ", signal " << (z + 1) << ") = " << value << " is outside (0, 1)";
          throw input_error(msg.str());
        }
      }
    }
  }
}

LikelihoodModel LikelihoodModel::from_binary(const Matrix& p_first) {
  std::vector<Matrix> tables;
  tables.reserve(p_first.cols());
  for (Index agent = 0; agent < p_first.cols(); ++agent) {
    Matrix table(p_first.rows(), 2);
    table.col(0) = p_first.col(agent);
    table.col(1) = Vector::Ones(p_first.rows()) - p_first.col(agent);
    tables.push_back(std::move(table));
  }
  return LikelihoodModel(std::move(tables));
}

Index LikelihoodModel::alphabet_size(Index agent) const { return table(agent).cols(); }

const Matrix& LikelihoodModel::table(Index agent) const {
  if (agent < 0 || agent >= num_agents()) {
    throw input_error("agent position " + std::to_string(agent) + " out of range");
  }
  return tables_[static_cast<std::size_t>(agent)];
}

}  // namespace weaknet
