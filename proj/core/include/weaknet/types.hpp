#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace weaknet {

using Scalar = double;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
using IntMatrix = Eigen::MatrixXi;
using Index = Eigen::Index;

/// Public identifiers (agents, sub-networks, states) are 1-based everywhere a
/// human sees them: file formats, reports, CLI output. Internal storage and
/// Eigen indexing are 0-based; struct fields named *_id carry the 1-based form.
using AgentId = int;
using SubnetId = int;
using StateId = int;

/// Malformed input: bad file, inconsistent dimensions, out-of-range ids.
/// The CLI maps this to exit code 2.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/// Structurally valid input with no solution in the model's domain: a
/// near-singular receiving block, unattainable targets, empty polytopes.
/// The CLI maps this to exit code 1.
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace weaknet
