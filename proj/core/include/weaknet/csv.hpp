#pragma once

#include <string>
#include <vector>

#include "weaknet/simulation.hpp"
#include "weaknet/state_space.hpp"
#include "weaknet/types.hpp"

namespace weaknet {

/// Full-precision decimal rendering (%.17g): parses back to the same double,
/// so files written from equal values are byte-identical.
[[nodiscard]] std::string format_scalar(Scalar value);

/// Matrix as CSV text, row-major, full precision. `col_labels` (if non-empty)
/// becomes a leading "# ..." comment header, which numeric CSV readers
/// (including read_matrix_csv below) skip, so files round-trip cleanly even
/// when the labels are bare agent IDs.
[[nodiscard]] std::string matrix_to_csv(const Matrix& values,
                                        const std::vector<std::string>& col_labels = {});

void write_matrix_csv(const std::string& path, const Matrix& values,
                      const std::vector<std::string>& col_labels = {});

/// Numeric payload of a CSV file. Blank lines and '#' comment lines are
/// ignored; a first row whose leading cell is not a number is treated as a
/// header; a leading column of non-numeric cells is treated as row labels.
/// Ragged rows or non-numeric data cells raise input_error with file/line
/// diagnostics.
[[nodiscard]] Matrix read_matrix_csv(const std::string& path);

/// Column labels "first_id".."first_id+count-1" for agent-indexed matrices
/// (agent IDs are 1-based).
[[nodiscard]] std::vector<std::string> agent_labels(Index first_id, Index count);

/// Long-format belief trace: header "iteration,agent,state,belief", one row
/// per recorded (iteration, agent, state) triple, agents 1-based, states as
/// labels from the state space.
[[nodiscard]] std::string trace_to_csv(const Trace& trace, const StateSpace& space);

void write_trace_csv(const std::string& path, const Trace& trace, const StateSpace& space);

}  // namespace weaknet
