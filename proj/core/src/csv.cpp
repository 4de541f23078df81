#include "weaknet/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace weaknet {

namespace {

bool parse_scalar(const std::string& token, Scalar& out) {
  const char* begin = token.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  return *end == '\0';
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ' || cell.back() == '\t')) {
      cell.pop_back();
    }
    std::size_t start = 0;
    while (start < cell.size() && (cell[start] == ' ' || cell[start] == '\t')) ++start;
    cells.push_back(cell.substr(start));
  }
  return cells;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw input_error("cannot open '" + path + "' for writing");
  }
  out << text;
  if (!out) {
    throw input_error("failed while writing '" + path + "'");
  }
}

}  // namespace

std::string format_scalar(Scalar value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string matrix_to_csv(const Matrix& values, const std::vector<std::string>& col_labels) {
  if (!col_labels.empty() && static_cast<Index>(col_labels.size()) != values.cols()) {
    throw input_error("column label count does not match matrix width");
  }
  std::ostringstream out;
  if (!col_labels.empty()) {
    out << "# ";
    for (std::size_t j = 0; j < col_labels.size(); ++j) {
      if (j > 0) out << ',';
      out << col_labels[j];
    }
    out << '\n';
  }
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_scalar(values(i, j));
    }
    out << '\n';
  }
  return out.str();
}

void write_matrix_csv(const std::string& path, const Matrix& values,
                      const std::vector<std::string>& col_labels) {
  write_text_file(path, matrix_to_csv(values, col_labels));
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw input_error("cannot open '" + path + "'");
  }
  std::vector<std::vector<Scalar>> rows;
  bool row_labels = false;
  bool saw_first_line = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cells = split_line(line);
    bool blank = true;
    for (const auto& cell : cells) {
      if (!cell.empty()) blank = false;
    }
    if (blank || (!cells[0].empty() && cells[0][0] == '#')) continue;
    Scalar parsed = 0;
    const bool first_numeric = parse_scalar(cells[0], parsed);
    if (!saw_first_line) {
      saw_first_line = true;
      if (!first_numeric && cells.size() > 1) {
        Scalar rest = 0;
        bool any_numeric_tail = false;
        for (std::size_t j = 1; j < cells.size(); ++j) {
          if (parse_scalar(cells[j], rest)) any_numeric_tail = true;
        }
        // Mixed first row (label then numbers) is a labelled data row, not a
        // header; an all-text first row is a header.
        if (!any_numeric_tail) continue;
      }
    }
    std::size_t start = 0;
    if (rows.empty()) {
      row_labels = !first_numeric;
    }
    if (row_labels) start = 1;
    if (cells.size() <= start) {
      throw input_error(path + ":" + std::to_string(line_no) + ": row has no numeric cells");
    }
    std::vector<Scalar> row;
    row.reserve(cells.size() - start);
    for (std::size_t j = start; j < cells.size(); ++j) {
      Scalar value = 0;
      if (!parse_scalar(cells[j], value)) {
        throw input_error(path + ":" + std::to_string(line_no) + ": cell '" + cells[j] +
                          "' is not a number");
      }
      row.push_back(value);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw input_error(path + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(rows.front().size()) + " columns, found " +
                        std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw input_error(path + ": no numeric rows found");
  }
  Matrix values(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return values;
}

std::vector<std::string> agent_labels(Index first_id, Index count) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    labels.push_back(std::to_string(first_id + i));
  }
  return labels;
}

std::string trace_to_csv(const Trace& trace, const StateSpace& space) {
  std::ostringstream out;
  out << "iteration,agent,state,belief\n";
  for (std::size_t t = 0; t < trace.iterations.size(); ++t) {
    const Matrix& beliefs = trace.beliefs[t];
    for (Index agent = 0; agent < beliefs.rows(); ++agent) {
      for (Index state = 0; state < beliefs.cols(); ++state) {
        out << trace.iterations[t] << ',' << (agent + 1) << ','
            << space.label(static_cast<StateId>(state + 1)) << ','
            << format_scalar(beliefs(agent, state)) << '\n';
      }
    }
  }
  return out.str();
}

void write_trace_csv(const std::string& path, const Trace& trace, const StateSpace& space) {
  write_text_file(path, trace_to_csv(trace, space));
}

}  // namespace weaknet
