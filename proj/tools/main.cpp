// weaknet: command-line surface for analyzing and steering opinion limits
// over weakly-connected networks.
//
// Commands: validate | attainable | design-tsr | design-joint | simulate |
// verify. Every command prints a JSON report to stdout, writes its artifacts
// plus a manifest.json into the output directory, and exits with 0 (success),
// 1 (domain infeasibility/violation), or 2 (input error).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "weaknet/config.hpp"
#include "weaknet/csv.hpp"
#include "weaknet/joint_design.hpp"
#include "weaknet/likelihood.hpp"
#include "weaknet/limits.hpp"
#include "weaknet/manifest.hpp"
#include "weaknet/network_io.hpp"
#include "weaknet/simulation.hpp"
#include "weaknet/state_space.hpp"
#include "weaknet/structure.hpp"
#include "weaknet/topology.hpp"
#include "weaknet/tsr_design.hpp"
#include "weaknet/validation.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace weaknet;

constexpr const char* k_version = "0.1.0";

// ---------------------------------------------------------------------------
// Option plumbing: config file < flag; flags are detected via CLI11 counts.

struct CommonOpts {
  std::string network_path;
  std::string config_path;
  std::string out_dir;
  ConfigMap config;

  void load_config() {
    if (!config_path.empty()) config = ConfigMap::load(config_path);
  }

  /// --output-dir flag beats [output] dir beats $WEAKNET_OUTPUT_DIR beats ".".
  [[nodiscard]] std::string resolve_out_dir() const {
    if (!out_dir.empty()) return out_dir;
    if (const auto dir = config.get_string("output.dir")) return *dir;
    if (const char* env = std::getenv("WEAKNET_OUTPUT_DIR"); env != nullptr && *env != '\0') {
      return env;
    }
    return ".";
  }
};

Scalar resolve_scalar(const CLI::App& cmd, const std::string& flag, Scalar flag_value,
                      const ConfigMap& config, const std::string& key, Scalar fallback) {
  if (cmd.count(flag) > 0) return flag_value;
  if (const auto value = config.get_scalar(key)) return *value;
  return fallback;
}

long long resolve_int(const CLI::App& cmd, const std::string& flag, long long flag_value,
                      const ConfigMap& config, const std::string& key, long long fallback) {
  if (cmd.count(flag) > 0) return flag_value;
  if (const auto value = config.get_int(key)) return *value;
  return fallback;
}

bool resolve_bool(const CLI::App& cmd, const std::string& flag, bool flag_value,
                  const ConfigMap& config, const std::string& key, bool fallback) {
  if (cmd.count(flag) > 0) return flag_value;
  if (const auto value = config.get_bool(key)) return *value;
  return fallback;
}

// ---------------------------------------------------------------------------
// Output helpers.

fs::path prepare_out_dir(const std::string& dir) {
  fs::path path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) {
    throw input_error("cannot create output directory '" + dir + "': " + ec.message());
  }
  return path;
}

void emit(const ordered_json& report, const fs::path& out_dir, const RunManifest& manifest) {
  std::ofstream report_file(out_dir / "report.json", std::ios::binary);
  if (!report_file) {
    throw input_error("cannot write " + (out_dir / "report.json").string());
  }
  report_file << report.dump(2) << '\n';
  manifest.write((out_dir / "manifest.json").string());
  std::cout << report.dump(2) << std::endl;
}

std::string scalar_option(Scalar value) { return format_scalar(value); }

// ---------------------------------------------------------------------------
// Shared loading logic.

Matrix load_profile(const std::string& path, const NetworkTopology& topology) {
  const Matrix q = read_matrix_csv(path);
  if (q.rows() != topology.num_sending_subnets() || q.cols() != topology.num_receiving_agents()) {
    throw input_error(path + ": target profile must be " +
                      std::to_string(topology.num_sending_subnets()) + " x " +
                      std::to_string(topology.num_receiving_agents()) + " (sub-networks x "
                      "receiving agents), found " + std::to_string(q.rows()) + " x " +
                      std::to_string(q.cols()));
  }
  return q;
}

Matrix require_weights(const NetworkFile& file, const std::string& path) {
  if (!file.has_weights) {
    throw input_error(path + ": this command needs combination weights in the network file");
  }
  return file.weights;
}

LikelihoodModel load_likelihoods(const std::vector<std::string>& paths,
                                 const NetworkTopology& topology, Index num_states) {
  if (static_cast<int>(paths.size()) != topology.num_subnets()) {
    throw input_error("expected one likelihood CSV per sub-network (" +
                      std::to_string(topology.num_subnets()) + "), got " +
                      std::to_string(paths.size()));
  }
  Matrix p_first(num_states, topology.num_agents());
  Index column = 0;
  for (SubnetId s = 1; s <= topology.num_subnets(); ++s) {
    const Matrix block = read_matrix_csv(paths[static_cast<std::size_t>(s - 1)]);
    if (block.rows() != num_states || block.cols() != topology.subnet_size(s)) {
      throw input_error(paths[static_cast<std::size_t>(s - 1)] + ": expected " +
                        std::to_string(num_states) + " x " +
                        std::to_string(topology.subnet_size(s)) +
                        " (states x sub-network agents), found " + std::to_string(block.rows()) +
                        " x " + std::to_string(block.cols()));
    }
    p_first.middleCols(column, block.cols()) = block;
    column += block.cols();
  }
  return LikelihoodModel::from_binary(p_first);
}

void check_left_stochastic(const Matrix& a, const char* what) {
  for (Index k = 0; k < a.cols(); ++k) {
    if (a.col(k).minCoeff() < -1e-12) {
      throw input_error(std::string(what) + ": column " + std::to_string(k + 1) +
                        " has a negative weight");
    }
    if (std::abs(a.col(k).sum() - 1.0) > 1e-9) {
      throw input_error(std::string(what) + ": column " + std::to_string(k + 1) +
                        " sums to " + format_scalar(a.col(k).sum()) + ", not 1");
    }
  }
}

Matrix load_block_csv(const std::string& path, Index rows, Index cols, const char* what) {
  const Matrix block = read_matrix_csv(path);
  if (block.rows() != rows || block.cols() != cols) {
    throw input_error(path + ": " + what + " must be " + std::to_string(rows) + " x " +
                      std::to_string(cols) + ", found " + std::to_string(block.rows()) + " x " +
                      std::to_string(block.cols()));
  }
  return block;
}

// ---------------------------------------------------------------------------
// JSON shaping.

ordered_json attain_violations_json(const std::vector<AttainabilityViolation>& violations) {
  ordered_json list = ordered_json::array();
  for (const auto& violation : violations) {
    ordered_json node;
    node["agent"] = violation.agent_id;
    node["subnet"] = violation.subnet_id;
    node["kind"] = to_string(violation.kind);
    node["value"] = violation.value;
    list.push_back(std::move(node));
  }
  return list;
}

ordered_json constraint_violations_json(const std::vector<ConstraintReport>& violations) {
  ordered_json list = ordered_json::array();
  for (const auto& violation : violations) {
    ordered_json node;
    node["kind"] = to_string(violation.kind);
    if (violation.subnet_id > 0) node["subnet"] = violation.subnet_id;
    if (violation.var >= 0) node["var"] = violation.var + 1;
    node["lhs"] = violation.lhs;
    node["rhs"] = violation.rhs;
    list.push_back(std::move(node));
  }
  return list;
}

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Commands.

struct ValidateOpts {
  CommonOpts common;
  Scalar stochastic_tol = 1e-12;
};

int run_validate(const CLI::App& cmd, ValidateOpts& opts) {
  opts.common.load_config();
  const NetworkFile file = load_network(opts.common.network_path);
  const Matrix weights = require_weights(file, opts.common.network_path);

  ValidationConfig config;
  config.stochastic_tol =
      resolve_scalar(cmd, "--stochastic-tol", opts.stochastic_tol, opts.common.config,
                     "validation.stochastic_tol", config.stochastic_tol);

  const ValidationReport report = validate_network(file.topology, weights, config);

  ordered_json out;
  out["command"] = "validate";
  out["valid"] = report.valid();
  ordered_json violations = ordered_json::array();
  for (const auto& violation : report.violations) {
    ordered_json node;
    node["code"] = to_string(violation.code);
    node["message"] = violation.message;
    if (violation.agent_id > 0) node["agent"] = violation.agent_id;
    if (violation.subnet_id > 0) node["subnet"] = violation.subnet_id;
    if (violation.from_id > 0) node["from"] = violation.from_id;
    if (violation.to_id > 0) node["to"] = violation.to_id;
    violations.push_back(std::move(node));
  }
  out["violations"] = std::move(violations);
  ordered_json warnings = ordered_json::array();
  for (const auto& warning : report.warnings) {
    ordered_json node;
    node["code"] = to_string(warning.code);
    node["message"] = warning.message;
    node["from"] = warning.from_id;
    node["to"] = warning.to_id;
    warnings.push_back(std::move(node));
  }
  out["warnings"] = std::move(warnings);

  RunManifest manifest{"validate",
                       {opts.common.network_path},
                       {{"stochastic_tol", scalar_option(config.stochastic_tol)}},
                       k_version};
  emit(out, prepare_out_dir(opts.common.resolve_out_dir()), manifest);
  return report.valid() ? 0 : 1;
}

struct AttainableOpts {
  CommonOpts common;
  std::string q_path;
  Scalar tol_zero = 1e-9;
  Scalar tol_pos = 1e-9;
};

int run_attainable(const CLI::App& cmd, AttainableOpts& opts) {
  opts.common.load_config();
  const NetworkFile file = load_network(opts.common.network_path);
  const Matrix weights = require_weights(file, opts.common.network_path);
  const Matrix q = load_profile(opts.q_path, file.topology);

  AttainabilityTols tols;
  tols.tol_zero = resolve_scalar(cmd, "--zero-tol", opts.tol_zero, opts.common.config,
                                 "attainability.zero_tol", tols.tol_zero);
  tols.tol_pos = resolve_scalar(cmd, "--pos-tol", opts.tol_pos, opts.common.config,
                                "attainability.pos_tol", tols.tol_pos);

  const Index n_gs = file.topology.num_sending_agents();
  const Matrix t_rr = weights.bottomRightCorner(file.topology.num_receiving_agents(),
                                                file.topology.num_receiving_agents());
  const Matrix v = compute_v(q, t_rr);
  const IntMatrix c = build_c(file.topology);
  const AttainabilityReport report = check_attainable(v, c, tols, n_gs);

  const fs::path out_dir = prepare_out_dir(opts.common.resolve_out_dir());
  write_matrix_csv((out_dir / "V.csv").string(), v,
                   agent_labels(n_gs + 1, file.topology.num_receiving_agents()));

  ordered_json out;
  out["command"] = "attainable";
  out["attainable"] = report.attainable;
  out["violations"] = attain_violations_json(report.violations);
  out["outputs"] = {{"v", (out_dir / "V.csv").string()}};

  RunManifest manifest{"attainable",
                       {opts.common.network_path, opts.q_path},
                       {{"zero_tol", scalar_option(tols.tol_zero)},
                        {"pos_tol", scalar_option(tols.tol_pos)}},
                       k_version};
  emit(out, out_dir, manifest);
  return report.attainable ? 0 : 1;
}

struct DesignTsrOpts {
  CommonOpts common;
  std::string q_path;
  std::string y_policy = "zero";
  Scalar tol_zero = 1e-9;
  Scalar tol_pos = 1e-9;
};

TsrPolicy load_y_policy(const std::string& spec) {
  TsrPolicy policy;
  if (spec == "zero") return policy;
  std::ifstream in(spec, std::ios::binary);
  if (!in) {
    throw input_error("y policy must be 'zero' or a readable JSON file, got '" + spec + "'");
  }
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& error) {
    throw input_error(spec + ": not valid JSON (" + std::string(error.what()) + ")");
  }
  if (!root.is_object()) {
    throw input_error(spec + ": expected an object mapping agent id to y vector");
  }
  for (const auto& [key, value] : root.items()) {
    AgentId agent = 0;
    try {
      agent = std::stoi(key);
    } catch (const std::exception&) {
      throw input_error(spec + ": agent key '" + key + "' is not an integer");
    }
    if (!value.is_array()) {
      throw input_error(spec + ": y for agent " + key + " must be an array");
    }
    Vector y(static_cast<Index>(value.size()));
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (!value[i].is_number()) {
        throw input_error(spec + ": y for agent " + key + " must contain numbers");
      }
      y(static_cast<Index>(i)) = value[i].get<Scalar>();
    }
    policy.y[agent] = std::move(y);
  }
  return policy;
}

int run_design_tsr(const CLI::App& cmd, DesignTsrOpts& opts) {
  opts.common.load_config();
  const NetworkFile file = load_network(opts.common.network_path);
  const Matrix weights = require_weights(file, opts.common.network_path);
  const Matrix q = load_profile(opts.q_path, file.topology);

  AttainabilityTols tols;
  tols.tol_zero = resolve_scalar(cmd, "--zero-tol", opts.tol_zero, opts.common.config,
                                 "attainability.zero_tol", tols.tol_zero);
  tols.tol_pos = resolve_scalar(cmd, "--pos-tol", opts.tol_pos, opts.common.config,
                                "attainability.pos_tol", tols.tol_pos);
  const std::string y_policy_spec = [&] {
    if (cmd.count("--y-policy") > 0) return opts.y_policy;
    if (const auto value = opts.common.config.get_string("design.y_policy")) return *value;
    return opts.y_policy;
  }();
  const TsrPolicy policy = load_y_policy(y_policy_spec);

  const Index n_gr = file.topology.num_receiving_agents();
  const Matrix t_rr = weights.bottomRightCorner(n_gr, n_gr);
  const TsrDesign design = design_tsr(file.topology, q, t_rr, policy, tols);

  const fs::path out_dir = prepare_out_dir(opts.common.resolve_out_dir());
  ordered_json out;
  out["command"] = "design-tsr";
  out["attainable"] = design.attainability.attainable;
  out["violations"] = attain_violations_json(design.attainability.violations);
  if (design.attainability.attainable) {
    write_matrix_csv((out_dir / "T_SR.csv").string(), design.t_sr,
                     agent_labels(file.topology.num_sending_agents() + 1, n_gr));
    out["outputs"] = {{"t_sr", (out_dir / "T_SR.csv").string()}};
  }

  RunManifest manifest{"design-tsr",
                       {opts.common.network_path, opts.q_path},
                       {{"zero_tol", scalar_option(tols.tol_zero)},
                        {"pos_tol", scalar_option(tols.tol_pos)},
                        {"y_policy", y_policy_spec}},
                       k_version};
  emit(out, out_dir, manifest);
  return design.attainability.attainable ? 0 : 1;
}

struct DesignJointOpts {
  CommonOpts common;
  std::string q_path;
  Scalar epsilon = 0;
  Scalar epsilon_cap = 0.01;
  std::vector<std::string> epsilon_agents;
  bool fallback_ls = false;
  std::string overrides_path;
};

JointOverrides load_overrides(const std::string& path) {
  JointOverrides overrides;
  if (path.empty()) return overrides;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw input_error("cannot open '" + path + "'");
  }
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& error) {
    throw input_error(path + ": not valid JSON (" + std::string(error.what()) + ")");
  }
  if (!root.is_object()) {
    throw input_error(path + ": expected an object keyed by agent id");
  }
  const auto read_vector = [&](const nlohmann::json& node, const std::string& what) {
    if (!node.is_array()) {
      throw input_error(path + ": " + what + " must be an array of numbers");
    }
    Vector v(static_cast<Index>(node.size()));
    for (std::size_t i = 0; i < node.size(); ++i) {
      if (!node[i].is_number()) {
        throw input_error(path + ": " + what + " must be an array of numbers");
      }
      v(static_cast<Index>(i)) = node[i].get<Scalar>();
    }
    return v;
  };
  for (const auto& [key, value] : root.items()) {
    AgentId agent = 0;
    try {
      agent = std::stoi(key);
    } catch (const std::exception&) {
      throw input_error(path + ": agent key '" + key + "' is not an integer");
    }
    if (!value.is_object()) {
      throw input_error(path + ": overrides for agent " + key + " must be an object");
    }
    if (value.contains("t_rr")) {
      overrides.t_rr[agent] = read_vector(value["t_rr"], "t_rr for agent " + key);
    }
    if (value.contains("t_sr")) {
      overrides.t_sr[agent] = read_vector(value["t_sr"], "t_sr for agent " + key);
    }
  }
  return overrides;
}

std::map<AgentId, Scalar> parse_epsilon_agents(const std::vector<std::string>& entries) {
  std::map<AgentId, Scalar> out;
  for (const std::string& entry : entries) {
    const auto equals = entry.find('=');
    if (equals == std::string::npos) {
      throw input_error("--epsilon-agent expects id=value, got '" + entry + "'");
    }
    try {
      std::size_t used = 0;
      const int agent = std::stoi(entry.substr(0, equals), &used);
      if (used != equals || agent < 1) throw std::invalid_argument("agent");
      const std::string value_text = entry.substr(equals + 1);
      const Scalar value = std::stod(value_text, &used);
      if (used != value_text.size()) throw std::invalid_argument("value");
      out[agent] = value;
    } catch (const std::exception&) {
      throw input_error("--epsilon-agent expects id=value, got '" + entry + "'");
    }
  }
  return out;
}

int run_design_joint(const CLI::App& cmd, DesignJointOpts& opts) {
  opts.common.load_config();
  const NetworkFile file = load_network(opts.common.network_path);
  const Matrix q = load_profile(opts.q_path, file.topology);

  JointPolicy policy;
  policy.epsilon.cap = resolve_scalar(cmd, "--epsilon-cap", opts.epsilon_cap, opts.common.config,
                                      "design.epsilon_cap", policy.epsilon.cap);
  if (cmd.count("--epsilon") > 0) {
    policy.epsilon.global = opts.epsilon;
  } else if (const auto value = opts.common.config.get_scalar("design.epsilon")) {
    policy.epsilon.global = *value;
  }
  policy.epsilon.per_agent = parse_epsilon_agents(opts.epsilon_agents);
  policy.fallback_ls = resolve_bool(cmd, "--fallback-ls", opts.fallback_ls, opts.common.config,
                                    "design.fallback_ls", false);
  policy.overrides = load_overrides(opts.overrides_path);

  const JointDesignResult result = joint_design(file.topology, q, policy);

  const fs::path out_dir = prepare_out_dir(opts.common.resolve_out_dir());
  const Index n_gs = file.topology.num_sending_agents();
  const Index n_gr = file.topology.num_receiving_agents();

  ordered_json out;
  out["command"] = "design-joint";
  out["overall"] = to_string(result.overall);
  out["in_path_preserved"] = result.in_path_preserved;
  ordered_json per_agent = ordered_json::array();
  for (const auto& agent : result.per_agent) {
    ordered_json node;
    node["id"] = agent.agent_id;
    node["case"] = to_string(agent.agent_case);
    node["status"] = to_string(agent.status);
    node["effective_status"] = to_string(agent.effective_status);
    node["residual"] = agent.residual;
    node["epsilon"] = agent.epsilon;
    if (agent.epsilon_bound) node["epsilon_bound"] = *agent.epsilon_bound;
    node["predicted_deviation"] = agent.predicted_deviation;
    node["violations"] = constraint_violations_json(agent.violations);
    per_agent.push_back(std::move(node));
  }
  out["per_agent"] = std::move(per_agent);

  if (result.overall != DesignStatus::infeasible) {
    write_matrix_csv((out_dir / "T_SR.csv").string(), result.t_sr, agent_labels(n_gs + 1, n_gr));
    write_matrix_csv((out_dir / "T_RR.csv").string(), result.t_rr, agent_labels(n_gs + 1, n_gr));
    write_matrix_csv((out_dir / "predicted.csv").string(), result.predicted,
                     agent_labels(n_gs + 1, n_gr));
    out["outputs"] = {{"t_sr", (out_dir / "T_SR.csv").string()},
                      {"t_rr", (out_dir / "T_RR.csv").string()},
                      {"predicted", (out_dir / "predicted.csv").string()}};
  }

  std::map<std::string, std::string> options;
  options["epsilon_cap"] = scalar_option(policy.epsilon.cap);
  options["epsilon"] = policy.epsilon.global ? scalar_option(*policy.epsilon.global) : "auto";
  for (const auto& [agent, value] : policy.epsilon.per_agent) {
    options["epsilon_agent_" + std::to_string(agent)] = scalar_option(value);
  }
  options["fallback_ls"] = policy.fallback_ls ? "true" : "false";
  if (!opts.overrides_path.empty()) options["overrides"] = opts.overrides_path;
  std::vector<std::string> inputs{opts.common.network_path, opts.q_path};
  if (!opts.overrides_path.empty()) inputs.push_back(opts.overrides_path);
  RunManifest manifest{"design-joint", inputs, options, k_version};
  emit(out, out_dir, manifest);
  return result.overall != DesignStatus::infeasible ? 0 : 1;
}

struct SimulateOpts {
  CommonOpts common;
  std::vector<std::string> likelihood_paths;
  std::string tsr_path;
  std::string trr_path;
  std::string initial_path;
  long long iterations = 7000;
  long long seed = 0;
  long long stride = 10;
  bool check_invariants = false;
};

Matrix assemble_matrix(const NetworkFile& file, const std::string& network_path,
                       const std::string& tsr_path, const std::string& trr_path) {
  const Index n_gs = file.topology.num_sending_agents();
  const Index n_gr = file.topology.num_receiving_agents();
  Matrix a = file.has_weights ? file.weights : Matrix::Zero(n_gs + n_gr, n_gs + n_gr);
  if (!file.has_weights && (tsr_path.empty() || trr_path.empty() || n_gs == 0)) {
    throw input_error(network_path +
                      ": network file carries no weights; supply them or pass --tsr/--trr");
  }
  if (!tsr_path.empty()) {
    a.topRightCorner(n_gs, n_gr) = load_block_csv(tsr_path, n_gs, n_gr, "cross block");
  }
  if (!trr_path.empty()) {
    a.bottomRightCorner(n_gr, n_gr) = load_block_csv(trr_path, n_gr, n_gr, "receiving block");
  }
  return a;
}

int run_simulate(const CLI::App& cmd, SimulateOpts& opts) {
  opts.common.load_config();
  const NetworkFile file = load_network(opts.common.network_path);
  const StateSpace space = file.state_space();
  const Matrix a = assemble_matrix(file, opts.common.network_path, opts.tsr_path, opts.trr_path);
  check_left_stochastic(a, "assembled combination matrix");
  const LikelihoodModel likelihoods =
      load_likelihoods(opts.likelihood_paths, file.topology, space.num_states());

  SimConfig config;
  config.iterations = resolve_int(cmd, "--iters", opts.iterations, opts.common.config,
                                  "simulation.iterations", 7000);
  config.seed = static_cast<std::uint64_t>(
      resolve_int(cmd, "--seed", opts.seed, opts.common.config, "simulation.seed", 0));
  config.trace_stride =
      resolve_int(cmd, "--stride", opts.stride, opts.common.config, "simulation.stride", 10);
  config.check_invariants = opts.check_invariants;
  if (!opts.initial_path.empty()) {
    config.initial = read_matrix_csv(opts.initial_path);
  }

  const Trace trace = run_simulation(a, likelihoods, file.topology, config);

  const fs::path out_dir = prepare_out_dir(opts.common.resolve_out_dir());
  write_trace_csv((out_dir / "trace.csv").string(), trace, space);

  ordered_json out;
  out["command"] = "simulate";
  out["iterations"] = config.iterations;
  out["seed"] = config.seed;
  out["stride"] = config.trace_stride;
  out["recorded"] = trace.iterations.size();
  out["final_beliefs"] = matrix_json(trace.final_beliefs());
  out["outputs"] = {{"trace", (out_dir / "trace.csv").string()}};

  std::map<std::string, std::string> options{
      {"iterations", std::to_string(config.iterations)},
      {"seed", std::to_string(config.seed)},
      {"stride", std::to_string(config.trace_stride)},
  };
  std::vector<std::string> inputs{opts.common.network_path};
  inputs.insert(inputs.end(), opts.likelihood_paths.begin(), opts.likelihood_paths.end());
  if (!opts.tsr_path.empty()) inputs.push_back(opts.tsr_path);
  if (!opts.trr_path.empty()) inputs.push_back(opts.trr_path);
  if (!opts.initial_path.empty()) inputs.push_back(opts.initial_path);
  RunManifest manifest{"simulate", inputs, options, k_version};
  emit(out, out_dir, manifest);
  return 0;
}

struct VerifyOpts {
  CommonOpts common;
  std::string q_path;
  std::vector<std::string> likelihood_paths;
  std::string tsr_path;
  std::string trr_path;
  long long iterations = 7000;
  long long seed = 0;
  long long stride = 10;
  long long window = 500;
};

int run_verify(const CLI::App& cmd, VerifyOpts& opts) {
  opts.common.load_config();
  const NetworkFile file = load_network(opts.common.network_path);
  const StateSpace space = file.state_space();
  const Matrix q = load_profile(opts.q_path, file.topology);
  const Index n_gs = file.topology.num_sending_agents();
  const Index n_gr = file.topology.num_receiving_agents();

  Matrix a;
  if (opts.tsr_path.empty() && opts.trr_path.empty()) {
    a = require_weights(file, opts.common.network_path);
  } else if (!opts.tsr_path.empty() && !opts.trr_path.empty()) {
    a = assemble_matrix(file, opts.common.network_path, opts.tsr_path, opts.trr_path);
  } else {
    throw input_error("--tsr and --trr must be given together");
  }

  SimConfig config;
  config.iterations =
      resolve_int(cmd, "--iters", opts.iterations, opts.common.config, "simulation.iterations",
                  7000);
  config.seed = static_cast<std::uint64_t>(
      resolve_int(cmd, "--seed", opts.seed, opts.common.config, "simulation.seed", 0));
  config.trace_stride =
      resolve_int(cmd, "--stride", opts.stride, opts.common.config, "simulation.stride", 10);
  config.averaging_window =
      resolve_int(cmd, "--window", opts.window, opts.common.config, "simulation.window", 500);

  std::optional<LikelihoodModel> likelihoods;
  if (!opts.likelihood_paths.empty()) {
    check_left_stochastic(a, "assembled combination matrix");
    likelihoods = load_likelihoods(opts.likelihood_paths, file.topology, space.num_states());
  }

  const VerificationReport report = verify_design(
      file.topology, space, a, q, likelihoods ? &*likelihoods : nullptr, config);

  const fs::path out_dir = prepare_out_dir(opts.common.resolve_out_dir());
  write_matrix_csv((out_dir / "W.csv").string(), report.w, agent_labels(n_gs + 1, n_gr));
  write_matrix_csv((out_dir / "beliefs.csv").string(), report.analytic, space.labels());

  ordered_json out;
  out["command"] = "verify";
  out["max_analytic_deviation"] = report.max_analytic_deviation;
  ordered_json block_sums = ordered_json::array();
  for (Index k = 0; k < n_gr; ++k) {
    ordered_json node;
    node["agent"] = n_gs + k + 1;
    ordered_json sums = ordered_json::array();
    for (SubnetId s = 1; s <= file.topology.num_sending_subnets(); ++s) {
      sums.push_back(report.analytic(k, space.sending_true_state(s) - 1));
    }
    node["sums"] = std::move(sums);
    block_sums.push_back(std::move(node));
  }
  out["block_sums"] = std::move(block_sums);
  out["has_empirical"] = report.has_empirical;
  ordered_json outputs;
  outputs["w"] = (out_dir / "W.csv").string();
  outputs["beliefs"] = (out_dir / "beliefs.csv").string();
  if (report.has_empirical) {
    out["max_empirical_deviation"] = report.max_empirical_deviation;
    write_matrix_csv((out_dir / "empirical.csv").string(), report.empirical, space.labels());
    outputs["empirical"] = (out_dir / "empirical.csv").string();
  }
  out["outputs"] = std::move(outputs);

  std::map<std::string, std::string> options;
  if (!opts.likelihood_paths.empty()) {
    options["iterations"] = std::to_string(config.iterations);
    options["seed"] = std::to_string(config.seed);
    options["stride"] = std::to_string(config.trace_stride);
    options["window"] = std::to_string(config.averaging_window);
  }
  std::vector<std::string> inputs{opts.common.network_path, opts.q_path};
  if (!opts.tsr_path.empty()) inputs.push_back(opts.tsr_path);
  if (!opts.trr_path.empty()) inputs.push_back(opts.trr_path);
  inputs.insert(inputs.end(), opts.likelihood_paths.begin(), opts.likelihood_paths.end());
  RunManifest manifest{"verify", inputs, options, k_version};
  emit(out, out_dir, manifest);
  return 0;
}

void add_common(CLI::App* cmd, CommonOpts& common) {
  cmd->add_option("network", common.network_path, "Network description (JSON)")
      ->required();
  cmd->add_option("--config", common.config_path, "TOML-style config file (flags win)");
  cmd->add_option("-o,--output-dir", common.out_dir,
                  "Output directory (default: $WEAKNET_OUTPUT_DIR or '.')");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opinion-limit analysis and design over weakly-connected networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", k_version);

  ValidateOpts validate_opts;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a weighted network against the model contract");
  add_common(validate_cmd, validate_opts.common);
  validate_cmd->add_option("--stochastic-tol", validate_opts.stochastic_tol,
                           "Column-sum tolerance (default 1e-12)");

  AttainableOpts attainable_opts;
  CLI::App* attainable_cmd =
      app.add_subcommand("attainable", "Decide whether a target profile is attainable");
  add_common(attainable_cmd, attainable_opts.common);
  attainable_cmd->add_option("q", attainable_opts.q_path, "Target profile CSV (sub-networks x "
                             "receiving agents)")->required();
  attainable_cmd->add_option("--zero-tol", attainable_opts.tol_zero,
                             "Magnitudes below this count as zero (default 1e-9)");
  attainable_cmd->add_option("--pos-tol", attainable_opts.tol_pos,
                             "Required-positive floor (default 1e-9)");

  DesignTsrOpts design_tsr_opts;
  CLI::App* design_tsr_cmd =
      app.add_subcommand("design-tsr", "Design the cross block for a fixed receiving block");
  add_common(design_tsr_cmd, design_tsr_opts.common);
  design_tsr_cmd->add_option("q", design_tsr_opts.q_path, "Target profile CSV")->required();
  design_tsr_cmd->add_option("--y-policy", design_tsr_opts.y_policy,
                             "'zero' or a JSON file of per-agent y vectors (default zero)");
  design_tsr_cmd->add_option("--zero-tol", design_tsr_opts.tol_zero,
                             "Magnitudes below this count as zero (default 1e-9)");
  design_tsr_cmd->add_option("--pos-tol", design_tsr_opts.tol_pos,
                             "Required-positive floor (default 1e-9)");

  DesignJointOpts design_joint_opts;
  CLI::App* design_joint_cmd =
      app.add_subcommand("design-joint", "Design cross and receiving blocks together");
  add_common(design_joint_cmd, design_joint_opts.common);
  design_joint_cmd->add_option("q", design_joint_opts.q_path, "Target profile CSV")->required();
  design_joint_cmd->add_option("--epsilon", design_joint_opts.epsilon,
                               "Strict-positivity floor for receiving weights");
  design_joint_cmd->add_option("--epsilon-cap", design_joint_opts.epsilon_cap,
                               "Cap for the automatic floor (default 0.01)");
  design_joint_cmd->add_option("--epsilon-agent", design_joint_opts.epsilon_agents,
                               "Per-agent floor as id=value (repeatable)");
  design_joint_cmd->add_flag("--fallback-ls", design_joint_opts.fallback_ls,
                             "Fall back to least squares when a column is infeasible");
  design_joint_cmd->add_option("--overrides", design_joint_opts.overrides_path,
                               "JSON file of per-agent t_rr / t_sr values");

  SimulateOpts simulate_opts;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Run the learn-then-combine recursion and record a trace");
  add_common(simulate_cmd, simulate_opts.common);
  simulate_cmd->add_option("likelihoods", simulate_opts.likelihood_paths,
                           "One CSV per sub-network: P(first signal | state), states x agents")
      ->required();
  simulate_cmd->add_option("--tsr", simulate_opts.tsr_path, "Replace the cross block (CSV)");
  simulate_cmd->add_option("--trr", simulate_opts.trr_path, "Replace the receiving block (CSV)");
  simulate_cmd->add_option("--initial", simulate_opts.initial_path,
                           "Initial beliefs CSV (agents x states; default uniform)");
  simulate_cmd->add_option("--iters", simulate_opts.iterations, "Iterations (default 7000)");
  simulate_cmd->add_option("--seed", simulate_opts.seed, "Run seed (default 0)");
  simulate_cmd->add_option("--stride", simulate_opts.stride, "Trace stride (default 10)");
  simulate_cmd->add_flag("--check-invariants", simulate_opts.check_invariants,
                         "Re-check belief rows every iteration");

  VerifyOpts verify_opts;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Compare a design's implied and simulated limits against its target");
  add_common(verify_cmd, verify_opts.common);
  verify_cmd->add_option("q", verify_opts.q_path, "Target profile CSV")->required();
  verify_cmd->add_option("likelihoods", verify_opts.likelihood_paths,
                         "Optional per-sub-network likelihood CSVs (enables the empirical check)");
  verify_cmd->add_option("--tsr", verify_opts.tsr_path, "Cross block CSV (with --trr)");
  verify_cmd->add_option("--trr", verify_opts.trr_path, "Receiving block CSV (with --tsr)");
  verify_cmd->add_option("--iters", verify_opts.iterations, "Iterations (default 7000)");
  verify_cmd->add_option("--seed", verify_opts.seed, "Run seed (default 0)");
  verify_cmd->add_option("--stride", verify_opts.stride, "Trace stride (default 10)");
  verify_cmd->add_option("--window", verify_opts.window,
                         "Recorded snapshots averaged for the empirical limit (default 500)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate_cmd->parsed()) return run_validate(*validate_cmd, validate_opts);
    if (attainable_cmd->parsed()) return run_attainable(*attainable_cmd, attainable_opts);
    if (design_tsr_cmd->parsed()) return run_design_tsr(*design_tsr_cmd, design_tsr_opts);
    if (design_joint_cmd->parsed()) return run_design_joint(*design_joint_cmd, design_joint_opts);
    if (simulate_cmd->parsed()) return run_simulate(*simulate_cmd, simulate_opts);
    if (verify_cmd->parsed()) return run_verify(*verify_cmd, verify_opts);
  } catch (const input_error& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 2;
  } catch (const domain_error& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 1;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 2;
  }
  return 2;
}
