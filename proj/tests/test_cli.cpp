#include <catch2/catch_amalgamated.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "support/reference_data.hpp"
#include "weaknet/csv.hpp"

// Compile-time paths injected by the build: the tool binary and the shipped
// data directory.
#ifndef WEAKNET_CLI_PATH
#error "WEAKNET_CLI_PATH must be defined"
#endif
#ifndef WEAKNET_DATA_DIR
#error "WEAKNET_DATA_DIR must be defined"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string k_cli = WEAKNET_CLI_PATH;
const std::string k_data = WEAKNET_DATA_DIR;

struct Scratch {
  fs::path root;
  explicit Scratch(const std::string& tag) {
    root = fs::temp_directory_path() / ("weaknet_cli_" + tag);
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Scratch() { fs::remove_all(root); }
  [[nodiscard]] std::string dir(const std::string& name) const { return (root / name).string(); }
};

int run_cli(const std::string& args, const std::string& env_prefix = "") {
  std::string command = env_prefix + k_cli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

json report_in(const std::string& dir) { return json::parse(slurp(dir + "/report.json")); }
json manifest_in(const std::string& dir) { return json::parse(slurp(dir + "/manifest.json")); }

std::string data(const std::string& name) { return k_data + "/" + name; }

// Binary-signal tables (states x sub-network agents), one file per
// sub-network as the simulate/verify commands expect.
void write_signal_tables(const Scratch& scratch, std::string& s1, std::string& s2,
                         std::string& r) {
  weaknet::Matrix p(3, 3);
  p.row(0).setConstant(0.8);
  p.row(1).setConstant(0.4);
  p.row(2).setConstant(0.6);
  s1 = (scratch.root / "like_s1.csv").string();
  weaknet::write_matrix_csv(s1, p);
  s2 = (scratch.root / "like_s2.csv").string();
  weaknet::write_matrix_csv(s2, p.leftCols(2));
  r = (scratch.root / "like_r.csv").string();
  weaknet::write_matrix_csv(r, p);
}

}  // namespace

TEST_CASE("validate judges the shipped networks correctly", "[cli]") {
  Scratch scratch("validate");
  const std::string good = scratch.dir("good");
  REQUIRE(run_cli("validate " + data("example1.json") + " -o " + good) == 0);
  json report = report_in(good);
  CHECK(report["command"] == "validate");
  CHECK(report["valid"] == true);
  CHECK(report["violations"].empty());
  json manifest = manifest_in(good);
  CHECK(manifest["command"] == "validate");
  CHECK(manifest["options"].contains("stochastic_tol"));

  // The large simulation network ships with one known structural defect.
  const std::string bad = scratch.dir("bad");
  REQUIRE(run_cli("validate " + data("sim23.json") + " -o " + bad) == 1);
  json broken = report_in(bad);
  CHECK(broken["valid"] == false);
  REQUIRE(broken["violations"].size() == 1);
  CHECK(broken["violations"][0]["code"] == "missing-positive-diagonal");
  CHECK(broken["violations"][0]["subnet"] == 1);
}

TEST_CASE("attainable separates feasible and infeasible targets", "[cli]") {
  Scratch scratch("attainable");
  const std::string yes = scratch.dir("yes");
  REQUIRE(run_cli("attainable " + data("example1.json") + " " +
                  data("example1_q_uniform.csv") + " -o " + yes) == 0);
  json report = report_in(yes);
  CHECK(report["attainable"] == true);
  weaknet::Matrix v = weaknet::read_matrix_csv(yes + "/V.csv");
  CHECK((v - refdata::ex1_v_uniform()).cwiseAbs().maxCoeff() < 1e-12);

  // Boundary case: a required-zero entry that lands exactly on zero.
  const std::string boundary = scratch.dir("boundary");
  REQUIRE(run_cli("attainable " + data("example2.json") + " " + data("example2_q.csv") + " -o " +
                  boundary) == 0);
  CHECK(report_in(boundary)["attainable"] == true);

  const std::string no = scratch.dir("no");
  REQUIRE(run_cli("attainable " + data("example1.json") + " " +
                  data("example1_q_dispersed.csv") + " -o " + no) == 1);
  json refused = report_in(no);
  CHECK(refused["attainable"] == false);
  REQUIRE_FALSE(refused["violations"].empty());
  CHECK(refused["violations"][0]["agent"] == 7);
  CHECK(refused["violations"][0]["subnet"] == 1);
  CHECK(refused["violations"][0]["kind"] == "negative");
  CHECK(refused["violations"][0]["value"].get<double>() == Catch::Approx(-0.14).margin(1e-12));
}

TEST_CASE("design-tsr reproduces the published cross block byte for byte", "[cli]") {
  Scratch scratch("design_tsr");
  const std::string out = scratch.dir("out");
  REQUIRE(run_cli("design-tsr " + data("example1.json") + " " +
                  data("example1_q_uniform.csv") + " -o " + out) == 0);
  CHECK(slurp(out + "/T_SR.csv") ==
        weaknet::matrix_to_csv(refdata::ex1_t_sr(), weaknet::agent_labels(6, 3)));
  CHECK(report_in(out)["attainable"] == true);

  const std::string blocked = scratch.dir("blocked");
  REQUIRE(run_cli("design-tsr " + data("example1.json") + " " +
                  data("example1_q_dispersed.csv") + " -o " + blocked) == 1);
  CHECK_FALSE(fs::exists(blocked + "/T_SR.csv"));
}

TEST_CASE("design-joint covers exact, infeasible, and fallback outcomes", "[cli]") {
  Scratch scratch("design_joint");

  const std::string defaults = scratch.dir("defaults");
  REQUIRE(run_cli("design-joint " + data("appendix_ex1.json") + " " + data("appendix_q.csv") +
                  " -o " + defaults) == 0);
  json basic = report_in(defaults);
  CHECK(basic["overall"] == "exact");
  CHECK(basic["in_path_preserved"] == true);
  CHECK(basic["per_agent"][0]["epsilon_bound"].get<double>() == 0.25);

  const std::string pinned = scratch.dir("pinned");
  REQUIRE(run_cli("design-joint " + data("appendix_ex1.json") + " " + data("appendix_q.csv") +
                  " --overrides " + data("appendix_ex1_overrides.json") + " -o " + pinned) == 0);
  CHECK(report_in(pinned)["overall"] == "exact");
  weaknet::Matrix t_sr = weaknet::read_matrix_csv(pinned + "/T_SR.csv");
  weaknet::Matrix t_rr = weaknet::read_matrix_csv(pinned + "/T_RR.csv");
  CHECK((t_sr - refdata::app1_t_sr()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((t_rr - refdata::app1_t_rr()).cwiseAbs().maxCoeff() < 1e-12);
  weaknet::Matrix predicted = weaknet::read_matrix_csv(pinned + "/predicted.csv");
  CHECK((predicted - refdata::q_appendix()).cwiseAbs().maxCoeff() < 1e-8);

  const std::string strict = scratch.dir("strict");
  REQUIRE(run_cli("design-joint " + data("appendix_ex2.json") + " " + data("appendix_q.csv") +
                  " --overrides " + data("appendix_ex2_overrides.json") + " -o " + strict) == 1);
  CHECK(report_in(strict)["overall"] == "infeasible");
  CHECK_FALSE(fs::exists(strict + "/T_SR.csv"));

  const std::string fallback = scratch.dir("fallback");
  REQUIRE(run_cli("design-joint " + data("appendix_ex2.json") + " " + data("appendix_q.csv") +
                  " --overrides " + data("appendix_ex2_overrides.json") + " --fallback-ls -o " +
                  fallback) == 0);
  json softened = report_in(fallback);
  CHECK(softened["overall"] == "approximate");
  CHECK(softened["per_agent"][0]["status"] == "exact");
  CHECK(softened["per_agent"][0]["effective_status"] == "approximate");
  CHECK(softened["per_agent"][2]["status"] == "approximate");
  weaknet::Matrix soft_t_rr = weaknet::read_matrix_csv(fallback + "/T_RR.csv");
  CHECK(soft_t_rr(0, 2) == Catch::Approx(0.01).margin(1e-6));
  CHECK(soft_t_rr(1, 2) == Catch::Approx(0.99).margin(1e-6));
}

TEST_CASE("simulate writes reproducible traces", "[cli]") {
  Scratch scratch("simulate");
  std::string s1, s2, r;
  write_signal_tables(scratch, s1, s2, r);
  const std::string tables = " " + s1 + " " + s2 + " " + r;

  const std::string out = scratch.dir("out");
  REQUIRE(run_cli("simulate " + data("example1.json") + tables +
                  " --iters 40 --stride 10 --seed 11 -o " + out) == 0);
  json report = report_in(out);
  CHECK(report["iterations"] == 40);
  CHECK(report["recorded"] == 4);
  const std::string first_trace = slurp(out + "/trace.csv");
  CHECK(first_trace.rfind("iteration,agent,state,belief\n", 0) == 0);

  // Same invocation, fresh directory: the trace must be byte-identical.
  const std::string again = scratch.dir("again");
  REQUIRE(run_cli("simulate " + data("example1.json") + tables +
                  " --iters 40 --stride 10 --seed 11 -o " + again) == 0);
  CHECK(slurp(again + "/trace.csv") == first_trace);

  // A different seed must not replay the same signals.
  const std::string moved = scratch.dir("moved");
  REQUIRE(run_cli("simulate " + data("example1.json") + tables +
                  " --iters 40 --stride 10 --seed 12 -o " + moved) == 0);
  CHECK(slurp(moved + "/trace.csv") != first_trace);
}

TEST_CASE("verify reports design deviations analytically and empirically", "[cli]") {
  Scratch scratch("verify");
  const std::string analytic = scratch.dir("analytic");
  REQUIRE(run_cli("verify " + data("example1.json") + " " + data("example1_q_uniform.csv") +
                  " -o " + analytic) == 0);
  json report = report_in(analytic);
  CHECK(report["max_analytic_deviation"].get<double>() < 1e-12);
  CHECK(report["has_empirical"] == false);
  CHECK(fs::exists(analytic + "/W.csv"));
  CHECK(fs::exists(analytic + "/beliefs.csv"));

  std::string s1, s2, r;
  write_signal_tables(scratch, s1, s2, r);
  const std::string empirical = scratch.dir("empirical");
  REQUIRE(run_cli("verify " + data("example1.json") + " " + data("example1_q_uniform.csv") + " " +
                  s1 + " " + s2 + " " + r + " --iters 2000 --stride 10 --window 100 --seed 4 -o " +
                  empirical) == 0);
  json measured = report_in(empirical);
  CHECK(measured["has_empirical"] == true);
  CHECK(measured["max_empirical_deviation"].get<double>() < 0.05);
  CHECK(fs::exists(empirical + "/empirical.csv"));

  // Replacement blocks only make sense as a pair.
  CHECK(run_cli("verify " + data("example1.json") + " " + data("example1_q_uniform.csv") +
                " --tsr " + s1 + " -o " + scratch.dir("half")) == 2);
}

TEST_CASE("bad invocations exit with the usage code", "[cli]") {
  Scratch scratch("errors");
  const std::string out = scratch.dir("out");
  CHECK(run_cli("") == 2);
  CHECK(run_cli("frobnicate " + data("example1.json")) == 2);
  CHECK(run_cli("validate") == 2);  // missing required network argument
  CHECK(run_cli("validate --no-such-flag " + data("example1.json")) == 2);
  CHECK(run_cli("validate " + scratch.dir("missing") + "/net.json -o " + out) == 2);
  // Target profile shaped for a different network.
  CHECK(run_cli("attainable " + data("example1.json") + " " + data("sim23_q1.csv") + " -o " +
                out) == 2);
  std::string s1, s2, r;
  write_signal_tables(scratch, s1, s2, r);
  CHECK(run_cli("simulate " + data("example1.json") + " " + s1 + " " + s2 + " " + r +
                " --iters 0 -o " + out) == 2);
  CHECK(run_cli("simulate " + data("example1.json") + " " + s1 + " -o " + out) == 2);
  CHECK(run_cli("--version") == 0);
}

TEST_CASE("config files steer defaults and flags win", "[cli]") {
  Scratch scratch("config");
  std::string s1, s2, r;
  write_signal_tables(scratch, s1, s2, r);
  const std::string tables = " " + s1 + " " + s2 + " " + r;

  const std::string conf = (scratch.root / "run.conf").string();
  {
    std::ofstream out(conf, std::ios::binary);
    out << "[simulation]\niterations = 30\nseed = 9\nstride = 5\n";
  }

  const std::string from_file = scratch.dir("from_file");
  REQUIRE(run_cli("simulate " + data("example1.json") + tables + " --config " + conf + " -o " +
                  from_file) == 0);
  json manifest = manifest_in(from_file);
  CHECK(manifest["options"]["iterations"] == "30");
  CHECK(manifest["options"]["seed"] == "9");
  CHECK(manifest["options"]["stride"] == "5");

  const std::string flag_wins = scratch.dir("flag_wins");
  REQUIRE(run_cli("simulate " + data("example1.json") + tables + " --config " + conf +
                  " --iters 20 -o " + flag_wins) == 0);
  json overridden = manifest_in(flag_wins);
  CHECK(overridden["options"]["iterations"] == "20");
  CHECK(overridden["options"]["seed"] == "9");

  // Output directory resolution: [output] dir from the config file...
  const std::string conf_dir = scratch.dir("conf_dir");
  const std::string dir_conf = (scratch.root / "dir.conf").string();
  {
    std::ofstream out(dir_conf, std::ios::binary);
    out << "[output]\ndir = \"" << conf_dir << "\"\n";
  }
  REQUIRE(run_cli("validate " + data("example1.json") + " --config " + dir_conf) == 0);
  CHECK(fs::exists(conf_dir + "/report.json"));

  // ...the environment variable when nothing else names one...
  const std::string env_dir = scratch.dir("env_dir");
  REQUIRE(run_cli("validate " + data("example1.json"),
                  "WEAKNET_OUTPUT_DIR='" + env_dir + "' ") == 0);
  CHECK(fs::exists(env_dir + "/report.json"));

  // ...and the explicit flag beats both.
  const std::string flag_dir = scratch.dir("flag_dir");
  REQUIRE(run_cli("validate " + data("example1.json") + " --config " + dir_conf + " -o " +
                  flag_dir,
                  "WEAKNET_OUTPUT_DIR='" + env_dir + "' ") == 0);
  CHECK(fs::exists(flag_dir + "/report.json"));
}

TEST_CASE("identical invocations produce identical artifacts", "[cli]") {
  Scratch scratch("rerun");
  const std::string out = scratch.dir("out");
  const std::string invocation = "design-joint " + data("appendix_ex1.json") + " " +
                                 data("appendix_q.csv") + " --overrides " +
                                 data("appendix_ex1_overrides.json") + " -o " + out;
  REQUIRE(run_cli(invocation) == 0);
  const std::string report = slurp(out + "/report.json");
  const std::string manifest = slurp(out + "/manifest.json");
  const std::string t_sr = slurp(out + "/T_SR.csv");

  fs::remove_all(out);
  REQUIRE(run_cli(invocation) == 0);
  CHECK(slurp(out + "/report.json") == report);
  CHECK(slurp(out + "/manifest.json") == manifest);
  CHECK(slurp(out + "/T_SR.csv") == t_sr);
}
