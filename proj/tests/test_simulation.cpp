#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "support/random_networks.hpp"
#include "support/reference_data.hpp"
#include "weaknet/simulation.hpp"
#include "weaknet/state_space.hpp"

using namespace weaknet;

namespace {

// Every state emits the same signal distribution: the private draw carries no
// information, so a Bayes step must leave beliefs untouched.
LikelihoodModel uninformative_model(Index n_agents, Index k_states) {
  std::vector<Matrix> tables(static_cast<std::size_t>(n_agents),
                             Matrix::Constant(k_states, 2, 0.5));
  return LikelihoodModel(std::move(tables));
}

// Binary signals whose first-symbol probability separates all three states.
LikelihoodModel informative_model8() {
  Matrix p_first(3, 8);
  p_first.row(0).setConstant(0.8);
  p_first.row(1).setConstant(0.4);
  p_first.row(2).setConstant(0.6);
  return LikelihoodModel::from_binary(p_first);
}

}  // namespace

TEST_CASE("a Bayes step multiplies prior by likelihood and renormalizes", "[simulation]") {
  Vector prior(2), like(2);
  prior << 0.5, 0.5;
  like << 0.8, 0.4;
  Vector post = bayesian_update(prior, like);
  CHECK(post(0) == Catch::Approx(2.0 / 3).margin(1e-12));
  CHECK(post(1) == Catch::Approx(1.0 / 3).margin(1e-12));

  // A likelihood constant across states changes nothing.
  prior << 0.25, 0.75;
  like << 0.5, 0.5;
  post = bayesian_update(prior, like);
  CHECK(post(0) == 0.25);
  CHECK(post(1) == 0.75);

  // Products falling below the flush threshold become exact zeros.
  prior << 1e-100, 1.0 - 1e-100;
  like << 1e-250, 0.5;
  post = bayesian_update(prior, like);
  CHECK(post(0) == 0.0);
  CHECK(post(1) == 1.0);

  // A posterior with no mass anywhere cannot be normalized.
  prior << 1.0, 0.0;
  like << 1e-301, 0.7;
  CHECK_THROWS_AS(bayesian_update(prior, like), domain_error);

  Vector wide(3);
  wide << 0.2, 0.3, 0.5;
  CHECK_THROWS_AS(bayesian_update(prior, wide), input_error);
}

TEST_CASE("the social step is the transposed combination matrix", "[simulation]") {
  Matrix a(2, 2);
  a << 0.3, 0.6, 0.7, 0.4;
  Matrix mixed = combine_step(Matrix::Identity(2, 2), a);
  CHECK(mixed(0, 0) == 0.3);
  CHECK(mixed(0, 1) == 0.7);
  CHECK(mixed(1, 0) == 0.6);
  CHECK(mixed(1, 1) == 0.4);

  CHECK_THROWS_AS(combine_step(Matrix::Identity(3, 2), a), input_error);
  CHECK_THROWS_AS(combine_step(Matrix::Identity(2, 2), Matrix::Ones(2, 3)), input_error);
}

TEST_CASE("uninformative signals reduce the run to pure belief averaging", "[simulation]") {
  // With constant likelihood rows the recursion collapses to mu_t = A^T mu_{t-1},
  // which we can iterate independently and compare snapshot by snapshot.
  NetworkTopology topology = refdata::ex1_topology();
  Matrix a = refdata::ex1_a();
  const Index n = topology.num_agents();

  Matrix initial(n, 3);
  for (Index i = 0; i < n; ++i) {
    Vector row(3);
    row << 1.0, 2.0 + static_cast<Scalar>(i), 3.0;
    initial.row(i) = row.transpose() / row.sum();
  }

  SimConfig config;
  config.iterations = 60;
  config.trace_stride = 1;
  config.seed = 7;
  config.initial = initial;
  Trace trace = run_simulation(a, uninformative_model(n, 3), topology, config);
  REQUIRE(trace.beliefs.size() == 60);

  Matrix expected = initial;
  for (Index t = 1; t <= 60; ++t) {
    expected = a.transpose() * expected;
    CHECK(trace.iterations[static_cast<std::size_t>(t - 1)] == t);
    CHECK((trace.beliefs[static_cast<std::size_t>(t - 1)] - expected).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("snapshots follow the stride and always include the final state", "[simulation]") {
  NetworkTopology topology = refdata::ex1_topology();
  Matrix a = refdata::ex1_a();
  LikelihoodModel model = informative_model8();

  SimConfig config;
  config.iterations = 100;
  config.trace_stride = 30;
  config.seed = 3;
  Trace trace = run_simulation(a, model, topology, config);
  CHECK(trace.iterations == std::vector<Index>{30, 60, 90, 100});
  REQUIRE(trace.beliefs.size() == 4);
  CHECK((trace.final_beliefs() - trace.beliefs.back()).cwiseAbs().maxCoeff() == 0.0);

  // A stride longer than the run still records the end, exactly once.
  config.trace_stride = 500;
  Trace tail = run_simulation(a, model, topology, config);
  CHECK(tail.iterations == std::vector<Index>{100});

  // When the run length is a stride multiple the final state is not duplicated.
  config.trace_stride = 50;
  Trace aligned = run_simulation(a, model, topology, config);
  CHECK(aligned.iterations == std::vector<Index>{50, 100});

  Matrix mean = empirical_limit(trace, 2);
  Matrix by_hand = (trace.beliefs[2] + trace.beliefs[3]) / 2.0;
  CHECK((mean - by_hand).cwiseAbs().maxCoeff() == 0.0);
  CHECK((empirical_limit(trace, 1) - trace.final_beliefs()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(empirical_limit(trace, 0), input_error);
  CHECK_THROWS_AS(empirical_limit(trace, 5), input_error);
  CHECK_THROWS_AS(Trace{}.final_beliefs(), input_error);
}

TEST_CASE("bad run configurations are rejected before any work", "[simulation]") {
  NetworkTopology topology = refdata::ex1_topology();
  Matrix a = refdata::ex1_a();
  LikelihoodModel model = informative_model8();

  SimConfig config;
  config.iterations = 0;
  CHECK_THROWS_AS(run_simulation(a, model, topology, config), input_error);
  config.iterations = 10;
  config.trace_stride = 0;
  CHECK_THROWS_AS(run_simulation(a, model, topology, config), input_error);
  config.trace_stride = 10;

  CHECK_THROWS_AS(run_simulation(Matrix::Identity(7, 7), model, topology, config), input_error);

  Matrix p_small(3, 5);
  p_small.setConstant(0.5);
  CHECK_THROWS_AS(run_simulation(a, LikelihoodModel::from_binary(p_small), topology, config),
                  input_error);

  // Two likelihood states cannot cover a sub-network observing state 3.
  Matrix p_narrow(2, 8);
  p_narrow.setConstant(0.5);
  CHECK_THROWS_AS(run_simulation(a, LikelihoodModel::from_binary(p_narrow), topology, config),
                  input_error);

  // A receiving sub-network with no declared state has nothing to draw from.
  NetworkTopology stateless({{3, 1}, {2, 2}}, {{3, std::optional<StateId>{}}},
                            refdata::edges_of(a));
  CHECK_THROWS_AS(run_simulation(a, model, stateless, config), input_error);

  config.initial = Matrix::Constant(8, 2, 0.5);
  CHECK_THROWS_AS(run_simulation(a, model, topology, config), input_error);
  config.initial = Matrix::Constant(8, 3, 1.0 / 3);
  config.initial(0, 0) = -1.0 / 3;
  config.initial(0, 1) = 1.0;
  CHECK_THROWS_AS(run_simulation(a, model, topology, config), input_error);
  config.initial = Matrix::Constant(8, 3, 0.5);
  CHECK_THROWS_AS(run_simulation(a, model, topology, config), input_error);
}

TEST_CASE("beliefs stay on the probability simplex through long runs",
          "[simulation][properties]") {
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  testgen::GeneratorLimits limits;
  limits.receiving_state = 4;  // distinct from any sending state
  const Index k_states = 4;

  for (int instance = 0; instance < 20; ++instance) {
    testgen::RandomNetwork net = testgen::random_weak_network(rng, limits);
    const Index n = net.topology.num_agents();
    std::vector<Matrix> tables;
    for (Index i = 0; i < n; ++i) {
      Matrix table(k_states, 3);
      for (Index r = 0; r < k_states; ++r) {
        Vector row(3);
        for (Index c = 0; c < 3; ++c) row(c) = 0.05 + unit(rng);
        table.row(r) = row.transpose() / row.sum();
      }
      tables.push_back(table);
    }
    SimConfig config;
    config.iterations = 150;
    config.trace_stride = 7;
    config.seed = 1000 + static_cast<std::uint64_t>(instance);
    config.check_invariants = true;  // re-verified inside every iteration
    Trace trace;
    REQUIRE_NOTHROW(trace = run_simulation(net.a, LikelihoodModel(std::move(tables)),
                                           net.topology, config));
    const Matrix& last = trace.final_beliefs();
    for (Index i = 0; i < n; ++i) {
      CHECK(last.row(i).sum() == Catch::Approx(1.0).margin(1e-9));
      CHECK(last.row(i).minCoeff() >= 0.0);
    }
  }
}

TEST_CASE("identical configurations reproduce traces bit for bit",
          "[simulation][properties]") {
  NetworkTopology topology = refdata::ex1_topology();
  Matrix a = refdata::ex1_a();
  LikelihoodModel model = informative_model8();

  SimConfig config;
  config.iterations = 300;
  config.trace_stride = 25;
  config.seed = 20240;
  Trace first = run_simulation(a, model, topology, config);
  Trace second = run_simulation(a, model, topology, config);
  REQUIRE(first.iterations == second.iterations);
  for (std::size_t i = 0; i < first.beliefs.size(); ++i) {
    CHECK((first.beliefs[i].array() == second.beliefs[i].array()).all());
  }

  config.seed = 20241;
  Trace other = run_simulation(a, model, topology, config);
  CHECK_FALSE((first.final_beliefs().array() == other.final_beliefs().array()).all());
}

TEST_CASE("informative runs settle on the designed limits", "[simulation]") {
  NetworkTopology topology = refdata::ex1_topology();
  Matrix a = refdata::ex1_a();

  SimConfig config;
  config.iterations = 3000;
  config.trace_stride = 10;
  config.seed = 99;
  Trace trace = run_simulation(a, informative_model8(), topology, config);
  Matrix limit = empirical_limit(trace, 150);

  // Sending agents learn their own sub-network's state...
  for (Index i = 0; i < 3; ++i) CHECK(limit(i, 0) > 0.95);
  for (Index i = 3; i < 5; ++i) CHECK(limit(i, 1) > 0.95);
  // ...receiving agents land on the designed split across those states.
  for (Index i = 5; i < 8; ++i) {
    CHECK(limit(i, 0) == Catch::Approx(0.2).margin(0.05));
    CHECK(limit(i, 1) == Catch::Approx(0.8).margin(0.05));
    CHECK(limit(i, 2) == Catch::Approx(0.0).margin(0.05));
  }
}

TEST_CASE("design verification reports analytic and empirical gaps", "[simulation]") {
  NetworkTopology ex2 = refdata::ex2_topology();
  StateSpace space = StateSpace::from_topology(ex2);
  SimConfig config;

  VerificationReport clean =
      verify_design(ex2, space, refdata::ex2_a(), refdata::q_ex2(), nullptr, config);
  CHECK_FALSE(clean.has_empirical);
  CHECK(clean.max_analytic_deviation < 1e-12);
  REQUIRE(clean.analytic.rows() == 3);
  for (Index k = 0; k < 3; ++k) {
    CHECK(clean.analytic(k, 0) == Catch::Approx(refdata::q_ex2()(0, k)).margin(1e-12));
    CHECK(clean.analytic(k, 1) == Catch::Approx(refdata::q_ex2()(1, k)).margin(1e-12));
    CHECK(clean.analytic(k, 2) == Catch::Approx(0.0).margin(1e-12));
    CHECK(clean.w.col(k).sum() == Catch::Approx(1.0).margin(1e-12));
  }

  // A pair that cannot attain its target shows the gap analytically.
  VerificationReport off = verify_design(refdata::app2_topology(),
                                         StateSpace::from_topology(refdata::app2_topology()),
                                         refdata::app2_a(), refdata::q_appendix(), nullptr, config);
  CHECK(off.max_analytic_deviation == Catch::Approx(0.229).margin(1e-3));

  LikelihoodModel model = informative_model8();
  config.iterations = 800;
  config.trace_stride = 10;
  config.averaging_window = 40;
  config.seed = 17;
  VerificationReport measured =
      verify_design(ex2, space, refdata::ex2_a(), refdata::q_ex2(), &model, config);
  CHECK(measured.has_empirical);
  REQUIRE(measured.empirical.rows() == 8);
  CHECK(measured.max_empirical_deviation < 0.1);
  for (Index i = 0; i < 8; ++i) {
    CHECK(measured.empirical.row(i).sum() == Catch::Approx(1.0).margin(1e-9));
  }

  Matrix p_narrow(2, 8);
  p_narrow.setConstant(0.5);
  LikelihoodModel narrow = LikelihoodModel::from_binary(p_narrow);
  CHECK_THROWS_AS(verify_design(ex2, space, refdata::ex2_a(), refdata::q_ex2(), &narrow, config),
                  input_error);
  CHECK_THROWS_AS(
      verify_design(ex2, space, Matrix::Identity(7, 7), refdata::q_ex2(), nullptr, config),
      input_error);
  CHECK_THROWS_AS(
      verify_design(ex2, space, refdata::ex2_a(), Matrix::Ones(3, 3), nullptr, config),
      input_error);
}
