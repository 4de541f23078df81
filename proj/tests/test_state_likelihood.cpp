#include <catch2/catch_amalgamated.hpp>

#include "support/reference_data.hpp"
#include "weaknet/likelihood.hpp"
#include "weaknet/state_space.hpp"

using namespace weaknet;

TEST_CASE("state labels default to theta1..K", "[states]") {
  StateSpace space(3);
  CHECK(space.num_states() == 3);
  CHECK(space.label(1) == "theta1");
  CHECK(space.label(3) == "theta3");
  CHECK_THROWS_AS(space.label(0), input_error);
  CHECK_THROWS_AS(space.label(4), input_error);

  StateSpace named(2, {"low", "high"});
  CHECK(named.label(2) == "high");
  CHECK_THROWS_AS(StateSpace(2, {"only-one"}), input_error);
  CHECK_THROWS_AS(StateSpace(0), input_error);
}

TEST_CASE("sending true states come from the topology", "[states]") {
  StateSpace space = StateSpace::from_topology(refdata::ex1_topology());
  CHECK(space.num_states() == 3);  // receiving true state 3 sets the count
  CHECK(space.num_sending_subnets() == 2);
  CHECK(space.sending_true_state(1) == 1);
  CHECK(space.sending_true_state(2) == 2);
  CHECK(space.sending_true_states() == std::vector<StateId>{1, 2});

  StateSpace wide = StateSpace::from_topology(refdata::ex1_topology(), 5);
  CHECK(wide.num_states() == 5);
  CHECK_THROWS_AS(StateSpace::from_topology(refdata::ex1_topology(), 1), input_error);
}

TEST_CASE("sending subnets need distinct declared states", "[states]") {
  NetworkTopology missing({{1, {}}, {1, 2}}, {{1, {}}}, {{1, 1}, {2, 2}, {1, 3}});
  CHECK_THROWS_AS(StateSpace::from_topology(missing), input_error);
  NetworkTopology dup({{1, 1}, {1, 1}}, {{1, {}}}, {{1, 1}, {2, 2}, {1, 3}});
  CHECK_THROWS_AS(StateSpace::from_topology(dup), input_error);
}

TEST_CASE("likelihood tables reject degenerate rows", "[likelihood]") {
  Matrix good(2, 2);
  good << 0.3, 0.7,  //
      0.6, 0.4;
  LikelihoodModel model({good});
  CHECK(model.num_agents() == 1);
  CHECK(model.num_states() == 2);
  CHECK(model.alphabet_size(0) == 2);
  CHECK(model.table(0)(0, 1) == 0.7);

  Matrix bad_sum(2, 2);
  bad_sum << 0.3, 0.6,  //
      0.6, 0.4;
  CHECK_THROWS_AS(LikelihoodModel({bad_sum}), input_error);

  Matrix revealing(2, 2);
  revealing << 1.0, 0.0,  //
      0.6, 0.4;
  CHECK_THROWS_AS(LikelihoodModel({revealing}), input_error);

  Matrix mixed_states(3, 2);
  mixed_states << 0.3, 0.7, 0.6, 0.4, 0.5, 0.5;
  CHECK_THROWS_AS(LikelihoodModel({good, mixed_states}), input_error);
  CHECK_THROWS_AS(LikelihoodModel({}), input_error);
}

TEST_CASE("binary tables expand to two-signal models", "[likelihood]") {
  LikelihoodModel model = refdata::sim23_likelihoods();
  REQUIRE(model.num_agents() == 23);
  REQUIRE(model.num_states() == 3);
  for (Index agent = 0; agent < 23; ++agent) {
    REQUIRE(model.alphabet_size(agent) == 2);
    const Matrix& table = model.table(agent);
    for (Index s = 0; s < 3; ++s) {
      CHECK(table(s, 0) + table(s, 1) == Catch::Approx(1.0).margin(1e-15));
    }
  }
  // Spot values straight from the frozen tables.
  CHECK(model.table(0)(0, 0) == Catch::Approx(5.0 / 8).margin(1e-15));
  CHECK(model.table(8)(1, 0) == Catch::Approx(7.0 / 8).margin(1e-15));
  CHECK(model.table(16)(2, 0) == Catch::Approx(5.0 / 8).margin(1e-15));
  CHECK_THROWS_AS(model.table(23), input_error);
}
