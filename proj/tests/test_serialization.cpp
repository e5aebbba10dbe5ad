#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "statedeg/serialization.hpp"

using namespace statedeg;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("state JSON round trip is exact", "[serialization]") {
  std::mt19937_64 rng(81);
  const Dims d{2, 3, 2};
  const TripartiteState x(d, oracle::random_complex(d.total(), 1, rng).col(0));
  const std::string text = dump(state_to_json(x));
  const TripartiteState y = state_from_json(parse_json(text, "mem"));
  CHECK(y.dims() == d);
  CHECK(y.amplitudes() == x.amplitudes());
  CHECK(text.back() == '\n');
  CHECK(dump(state_to_json(y)) == text);
}

TEST_CASE("Kraus JSON round trip is exact", "[serialization]") {
  std::mt19937_64 rng(82);
  const KrausSet k{oracle::random_cptp(3, 2, 2, rng)};
  const Json j = kraus_to_json(k);
  CHECK(j["in_dim"] == 3);
  CHECK(j["out_dim"] == 2);
  const KrausSet back = kraus_from_json(parse_json(dump(j), "mem"));
  REQUIRE(back.size() == 2);
  CHECK(back.ops[0] == k.ops[0]);
  CHECK(back.ops[1] == k.ops[1]);
}

TEST_CASE("syntax errors name the line", "[serialization][errors]") {
  const std::string text = "{\n  \"dims\": [2, 2, 2],\n  \"amplitudes\": [\n";
  CHECK_THROWS_MATCHES(parse_json(text, "state.json"), ParseError,
                       Catch::Matchers::MessageMatches(
                           ContainsSubstring("state.json:4: JSON syntax error")));
  CHECK_THROWS_MATCHES(parse_json("{\"a\": 1,,}", "x.json"), ParseError,
                       Catch::Matchers::MessageMatches(ContainsSubstring("x.json:1:")));
}

TEST_CASE("schema errors name the field", "[serialization][errors]") {
  auto state_error = [](const std::string& text) {
    try {
      state_from_json(parse_json(text, "mem"));
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK_THAT(state_error(R"({"amplitudes": []})"), ContainsSubstring("'dims': missing"));
  CHECK_THAT(state_error(R"({"dims": [2, 0, 1], "amplitudes": []})"),
             ContainsSubstring("'dims[1]'"));
  CHECK_THAT(state_error(R"({"dims": [1, 1, 2], "amplitudes": [[1, 0]]})"),
             ContainsSubstring("has 1 entries, dims require 2"));
  CHECK_THAT(state_error(R"({"dims": [1, 1, 2], "amplitudes": [[1, 0], [1]]})"),
             ContainsSubstring("'amplitudes[1]'"));
  CHECK_THAT(state_error(R"({"dims": [1, 1, 2], "amplitudes": [[0, 0], [0, 0]]})"),
             ContainsSubstring("zero"));
  CHECK_THAT(state_error(R"([1, 2])"), ContainsSubstring("expected an object"));

  auto kraus_error = [](const std::string& text) {
    try {
      kraus_from_json(parse_json(text, "mem"));
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK_THAT(kraus_error(R"({"in_dim": 2, "out_dim": 2, "kraus": []})"),
             ContainsSubstring("'kraus'"));
  CHECK_THAT(kraus_error(R"({"in_dim": 2, "out_dim": 1, "kraus": [[[[1, 0]]]]})"),
             ContainsSubstring("'kraus[0][0]': expected 2 entries"));
  CHECK_THAT(kraus_error(R"({"out_dim": 1, "kraus": []})"),
             ContainsSubstring("'in_dim': missing"));
}

TEST_CASE("outcome JSON", "[serialization]") {
  const FeasibilityOutcome ruled = decide(fixtures::bell_lift(0.1), Direction::EtoB);
  const Json r = outcome_to_json(ruled, Direction::EtoB);
  CHECK(r["direction"] == "EtoB");
  CHECK(r["status"] == "RuledOut");
  CHECK(r["stage"] == "filter");
  REQUIRE(r.contains("filter_witness"));
  CHECK(r["filter_witness"]["d_in"].get<double>() < r["filter_witness"]["d_out"].get<double>());
  CHECK_FALSE(r.contains("certificate"));

  const FeasibilityOutcome ok = decide(fixtures::ghz(), Direction::BtoE);
  const Json f = outcome_to_json(ok, Direction::BtoE);
  CHECK(f["status"] == "Feasible");
  REQUIRE(f.contains("certificate"));
  CHECK(f["certificate"]["in_dim"] == 2);
  CHECK(f.contains("verification_residual"));
  CHECK(dump(f) == dump(outcome_to_json(decide(fixtures::ghz(), Direction::BtoE),
                                        Direction::BtoE)));
}

TEST_CASE("config and channel report JSON", "[serialization]") {
  DecideConfig cfg;
  cfg.selection = PairSelection::DiagonalOnly;
  const Json c = config_to_json(cfg);
  CHECK(c["max_iter"] == 20000);
  CHECK(c["pairs"] == "diagonal_only");
  CHECK(c["seed"] == 0);

  const Json rep = channel_report_to_json(channel_degradability_test(depolarizing(0.1)));
  CHECK(rep["verdict"] == "ruled_out_for_filtered_inputs");
  REQUIRE(rep["results"].size() == 2);
  CHECK(rep["results"][0]["direction"] == "EtoB");
  CHECK_FALSE(rep.contains("timing"));
}
