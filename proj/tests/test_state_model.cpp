#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "statedeg/state_model.hpp"

using namespace statedeg;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

TripartiteState random_state(Dims d, std::mt19937_64& rng) {
  return TripartiteState(d, oracle::random_complex(d.total(), 1, rng).col(0));
}

} // namespace

TEST_CASE("state construction validates its input", "[state_model]") {
  CHECK_THROWS_WITH(TripartiteState({2, 2, 2}, ComplexVector::Zero(7)),
                    ContainsSubstring("7 amplitudes"));
  CHECK_THROWS_AS(TripartiteState({0, 2, 2}, ComplexVector::Zero(0)),
                  std::invalid_argument);
  CHECK_THROWS_WITH(TripartiteState({1, 1, 2}, ComplexVector::Ones(2), true),
                    ContainsSubstring("normalized"));
  ComplexVector bad = ComplexVector::Zero(2);
  bad(1) = std::nan("");
  CHECK_THROWS_AS(TripartiteState({1, 1, 2}, bad), std::invalid_argument);
  CHECK_THROWS_AS(TripartiteState({1, 1, 2}, ComplexVector::Zero(2)).unit(),
                  std::invalid_argument);
}

TEST_CASE("layout is lexicographic", "[state_model]") {
  const Dims d{2, 3, 4};
  CHECK(d.flat(0, 0, 0) == 0);
  CHECK(d.flat(0, 0, 1) == 1);
  CHECK(d.flat(0, 1, 0) == 4);
  CHECK(d.flat(1, 0, 0) == 12);
  CHECK(d.flat(1, 2, 3) == 23);
  CHECK(d.total() == 24);
}

TEST_CASE("blocks of the depolarizing lift", "[state_model][blocks]") {
  const double eps = 0.1;
  const double al = std::sqrt(1.0 - eps), be = std::sqrt(eps / 3.0);
  const BlockFamily b = extract_blocks(fixtures::bell_lift(eps));
  REQUIRE(b.count() == 2);
  ComplexMatrix s0(2, 4), s1(2, 4);
  s0 << al, be, 0, 0, 0, 0, be, be;
  s1 << 0, 0, -be, be, al, -be, 0, 0;
  CHECK(max_abs(b.s[0] - s0) < 1e-15);
  CHECK(max_abs(b.s[1] - s1) < 1e-15);
  CHECK(max_abs(b.r[0] - s0.transpose()) == 0.0);
  CHECK_THAT(b.norm_squared(), WithinAbs(2.0, 1e-14));
}

TEST_CASE("source and target families follow the direction", "[state_model][blocks]") {
  std::mt19937_64 rng(11);
  const BlockFamily b = extract_blocks(random_state({3, 2, 4}, rng));
  CHECK(b.source(Direction::EtoB)[0].rows() == 4);
  CHECK(b.target(Direction::EtoB)[0].rows() == 2);
  CHECK(b.source(Direction::BtoE)[0].rows() == 2);
  CHECK(b.target(Direction::BtoE)[0].rows() == 4);
  for (Index i = 0; i < b.count(); ++i)
    CHECK(max_abs(b.r_svd[static_cast<std::size_t>(i)].reconstruct() -
                  b.r[static_cast<std::size_t>(i)]) < 1e-12);
}

TEST_CASE("assembled products equal the reduced densities", "[state_model][property]") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 25; ++t) {
    const Dims d{1 + t % 3, 1 + (t / 3) % 3, 1 + (t / 9) % 3};
    const TripartiteState x = random_state(d, rng);
    const BlockFamily b = extract_blocks(x);
    const ReducedDensities red = reduced_densities(x);
    CHECK(max_abs(assemble_products(b.r) - red.x2) < 1e-12);
    CHECK(max_abs(assemble_products(b.s) - red.x3) < 1e-12);
    CHECK(max_abs(red.x2 - oracle::partial_trace(x.density(), d.n, d.p, d.q, 2)) <
          1e-12);
    const double tr = x.norm_squared();
    CHECK_THAT(red.x1.trace().real(), WithinAbs(tr, 1e-10));
    CHECK_THAT(red.x2.trace().real(), WithinAbs(tr, 1e-10));
    CHECK_THAT(red.x3.trace().real(), WithinAbs(tr, 1e-10));
  }
}

TEST_CASE("source and target densities", "[state_model]") {
  const TripartiteState x = fixtures::example2(0.5, 0.5);
  const ReducedDensities red = reduced_densities(x);
  CHECK(max_abs(source_density(x, Direction::EtoB) - red.x2) == 0.0);
  CHECK(max_abs(target_density(x, Direction::EtoB) - red.x3) == 0.0);
  CHECK(max_abs(source_density(x, Direction::BtoE) - red.x3) == 0.0);
  CHECK(max_abs(target_density(x, Direction::BtoE) - red.x2) == 0.0);
}

TEST_CASE("fixtures", "[state_model][fixtures]") {
  SECTION("ghz") {
    const TripartiteState g = fixtures::ghz();
    CHECK(g.normalized());
    CHECK(g.amplitudes()(0) == g.amplitudes()(7));
    CHECK_THAT(g.norm_squared(), WithinAbs(1.0, 1e-15));
  }
  SECTION("example2") {
    const TripartiteState x = fixtures::example2(0.6, std::sqrt(0.5 - 0.36));
    CHECK_THAT(x.norm_squared(), WithinAbs(1.0, 1e-14));
    CHECK(x.amplitude(1, 1, 1).real() < 0.0);
    CHECK_THROWS_WITH(fixtures::example2(0.5, 0.6),
                      ContainsSubstring("2(a^2 + b^2) = 1"));
  }
  SECTION("sec4") {
    const TripartiteState x = fixtures::sec4(0.8, 0.6);
    CHECK(x.dims() == Dims{3, 2, 2});
    // block 0 is p+ phi+^t + p- phi-^t = 2 diag(alpha a, beta b)
    CHECK_THAT(x.amplitude(0, 0, 0).real(), WithinAbs(2 * 0.8 * 0.6, 1e-15));
    CHECK_THAT(std::abs(x.amplitude(0, 0, 1)), WithinAbs(0.0, 1e-15));
    CHECK_THAT(x.amplitude(0, 1, 1).real(), WithinAbs(2 * 0.6 * 0.8, 1e-15));
    CHECK_THROWS_AS(fixtures::sec4(1.0, 0.5), std::invalid_argument);
  }
  SECTION("bell_lift") {
    CHECK_THAT(fixtures::bell_lift(0.3).norm_squared(), WithinAbs(2.0, 1e-14));
    CHECK_THROWS_AS(fixtures::bell_lift(0.8), std::invalid_argument);
    CHECK_THROWS_AS(fixtures::bell_lift(-0.1), std::invalid_argument);
  }
}

TEST_CASE("scaling and normalisation", "[state_model]") {
  const TripartiteState x = fixtures::bell_lift(0.2);
  const TripartiteState u = x.unit();
  CHECK(u.normalized());
  CHECK_THAT(u.norm_squared(), WithinAbs(1.0, 1e-14));
  const TripartiteState y = x.scaled(Complex(0.0, 2.0));
  CHECK_THAT(y.norm_squared(), WithinAbs(8.0, 1e-13));
  CHECK_FALSE(y.normalized());
}

TEST_CASE("direction names", "[state_model]") {
  CHECK(to_string(Direction::EtoB) == "EtoB");
  CHECK(direction_from_string("BtoE") == Direction::BtoE);
  CHECK(direction_from_string("e2b") == Direction::EtoB);
  CHECK_THROWS_WITH(direction_from_string("AtoB"), ContainsSubstring("AtoB"));
}
