#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "statedeg/rank_one.hpp"

using namespace statedeg;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Unit vectors with the prescribed Gram matrix (columns of sqrt(G)).
std::vector<ComplexVector> vectors_with_gram(const ComplexMatrix& g) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g);
  const ComplexMatrix root = es.eigenvectors() *
                             es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                             es.eigenvectors().adjoint();
  std::vector<ComplexVector> out;
  for (Index i = 0; i < g.cols(); ++i)
    out.push_back(root.col(i));
  return out;
}

RankOneDecomposition make_dec(std::vector<ComplexVector> u,
                              std::vector<ComplexVector> v) {
  RankOneDecomposition d;
  d.u = std::move(u);
  d.v = std::move(v);
  d.d.assign(d.u.size(), 1.0);
  return d;
}

// Checks Phi(u_i u_j^*) = C_ji v_i v_j^* for every pair.
double certificate_error(const RankOneDecomposition& dec, const KrausSet& k,
                         const ComplexMatrix& c) {
  double worst = 0.0;
  for (Index i = 0; i < dec.count(); ++i)
    for (Index j = 0; j < dec.count(); ++j) {
      const ComplexMatrix in = dec.u[i] * dec.u[j].adjoint();
      const ComplexMatrix want = c(j, i) * dec.v[i] * dec.v[j].adjoint();
      worst = std::max(worst, max_abs(oracle::apply(k.ops, in) - want));
    }
  return worst;
}

// u_i = e^{i theta_i} W v_i for a random unitary W.
RankOneDecomposition two_way_instance(Index n, Index dim, std::mt19937_64& rng,
                                      RealVector& theta) {
  const ComplexMatrix w =
      Eigen::HouseholderQR<ComplexMatrix>(oracle::random_complex(dim, dim, rng))
          .householderQ();
  std::uniform_real_distribution<double> phase(-3.0, 3.0);
  theta.resize(n);
  std::vector<ComplexVector> u, v;
  for (Index i = 0; i < n; ++i) {
    theta(i) = phase(rng);
    v.push_back(oracle::random_unit(dim, rng));
    u.push_back(std::polar(1.0, theta(i)) * (w * v.back()));
  }
  return make_dec(u, v);
}

} // namespace

TEST_CASE("ghz is rank one with a trivial correlation", "[rank_one]") {
  const BlockFamily b = extract_blocks(fixtures::ghz());
  for (Direction d : {Direction::EtoB, Direction::BtoE}) {
    const auto dec = detect_rank_one(b, d);
    REQUIRE(dec.has_value());
    CHECK(dec->count() == 2);
    CHECK_THAT(dec->d[0], WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
    const ConditionEResult e = check_condition_e(*dec);
    CHECK(e.verdict == Verdict::Yes);
    CHECK(check_two_way(*dec).verdict == Verdict::Yes);
  }
}

TEST_CASE("Example 2 blocks are rank one", "[rank_one]") {
  const BlockFamily b = extract_blocks(fixtures::example2(0.5, 0.5));
  const auto dec = detect_rank_one(b, Direction::EtoB);
  REQUIRE(dec.has_value());
  for (Index i = 0; i < 2; ++i)
    CHECK(max_abs(dec->u[i] * dec->d[i] * dec->v[i].transpose() - b.r[i]) < 1e-14);
  // R_0 = e_0 (a, b): the source directions are orthogonal
  CHECK(std::abs(dec->u[0].dot(dec->u[1])) < 1e-15);
  const ConditionEResult e = check_condition_e(*dec);
  CHECK(e.verdict == Verdict::Yes);
}

TEST_CASE("non rank-one families are not detected", "[rank_one]") {
  const BlockFamily b = extract_blocks(fixtures::bell_lift(0.2));
  CHECK_FALSE(detect_rank_one(b, Direction::EtoB).has_value());
  CHECK_FALSE(detect_rank_one(std::span<const ComplexMatrix>()).has_value());
  std::vector<ComplexMatrix> with_zero = {ComplexMatrix::Identity(2, 2).leftCols(1),
                                          ComplexMatrix::Zero(2, 1)};
  CHECK_FALSE(detect_rank_one(with_zero).has_value());
}

TEST_CASE("detection recovers the product factors", "[rank_one][property]") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 20; ++t) {
    const Index n = 2 + t % 3;
    std::vector<ComplexMatrix> blocks;
    std::vector<ComplexVector> us, vs;
    std::vector<double> ds;
    for (Index i = 0; i < n; ++i) {
      us.push_back(oracle::random_unit(3, rng));
      vs.push_back(oracle::random_unit(2, rng));
      ds.push_back(0.5 + 0.1 * static_cast<double>(i));
      blocks.push_back(us.back() * ds.back() * vs.back().transpose());
    }
    const auto dec = detect_rank_one(blocks);
    REQUIRE(dec.has_value());
    for (Index i = 0; i < n; ++i) {
      CHECK_THAT(dec->d[i], WithinAbs(ds[i], 1e-12));
      CHECK_THAT(std::abs(dec->u[i].dot(us[i])), WithinAbs(1.0, 1e-12));
      CHECK_THAT(std::abs(dec->v[i].dot(vs[i])), WithinAbs(1.0, 1e-12));
    }
    const RankOneDecomposition sw = dec->swapped();
    CHECK(sw.u[0] == dec->v[0]);
    CHECK(sw.v[0] == dec->u[0]);
  }
}

TEST_CASE("a forced entry above 1 in modulus answers No", "[rank_one][condition_e]") {
  const ComplexVector e0 = ComplexVector::Unit(2, 0);
  const ComplexVector half = (ComplexVector(2) << 0.5, std::sqrt(0.75)).finished();
  // gram(u)_01 = 1, gram(v)_01 = 1/2, so C_01 = 2
  const ConditionEResult r = check_condition_e(make_dec({e0, e0}, {e0, half}));
  CHECK(r.verdict == Verdict::No);
  CHECK(r.obstruction == std::vector<Index>{0, 1});
  CHECK_THAT(r.obstruction_eigenvalue, WithinAbs(-1.0, 1e-12));
  CHECK_THAT(r.reason, ContainsSubstring("exceeds 1"));
}

TEST_CASE("orthogonal targets with overlapping sources answer No", "[rank_one][condition_e]") {
  const ComplexVector e0 = ComplexVector::Unit(2, 0), e1 = ComplexVector::Unit(2, 1);
  const ComplexVector half = (ComplexVector(2) << 0.5, std::sqrt(0.75)).finished();
  const ConditionEResult r = check_condition_e(make_dec({e0, half}, {e0, e1}));
  CHECK(r.verdict == Verdict::No);
  CHECK_THAT(r.reason, ContainsSubstring("vanishes"));
  CHECK_THAT(r.obstruction_eigenvalue, WithinAbs(-0.5, 1e-12));
}

TEST_CASE("a forced 3x3 minor that is not PSD answers No", "[rank_one][condition_e]") {
  ComplexMatrix gu = ComplexMatrix::Constant(3, 3, -0.4);
  ComplexMatrix gv = ComplexMatrix::Constant(3, 3, 0.5);
  gu.diagonal().setOnes();
  gv.diagonal().setOnes();
  // C has off-diagonal -0.8 with eigenvalue 1 - 1.6
  const ConditionEResult r =
      check_condition_e(make_dec(vectors_with_gram(gu), vectors_with_gram(gv)));
  CHECK(r.verdict == Verdict::No);
  CHECK(r.obstruction == std::vector<Index>{0, 1, 2});
  CHECK_THAT(r.obstruction_eigenvalue, WithinAbs(-0.6, 1e-10));
}

TEST_CASE("a free entry is completed to a PSD correlation", "[rank_one][condition_e]") {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<ComplexVector> v = {ComplexVector::Unit(3, 0),
                                  (ComplexVector(3) << s, s, 0).finished(),
                                  ComplexVector::Unit(3, 1)};
  std::vector<ComplexVector> u = {
      ComplexVector::Unit(3, 0),
      (ComplexVector(3) << 0.9 * s, -0.9 * s, std::sqrt(0.19)).finished(),
      ComplexVector::Unit(3, 1)};
  const RankOneDecomposition dec = make_dec(u, v);
  const ConditionEResult r = check_condition_e(dec);
  REQUIRE(r.verdict == Verdict::Yes);
  REQUIRE(r.certificate.has_value());
  const CorrelationCertificate& cert = *r.certificate;
  CHECK(cert.completed);
  CHECK_FALSE(cert.fixed_mask(0, 2));
  CHECK_THAT(cert.c(0, 1).real(), WithinAbs(0.9, 1e-7));
  CHECK_THAT(cert.c(1, 2).real(), WithinAbs(-0.9, 1e-7));
  CHECK(hermitian_eig(cert.c).values.minCoeff() > -1e-8);

  const KrausSet k = channel_from_correlation(dec, cert);
  CHECK(k.tp_defect() < 1e-8);
  CHECK(certificate_error(dec, k, cert.c) < 1e-6);
}

TEST_CASE("Yes certificates define channels with the required action", "[rank_one][property]") {
  std::mt19937_64 rng(52);
  int yes = 0;
  for (int t = 0; t < 40; ++t) {
    const Index n = 2 + t % 3;
    std::vector<ComplexVector> u, v;
    // v more spread than u keeps |C| <= 1 likely
    const ComplexVector anchor = oracle::random_unit(3, rng);
    for (Index i = 0; i < n; ++i) {
      ComplexVector w = anchor + 0.8 * oracle::random_unit(3, rng);
      u.push_back(w / w.norm());
      v.push_back(oracle::random_unit(4, rng));
    }
    const RankOneDecomposition dec = make_dec(u, v);
    const ConditionEResult r = check_condition_e(dec);
    if (r.verdict != Verdict::Yes)
      continue;
    ++yes;
    const KrausSet k = channel_from_correlation(dec, *r.certificate);
    CHECK(k.tp_defect() < 1e-8);
    CHECK(certificate_error(dec, k, r.certificate->c) < 1e-6);
  }
  CHECK(yes > 0);
}

TEST_CASE("two-way phases", "[rank_one][two_way]") {
  std::mt19937_64 rng(53);
  RealVector theta;
  const RankOneDecomposition dec = two_way_instance(4, 3, rng, theta);
  const TwoWayResult r = check_two_way(dec);
  REQUIRE(r.verdict == Verdict::Yes);
  REQUIRE(r.certificate.has_value());
  const RealVector& got = r.certificate->phases;
  CHECK(got(0) == 0.0);
  for (Index i = 1; i < 4; ++i) {
    const double want = std::remainder(theta(i) - theta(0), 2 * std::numbers::pi);
    CHECK_THAT(std::remainder(got(i) - want, 2 * std::numbers::pi),
               WithinAbs(0.0, 1e-9));
  }

  SECTION("a perturbed modulus answers No") {
    RankOneDecomposition bad = dec;
    bad.u[1] = (bad.u[1] + 0.3 * bad.u[0]).normalized();
    CHECK(check_two_way(bad).verdict == Verdict::No);
  }
}

TEST_CASE("two-way Yes implies condition (e) in both directions", "[rank_one][property]") {
  std::mt19937_64 rng(54);
  for (int t = 0; t < 30; ++t) {
    RealVector theta;
    const RankOneDecomposition dec = two_way_instance(2 + t % 4, 3, rng, theta);
    REQUIRE(check_two_way(dec).verdict == Verdict::Yes);
    CHECK(check_condition_e(dec).verdict == Verdict::Yes);
    CHECK(check_condition_e(dec.swapped()).verdict == Verdict::Yes);
  }
}

TEST_CASE("correlation factor", "[rank_one]") {
  std::mt19937_64 rng(55);
  const ComplexMatrix g = oracle::random_complex(3, 5, rng);
  ComplexMatrix c = g.adjoint() * g;
  const RealVector dinv = c.diagonal().real().cwiseSqrt().cwiseInverse();
  c = dinv.asDiagonal() * c * dinv.asDiagonal();
  const ComplexMatrix gamma = correlation_factor(c);
  CHECK(gamma.rows() == 3);
  CHECK(max_abs(gamma.adjoint() * gamma - c) < 1e-12);
}

TEST_CASE("rank-one input validation", "[rank_one]") {
  CHECK_THROWS_AS(check_condition_e(RankOneDecomposition{}), std::invalid_argument);
  CHECK_THROWS_AS(check_two_way(RankOneDecomposition{}), std::invalid_argument);
  CHECK(to_string(Verdict::Inconclusive) == "Inconclusive");
}
