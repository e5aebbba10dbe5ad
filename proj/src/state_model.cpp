#include "statedeg/state_model.hpp"

#include <cmath>
#include <stdexcept>

namespace statedeg {

std::string to_string(Direction d) {
  return d == Direction::EtoB ? "EtoB" : "BtoE";
}

Direction direction_from_string(const std::string& s) {
  if (s == "EtoB" || s == "etob" || s == "e2b")
    return Direction::EtoB;
  if (s == "BtoE" || s == "btoe" || s == "b2e")
    return Direction::BtoE;
  throw std::invalid_argument("unknown direction '" + s + "'");
}

TripartiteState::TripartiteState(Dims dims, ComplexVector amplitudes,
                                 bool normalized)
    : dims_(dims), amplitudes_(std::move(amplitudes)), normalized_(normalized) {
  if (dims_.n <= 0 || dims_.p <= 0 || dims_.q <= 0)
    throw std::invalid_argument("state dimensions must be positive");
  if (amplitudes_.size() != dims_.total())
    throw std::invalid_argument(
        "state has " + std::to_string(amplitudes_.size()) +
        " amplitudes, dims require " + std::to_string(dims_.total()));
  if (!amplitudes_.allFinite())
    throw std::invalid_argument("state has non-finite amplitudes");
  if (normalized_ && std::abs(amplitudes_.squaredNorm() - 1.0) > 1e-10)
    throw std::invalid_argument("state flagged normalized but ||x||^2 = " +
                                std::to_string(amplitudes_.squaredNorm()));
}

TripartiteState TripartiteState::scaled(Complex t) const {
  return TripartiteState(dims_, amplitudes_ * t, false);
}

TripartiteState TripartiteState::unit() const {
  const double nrm = amplitudes_.norm();
  if (nrm == 0.0)
    throw std::invalid_argument("cannot normalise the zero state");
  return TripartiteState(dims_, amplitudes_ / nrm, true);
}

ComplexMatrix TripartiteState::density() const {
  return amplitudes_ * amplitudes_.adjoint();
}

double BlockFamily::norm_squared() const {
  double total = 0.0;
  for (const auto& m : s)
    total += m.squaredNorm();
  return total;
}

BlockFamily extract_blocks(const TripartiteState& state, double rank_tol) {
  const Dims& d = state.dims();
  BlockFamily out;
  out.s.reserve(d.n);
  out.r.reserve(d.n);
  out.r_svd.reserve(d.n);
  for (Index i = 0; i < d.n; ++i) {
    ComplexMatrix s(d.p, d.q);
    for (Index j = 0; j < d.p; ++j)
      for (Index k = 0; k < d.q; ++k)
        s(j, k) = state.amplitude(i, j, k);
    ComplexMatrix r = s.transpose();
    out.r_svd.push_back(svd(r, rank_tol));
    out.s.push_back(std::move(s));
    out.r.push_back(std::move(r));
  }
  return out;
}

ComplexMatrix assemble_products(const std::vector<ComplexMatrix>& blocks) {
  if (blocks.empty())
    return ComplexMatrix();
  const Index n = static_cast<Index>(blocks.size());
  const Index rows = blocks.front().rows();
  ComplexMatrix out(n * rows, n * rows);
  for (Index u = 0; u < n; ++u)
    for (Index v = 0; v < n; ++v)
      out.block(u * rows, v * rows, rows, rows) = blocks[u] * blocks[v].adjoint();
  return out;
}

ReducedDensities reduced_densities(const TripartiteState& state) {
  const ComplexMatrix rho = state.density();
  return {partial_trace(rho, state.dims(), Party::A),
          partial_trace(rho, state.dims(), Party::B),
          partial_trace(rho, state.dims(), Party::E)};
}

ComplexMatrix source_density(const TripartiteState& state, Direction d) {
  return partial_trace(state.density(), state.dims(),
                       d == Direction::EtoB ? Party::B : Party::E);
}

ComplexMatrix target_density(const TripartiteState& state, Direction d) {
  return partial_trace(state.density(), state.dims(),
                       d == Direction::EtoB ? Party::E : Party::B);
}

namespace fixtures {

TripartiteState ghz() {
  ComplexVector x = ComplexVector::Zero(8);
  x(0) = x(7) = 1.0 / std::sqrt(2.0);
  return TripartiteState({2, 2, 2}, x, true);
}

TripartiteState example2(double a, double b) {
  if (a < 0.0 || b < 0.0)
    throw std::invalid_argument("example2: a and b must be nonnegative");
  if (std::abs(2.0 * (a * a + b * b) - 1.0) > 1e-10)
    throw std::invalid_argument("example2: requires 2(a^2 + b^2) = 1");
  ComplexVector x(8);
  x << a, 0.0, b, 0.0, 0.0, a, 0.0, -b;
  return TripartiteState({2, 2, 2}, x, false);
}

TripartiteState sec4(double alpha, double a) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(a > 0.0 && a < 1.0))
    throw std::invalid_argument("sec4: alpha and a must lie in (0, 1)");
  const double beta = std::sqrt(1.0 - alpha * alpha);
  const double b = std::sqrt(1.0 - a * a);
  const Complex I(0.0, 1.0);
  const ComplexVector p_plus = (ComplexVector(2) << alpha, beta).finished();
  const ComplexVector p_minus = (ComplexVector(2) << alpha, -beta).finished();
  const ComplexVector q_plus = (ComplexVector(2) << alpha, I * beta).finished();
  const ComplexVector q_minus = (ComplexVector(2) << alpha, -I * beta).finished();
  const ComplexVector phi_plus = (ComplexVector(2) << a, b).finished();
  const ComplexVector phi_minus = (ComplexVector(2) << a, -b).finished();

  const Dims dims{3, 2, 2};
  ComplexVector x(dims.total());
  for (Index j = 0; j < 2; ++j)
    for (Index k = 0; k < 2; ++k) {
      x(dims.flat(0, j, k)) =
          p_plus(j) * phi_plus(k) + p_minus(j) * phi_minus(k);
      x(dims.flat(1, j, k)) = q_plus(j) * phi_plus(k);
      x(dims.flat(2, j, k)) = q_minus(j) * phi_minus(k);
    }
  return TripartiteState(dims, x, false);
}

TripartiteState bell_lift(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 0.75))
    throw std::invalid_argument("bell_lift: epsilon must lie in [0, 3/4]");
  const double al = std::sqrt(1.0 - epsilon);
  const double be = std::sqrt(epsilon / 3.0);
  // sqrt(1-e)(|00>+|11>)|0> + b(|00>-|11>)|1> + b(|01>-|10>)|2>
  //   + b(|01>+|10>)|3>
  const Dims dims{2, 2, 4};
  ComplexVector x = ComplexVector::Zero(dims.total());
  x(dims.flat(0, 0, 0)) = al;
  x(dims.flat(1, 1, 0)) = al;
  x(dims.flat(0, 0, 1)) = be;
  x(dims.flat(1, 1, 1)) = -be;
  x(dims.flat(0, 1, 2)) = be;
  x(dims.flat(1, 0, 2)) = -be;
  x(dims.flat(0, 1, 3)) = be;
  x(dims.flat(1, 0, 3)) = be;
  return TripartiteState(dims, x, false);
}

} // namespace fixtures

} // namespace statedeg
