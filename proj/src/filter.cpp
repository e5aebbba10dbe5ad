#include "statedeg/filter.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace statedeg {

namespace {

using Products = std::vector<std::vector<ComplexMatrix>>;

Products products_of(const std::vector<ComplexMatrix>& blocks) {
  const std::size_t n = blocks.size();
  Products out(n, std::vector<ComplexMatrix>(n));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      out[u][v] = blocks[u] * blocks[v].adjoint();
  return out;
}

ComplexMatrix combine(const Products& prods, const ComplexMatrix& coeffs) {
  const Index rows = prods.front().front().rows();
  ComplexMatrix m = ComplexMatrix::Zero(rows, rows);
  for (Index u = 0; u < coeffs.rows(); ++u)
    for (Index v = 0; v < coeffs.cols(); ++v)
      if (coeffs(u, v) != Complex(0.0))
        m += coeffs(u, v) * prods[u][v];
  return m;
}

class WitnessEvaluator {
public:
  WitnessEvaluator(const BlockFamily& blocks, Direction direction, double slack)
      : in_(products_of(blocks.source(direction))),
        out_(products_of(blocks.target(direction))), slack_(slack) {}

  FilterWitness operator()(const ComplexMatrix& coeffs, WitnessKind kind) const {
    FilterWitness w;
    w.kind = kind;
    w.coefficients = coeffs;
    const double scale = kind == WitnessKind::Combination ? 1.0 : 0.5;
    w.d_in = scale * trace_norm(combine(in_, coeffs));
    w.d_out = scale * trace_norm(combine(out_, coeffs));
    w.violated = w.d_in < w.d_out - scale * slack_;
    return w;
  }

private:
  Products in_;
  Products out_;
  double slack_;
};

void finish(FilterReport& report) {
  report.verdict = report.violation_count() > 0 ? FilterVerdict::RuledOut
                                                : FilterVerdict::Passed;
}

void require_blocks(const BlockFamily& blocks) {
  if (blocks.count() == 0)
    throw std::invalid_argument("filter: empty block family");
}

} // namespace

std::string to_string(WitnessKind k) {
  switch (k) {
  case WitnessKind::PairDifference:
    return "pair_difference";
  case WitnessKind::HermitianSum:
    return "hermitian_sum";
  case WitnessKind::Combination:
    return "combination";
  }
  return "unknown";
}

std::string to_string(FilterVerdict v) {
  return v == FilterVerdict::RuledOut ? "RuledOut" : "Passed";
}

std::size_t FilterReport::violation_count() const {
  return static_cast<std::size_t>(
      std::count_if(witnesses.begin(), witnesses.end(),
                    [](const FilterWitness& w) { return w.violated; }));
}

std::optional<FilterWitness> FilterReport::strongest_violation() const {
  std::optional<FilterWitness> best;
  for (const auto& w : witnesses)
    if (w.violated && (!best || w.margin() > best->margin()))
      best = w;
  return best;
}

FilterWitness evaluate_witness(const BlockFamily& blocks, Direction direction,
                               const ComplexMatrix& coefficients,
                               WitnessKind kind, double slack) {
  require_blocks(blocks);
  if (coefficients.rows() != blocks.count() ||
      coefficients.cols() != blocks.count())
    throw std::invalid_argument("witness coefficients must be n x n");
  return WitnessEvaluator(blocks, direction, slack)(coefficients, kind);
}

FilterReport pair_filter(const BlockFamily& blocks, Direction direction,
                         const FilterConfig& config) {
  require_blocks(blocks);
  const Index n = blocks.count();
  FilterReport report;
  report.direction = direction;
  report.slack = config.slack_tol * blocks.norm_squared();
  const WitnessEvaluator eval(blocks, direction, report.slack);

  // Index pairs (i,j) enumerated lexicographically as flat i*n + j.
  const Index pairs = n * n;
  for (Index a = 0; a < pairs; ++a)
    for (Index b = a + 1; b < pairs; ++b) {
      ComplexMatrix c = ComplexMatrix::Zero(n, n);
      c(a / n, a % n) += 1.0;
      c(b / n, b % n) -= 1.0;
      report.witnesses.push_back(eval(c, WitnessKind::PairDifference));
    }
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      ComplexMatrix c = ComplexMatrix::Zero(n, n);
      c(i, j) = c(j, i) = 1.0;
      report.witnesses.push_back(eval(c, WitnessKind::HermitianSum));
    }
  finish(report);
  return report;
}

FilterReport random_witness_filter(const BlockFamily& blocks,
                                   Direction direction, int count,
                                   std::uint64_t seed,
                                   const FilterConfig& config) {
  require_blocks(blocks);
  if (count < 1)
    throw std::invalid_argument("random_witness_filter: count must be >= 1");
  const Index n = blocks.count();
  FilterReport report;
  report.direction = direction;
  report.slack = config.slack_tol * blocks.norm_squared();
  const WitnessEvaluator eval(blocks, direction, report.slack);

  // tr(A_u A_v^*); a Hermitian witness orthogonal to conj(traces) is traceless
  // on both sides, which sharpens the comparison.
  const auto& src = blocks.source(direction);
  ComplexMatrix traces(n, n);
  for (Index u = 0; u < n; ++u)
    for (Index v = 0; v < n; ++v)
      traces(u, v) = (src[u] * src[v].adjoint()).trace();
  const ComplexMatrix trace_dir = traces.conjugate();
  const double trace_dir_norm2 = trace_dir.squaredNorm();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&] {
    ComplexMatrix g(n, n);
    for (Index u = 0; u < n; ++u)
      for (Index v = 0; v < n; ++v)
        g(u, v) = Complex(normal(rng), normal(rng));
    return g;
  };

  report.witnesses.reserve(count);
  for (int s = 0; s < count; ++s) {
    ComplexMatrix c = gaussian();
    switch (s % 3) {
    case 0:
      c = (c + c.adjoint()).eval() / 2.0;
      break;
    case 1: {
      c = (c + c.adjoint()).eval() / 2.0;
      if (trace_dir_norm2 > 0.0) {
        const Complex t = (c.cwiseProduct(traces)).sum();
        c -= (t.real() / trace_dir_norm2) * trace_dir;
        c = (c + c.adjoint()).eval() / 2.0;
      }
      break;
    }
    default:
      break;
    }
    report.witnesses.push_back(eval(c, WitnessKind::Combination));
  }
  finish(report);
  return report;
}

Contractivity contractivity_check(const KrausSet& channel,
                                  const ComplexMatrix& sigma, double tp_tol) {
  require_cptp(channel, tp_tol);
  require_finite(sigma, "contractivity_check");
  return {trace_norm(sigma), trace_norm(channel.apply(sigma))};
}

} // namespace statedeg
