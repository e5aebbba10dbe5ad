#include "statedeg/rank_one.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace statedeg {

namespace {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

constexpr Index kMaxMinorEnumeration = 16;

double min_eigenvalue(const ComplexMatrix& h) {
  RealVector values;
  ComplexMatrix vectors;
  detail::eigh_ascending(h, values, vectors);
  return values(0);
}

ComplexMatrix principal(const ComplexMatrix& m, const std::vector<Index>& idx) {
  const auto k = static_cast<Index>(idx.size());
  ComplexMatrix out(k, k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b)
      out(a, b) = m(idx[a], idx[b]);
  return out;
}

std::vector<Index> members(unsigned mask) {
  std::vector<Index> idx;
  for (Index i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u)
      idx.push_back(i);
  return idx;
}

} // namespace

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::Yes:
    return "Yes";
  case Verdict::No:
    return "No";
  case Verdict::Inconclusive:
    return "Inconclusive";
  }
  return "unknown";
}

RankOneDecomposition RankOneDecomposition::swapped() const {
  return RankOneDecomposition{v, d, u};
}

std::optional<RankOneDecomposition>
detect_rank_one(std::span<const ComplexMatrix> blocks, double tol) {
  if (blocks.empty())
    return std::nullopt;
  RankOneDecomposition dec;
  for (const auto& block : blocks) {
    const SvdFactors f = svd(block, tol);
    if (f.rank != 1)
      return std::nullopt;
    dec.u.push_back(f.u.col(0));
    dec.d.push_back(f.singular_values(0));
    dec.v.push_back(f.v.col(0));
  }
  return dec;
}

std::optional<RankOneDecomposition>
detect_rank_one(const BlockFamily& blocks, Direction direction, double tol) {
  const auto& src = blocks.source(direction);
  return detect_rank_one(std::span<const ComplexMatrix>(src), tol);
}

ConditionEResult check_condition_e(const RankOneDecomposition& dec,
                                   const RankOneConfig& config) {
  const Index n = dec.count();
  if (n == 0)
    throw std::invalid_argument("check_condition_e: empty decomposition");
  const ComplexMatrix gu = gram(dec.u);
  const ComplexMatrix gv = gram(dec.v);

  ConditionEResult result;
  ComplexMatrix c = ComplexMatrix::Ones(n, n);
  BoolMatrix fixed = BoolMatrix::Constant(n, n, false);
  for (Index i = 0; i < n; ++i) {
    c(i, i) = 1.0;
    fixed(i, i) = true;
  }

  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(gv(i, j)) > config.div_tol) {
        const Complex ratio = gu(i, j) / gv(i, j);
        c(i, j) = ratio;
        c(j, i) = std::conj(ratio);
        fixed(i, j) = fixed(j, i) = true;
        if (std::abs(ratio) > 1.0 + config.match_tol) {
          result.verdict = Verdict::No;
          result.obstruction = {i, j};
          result.obstruction_eigenvalue = 1.0 - std::abs(ratio);
          result.reason = "forced correlation entry exceeds 1 in modulus";
          return result;
        }
      } else if (std::abs(gu(i, j)) > config.match_tol) {
        result.verdict = Verdict::No;
        result.obstruction = {i, j};
        result.obstruction_eigenvalue = -std::abs(gu(i, j));
        result.reason = "target overlap vanishes but source overlap does not";
        return result;
      }
    }

  // Principal submatrices made only of forced entries must already be PSD.
  if (n <= kMaxMinorEnumeration) {
    const unsigned full = (1u << n) - 1u;
    for (int size = 3; size <= n; ++size)
      for (unsigned mask = 1; mask <= full; ++mask) {
        if (std::popcount(mask) != size)
          continue;
        const std::vector<Index> idx = members(mask);
        bool clique = true;
        for (std::size_t a = 0; a < idx.size() && clique; ++a)
          for (std::size_t b = a + 1; b < idx.size() && clique; ++b)
            clique = fixed(idx[a], idx[b]);
        if (!clique)
          continue;
        const double lam = min_eigenvalue(principal(c, idx));
        if (lam < -config.correlation_psd_tol) {
          result.verdict = Verdict::No;
          result.obstruction = idx;
          result.obstruction_eigenvalue = lam;
          result.reason = "forced principal submatrix is not PSD";
          return result;
        }
      }
  }

  CorrelationCertificate cert;
  cert.fixed_mask = fixed;
  if (fixed.all() || min_eigenvalue(c) >= -config.correlation_psd_tol) {
    cert.c = c;
    cert.completed = !fixed.all();
    result.verdict = Verdict::Yes;
    result.certificate = cert;
    return result;
  }

  // PSD completion: affine set pins the forced svec coordinates.
  std::vector<std::pair<Index, double>> pins;
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) {
      if (!fixed(i, j))
        continue;
      const Index pos = svec_position(i, j, n);
      if (i == j) {
        pins.emplace_back(pos, 1.0);
      } else {
        pins.emplace_back(pos, std::numbers::sqrt2 * c(i, j).real());
        pins.emplace_back(pos + 1, std::numbers::sqrt2 * c(i, j).imag());
      }
    }
  AffineSet set;
  set.dim = n;
  set.basis = RealMatrix::Zero(n * n, static_cast<Index>(pins.size()));
  set.offset.resize(static_cast<Index>(pins.size()));
  for (std::size_t r = 0; r < pins.size(); ++r) {
    set.basis(pins[r].first, static_cast<Index>(r)) = 1.0;
    set.offset(static_cast<Index>(r)) = pins[r].second;
  }

  ProjectionConfig completion = config.completion;
  completion.psd_tol = std::min(completion.psd_tol, config.correlation_psd_tol);
  const ProjectionResult projected = find_psd_point(set, c, completion);
  if (!projected.converged()) {
    result.verdict = Verdict::Inconclusive;
    result.reason = "PSD completion did not converge";
    return result;
  }
  cert.c = projected.point;
  cert.completed = true;
  result.verdict = Verdict::Yes;
  result.certificate = cert;
  return result;
}

TwoWayResult check_two_way(const RankOneDecomposition& dec,
                           const RankOneConfig& config) {
  const Index n = dec.count();
  if (n == 0)
    throw std::invalid_argument("check_two_way: empty decomposition");
  const ComplexMatrix gu = gram(dec.u);
  const ComplexMatrix gv = gram(dec.v);
  TwoWayResult result;
  result.verdict = Verdict::No;

  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(std::abs(gu(i, j)) - std::abs(gv(i, j))) > config.match_tol)
        return result;

  // theta_j - theta_i = arg gu_ij - arg gv_ij along edges with gv_ij != 0.
  RealVector theta = RealVector::Constant(n, std::nan(""));
  for (Index root = 0; root < n; ++root) {
    if (!std::isnan(theta(root)))
      continue;
    theta(root) = 0.0;
    std::queue<Index> frontier;
    frontier.push(root);
    while (!frontier.empty()) {
      const Index i = frontier.front();
      frontier.pop();
      for (Index j = 0; j < n; ++j) {
        if (j == i || !std::isnan(theta(j)) ||
            std::abs(gv(i, j)) <= config.div_tol)
          continue;
        theta(j) = theta(i) + std::arg(gu(i, j)) - std::arg(gv(i, j));
        frontier.push(j);
      }
    }
  }
  for (Index i = 0; i < n; ++i)
    theta(i) = std::remainder(theta(i), 2.0 * std::numbers::pi);

  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const Complex conj =
          std::polar(1.0, -theta(i)) * gv(i, j) * std::polar(1.0, theta(j));
      if (std::abs(gu(i, j) - conj) > config.match_tol)
        return result;
    }
  result.verdict = Verdict::Yes;
  result.certificate = TwoWayCertificate{theta};
  return result;
}

ComplexMatrix correlation_factor(const ComplexMatrix& c) {
  RealVector values;
  ComplexMatrix vectors;
  detail::eigh_ascending((c + c.adjoint()) / 2.0, values, vectors);
  const double top = std::max(values.maxCoeff(), 0.0);
  std::vector<Index> keep;
  for (Index k = values.size() - 1; k >= 0; --k)
    if (values(k) > 1e-12 * std::max(top, 1.0))
      keep.push_back(k);
  ComplexMatrix gamma(static_cast<Index>(keep.size()), c.cols());
  for (std::size_t r = 0; r < keep.size(); ++r)
    gamma.row(static_cast<Index>(r)) =
        std::sqrt(values(keep[r])) * vectors.col(keep[r]).adjoint();
  return gamma;
}

KrausSet channel_from_correlation(const RankOneDecomposition& dec,
                                  const CorrelationCertificate& cert) {
  const Index n = dec.count();
  if (n == 0 || cert.c.rows() != n)
    throw std::invalid_argument("channel_from_correlation: size mismatch");
  const Index in = dec.u.front().size();
  const Index out = dec.v.front().size();
  const ComplexMatrix gamma = correlation_factor(cert.c);
  const Index r = gamma.rows();

  ComplexMatrix sources(in, n);
  ComplexMatrix images(out * r, n); // row index b * r + j
  for (Index i = 0; i < n; ++i) {
    sources.col(i) = dec.u[i];
    for (Index b = 0; b < out; ++b)
      images.col(i).segment(b * r, r) = dec.v[i](b) * gamma.col(i);
  }

  Eigen::JacobiSVD<ComplexMatrix> span_svd(sources, Eigen::ComputeFullU |
                                                        Eigen::ComputeThinV);
  const RealVector& sv = span_svd.singularValues();
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-10 * sv(0))
    ++rank;
  const ComplexMatrix ur = span_svd.matrixU().leftCols(rank);
  const ComplexMatrix vr = span_svd.matrixV().leftCols(rank);
  // Moore-Penrose inverse of `sources` restricted to its numerical range.
  const ComplexMatrix pinv =
      vr * sv.head(rank).cwiseInverse().asDiagonal() * ur.adjoint();
  const ComplexMatrix isometry = images * pinv;

  KrausSet k;
  for (Index j = 0; j < r; ++j) {
    ComplexMatrix f(out, in);
    for (Index b = 0; b < out; ++b)
      f.row(b) = isometry.row(b * r + j);
    k.ops.push_back(std::move(f));
  }
  for (Index extra = rank; extra < in; ++extra) {
    ComplexMatrix f = ComplexMatrix::Zero(out, in);
    f.row(0) = span_svd.matrixU().col(extra).adjoint();
    k.ops.push_back(std::move(f));
  }
  return normalize_trace_preserving(k);
}

} // namespace statedeg
