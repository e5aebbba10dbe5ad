#include "statedeg/psd_projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

namespace statedeg {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct Spectrum {
  RealVector values; // ascending
  ComplexMatrix vectors;
};

Spectrum spectrum_of(const ComplexMatrix& h) {
  Spectrum s;
  detail::eigh_ascending(h, s.values, s.vectors);
  return s;
}

double negative_norm(const RealVector& values) {
  return values.cwiseMin(0.0).norm();
}

ComplexMatrix clipped(const Spectrum& s) {
  return s.vectors * s.values.cwiseMax(0.0).asDiagonal() * s.vectors.adjoint();
}

struct Run {
  ProjectionResult result;
  RealVector z; // last affine iterate
};

std::optional<ProjectionResult> polish(const AffineSet& set, const RealVector& z,
                                       const Spectrum& spec,
                                       const ProjectionConfig& config);

Run dykstra(const AffineSet& set, const RealVector& start,
            const ProjectionConfig& config, bool allow_polish) {
  const Index n = set.dim;
  Run run;
  run.z = set.project(start);
  RealVector p = RealVector::Zero(run.z.size());

  auto converged_at = [&](const Spectrum& spec, int it) {
    run.result.termination = Termination::Converged;
    run.result.point = smat(run.z, n);
    run.result.residual_affine = set.distance(run.z);
    run.result.residual_psd = negative_norm(spec.values);
    run.result.iterations = it;
  };

  Spectrum spec_z = spectrum_of(smat(run.z, n));
  if (negative_norm(spec_z.values) <= config.psd_tol) {
    converged_at(spec_z, 0);
    return run;
  }

  double gap = set.distance(svec(clipped(spec_z)));
  // Best gap in the current window and over all earlier windows.
  double window_best = std::numeric_limits<double>::infinity();
  double best = window_best;
  int next_polish = 100;
  int it = 0;
  Termination termination = Termination::MaxIterations;

  while (it < config.max_iter) {
    ++it;
    const RealVector w = run.z + p;
    const RealVector y = svec(clipped(spectrum_of(smat(w, n))));
    p = w - y;
    run.z = set.project(y);
    gap = set.distance(y);
    window_best = std::min(window_best, gap);

    spec_z = spectrum_of(smat(run.z, n));
    if (negative_norm(spec_z.values) <= config.psd_tol) {
      converged_at(spec_z, it);
      return run;
    }

    if (allow_polish && it == next_polish) {
      next_polish *= 4;
      if (auto polished = polish(set, run.z, spec_z, config)) {
        run.result = *polished;
        run.result.iterations = it;
        return run;
      }
    }

    if (config.stall_window > 0 && it % config.stall_window == 0) {
      if (std::isfinite(best) && best - window_best <= config.stall_tol * best) {
        termination = Termination::Stalled;
        break;
      }
      best = std::min(best, window_best);
      window_best = std::numeric_limits<double>::infinity();
    }
  }

  if (allow_polish) {
    if (auto polished = polish(set, run.z, spec_z, config)) {
      run.result = *polished;
      run.result.iterations = it;
      return run;
    }
  }

  run.result.termination = termination;
  run.result.point = smat(run.z, n);
  run.result.residual_affine = gap;
  run.result.residual_psd = negative_norm(spec_z.values);
  run.result.iterations = it;
  return run;
}

std::optional<ProjectionResult> polish(const AffineSet& set, const RealVector& z,
                                       const Spectrum& spec,
                                       const ProjectionConfig& config) {
  const Index n = set.dim;
  const RealVector desc = spec.values.reverse();
  const double top = desc(0);
  if (!(top > 0.0))
    return std::nullopt;

  std::vector<std::pair<double, Index>> candidates;
  for (Index k = 1; k < n; ++k) {
    const double lk = desc(k - 1);
    if (lk <= 1e-9 * top)
      break;
    const double ratio = lk / std::max(desc(k), 1e-14 * top);
    if (ratio >= 10.0)
      candidates.emplace_back(ratio, k);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  if (candidates.size() > 2)
    candidates.resize(2);

  const ComplexMatrix current = smat(z, n);
  for (const auto& [ratio, k] : candidates) {
    // Columns of W: eigenvectors for the k largest eigenvalues.
    const ComplexMatrix w = spec.vectors.rightCols(k);
    RealMatrix lifted(set.rank(), k * k);
    for (Index m = 0; m < k * k; ++m) {
      RealVector e = RealVector::Zero(k * k);
      e(m) = 1.0;
      lifted.col(m) =
          set.basis.transpose() * svec(w * smat(e, k) * w.adjoint());
    }
    const RowReduction reduced = reduce_rows(lifted, set.offset, k);
    if (reduced.inconsistency > config.feas_tol)
      continue;

    ProjectionConfig sub = config;
    sub.max_iter = config.polish_budget;
    const Run face =
        dykstra(reduced.set, svec(w.adjoint() * current * w), sub, false);
    const ComplexMatrix m = smat(face.z, k);
    const Spectrum spec_m = spectrum_of(m);
    const ComplexMatrix point = w * m * w.adjoint();
    ProjectionResult out;
    out.point = (point + point.adjoint()) / 2.0;
    out.residual_affine = set.distance(svec(out.point));
    out.residual_psd = negative_norm(spec_m.values);
    out.polished = true;
    if (out.residual_affine <= config.feas_tol &&
        out.residual_psd <= config.psd_tol) {
      out.termination = Termination::Converged;
      return out;
    }
  }
  return std::nullopt;
}

} // namespace

RealVector svec(const ComplexMatrix& h) {
  const Index n = h.rows();
  RealVector v(n * n);
  Index pos = 0;
  for (Index i = 0; i < n; ++i) {
    v(pos++) = h(i, i).real();
    for (Index j = i + 1; j < n; ++j) {
      v(pos++) = kSqrt2 * h(i, j).real();
      v(pos++) = kSqrt2 * h(i, j).imag();
    }
  }
  return v;
}

ComplexMatrix smat(const RealVector& v, Index n) {
  if (v.size() != n * n)
    throw std::invalid_argument("smat: vector length does not match dimension");
  ComplexMatrix h(n, n);
  Index pos = 0;
  for (Index i = 0; i < n; ++i) {
    h(i, i) = v(pos++);
    for (Index j = i + 1; j < n; ++j) {
      const Complex c(v(pos) / kSqrt2, v(pos + 1) / kSqrt2);
      pos += 2;
      h(i, j) = c;
      h(j, i) = std::conj(c);
    }
  }
  return h;
}

Index svec_position(Index i, Index j, Index n) {
  if (i > j)
    std::swap(i, j);
  // Row r occupies 1 + 2 (n - 1 - r) slots.
  const Index row_start = i * (2 * n - i);
  return row_start + (i == j ? 0 : 1 + 2 * (j - i - 1));
}

RealVector AffineSet::project(const RealVector& z) const {
  if (basis.cols() == 0)
    return z;
  return z - basis * (basis.transpose() * z - offset);
}

double AffineSet::distance(const RealVector& z) const {
  if (basis.cols() == 0)
    return 0.0;
  return (basis.transpose() * z - offset).norm();
}

RowReduction reduce_rows(const RealMatrix& rows, const RealVector& rhs,
                         Index dim, double row_tol) {
  if (rows.rows() != rhs.size())
    throw std::invalid_argument("reduce_rows: rhs length mismatch");
  if (rows.cols() != dim * dim)
    throw std::invalid_argument("reduce_rows: row length is not dim^2");
  RowReduction out;
  out.raw_rows = rows.rows();
  out.set.dim = dim;
  if (rows.rows() == 0) {
    out.set.basis.resize(dim * dim, 0);
    out.set.offset.resize(0);
    return out;
  }
  // JacobiSVD rather than BDCSVD: Eigen 3.4's BDCSVD returned inaccurate
  // singular vectors on these highly degenerate spectra.
  Eigen::JacobiSVD<RealMatrix> solver(rows, Eigen::ComputeThinU |
                                                Eigen::ComputeThinV);
  const RealVector& sv = solver.singularValues();
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > row_tol * sv(0))
    ++rank;
  const RealMatrix u = solver.matrixU().leftCols(rank);
  out.set.basis = solver.matrixV().leftCols(rank);
  const RealVector coeffs = u.transpose() * rhs;
  out.set.offset = coeffs.cwiseQuotient(sv.head(rank));
  out.inconsistency = (rhs - u * coeffs).norm();
  return out;
}

ProjectionResult find_psd_point(const AffineSet& set, const ComplexMatrix& start,
                                const ProjectionConfig& config) {
  if (!(config.feas_tol > 0.0) || !(config.psd_tol > 0.0) ||
      !(config.stall_tol > 0.0) || config.max_iter < 0 ||
      config.stall_window < 0)
    throw std::invalid_argument("projection config: tolerances must be "
                                "positive and budgets nonnegative");
  if (start.rows() != set.dim || start.cols() != set.dim)
    throw std::invalid_argument("find_psd_point: start has wrong dimension");
  return dykstra(set, svec((start + start.adjoint()) / 2.0), config, config.polish)
      .result;
}

} // namespace statedeg
