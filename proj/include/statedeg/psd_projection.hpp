#pragma once

#include "statedeg/tensor_core.hpp"

namespace statedeg {

/// Isometric real coordinates of an N x N Hermitian matrix (length N^2):
/// diagonal entries as-is, strict upper entries as sqrt(2) Re and
/// sqrt(2) Im. Frobenius inner products become dot products.
RealVector svec(const ComplexMatrix& h);
ComplexMatrix smat(const RealVector& v, Index n);
/// Position of entry (i, j), i <= j, in svec; the imaginary part of an
/// off-diagonal entry sits at the returned position + 1.
Index svec_position(Index i, Index j, Index n);

/// { z in R^{N^2} : basis^T z = offset } with orthonormal basis columns.
struct AffineSet {
  Index dim = 0;
  RealMatrix basis;
  RealVector offset;

  RealVector project(const RealVector& z) const;
  double distance(const RealVector& z) const;
  Index rank() const { return basis.cols(); }
};

struct RowReduction {
  AffineSet set;
  double inconsistency = 0.0; // ||rhs - P_range rhs||
  Index raw_rows = 0;
};

/// Reduces the system rows * z = rhs (each row in svec coordinates) to an
/// orthonormal, linearly independent set. Singular values at or below
/// row_tol * sigma_max are treated as dependencies.
RowReduction reduce_rows(const RealMatrix& rows, const RealVector& rhs,
                         Index dim, double row_tol = 1e-10);

struct ProjectionConfig {
  int max_iter = 20000;
  double feas_tol = 1e-8;
  double psd_tol = 1e-9;
  int stall_window = 500;
  double stall_tol = 1e-12;
  bool polish = true;
  int polish_budget = 4000;
};

enum class Termination { Converged, Stalled, MaxIterations };

struct ProjectionResult {
  Termination termination = Termination::MaxIterations;
  ComplexMatrix point;          // PSD when converged
  double residual_affine = 0.0; // distance of `point` to the affine set
  double residual_psd = 0.0;    // Frobenius size of the negative part
  int iterations = 0;
  bool polished = false;

  bool converged() const { return termination == Termination::Converged; }
};

/// Dykstra alternating projections between the PSD cone and an affine set,
/// with facial polishing: every so often the iterate's dominant eigenspace
/// is taken as a candidate face and the same iteration is rerun there.
/// Converged means residual_affine <= feas_tol and residual_psd <= psd_tol.
/// Never claims the intersection is empty.
ProjectionResult find_psd_point(const AffineSet& set, const ComplexMatrix& start,
                                const ProjectionConfig& config);

} // namespace statedeg
