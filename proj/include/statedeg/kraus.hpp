#pragma once

#include <vector>

#include "statedeg/tensor_core.hpp"

namespace statedeg {

/// Kraus operators F_j : C^in -> C^out of a completely positive map
/// X -> sum_j F_j X F_j^*.
struct KrausSet {
  std::vector<ComplexMatrix> ops;

  Index in_dim() const { return ops.empty() ? 0 : ops.front().cols(); }
  Index out_dim() const { return ops.empty() ? 0 : ops.front().rows(); }
  Index size() const { return static_cast<Index>(ops.size()); }

  /// sum_j F_j^* F_j
  ComplexMatrix completeness() const;
  /// ||sum_j F_j^* F_j - I||_F
  double tp_defect() const;

  ComplexMatrix apply(const ComplexMatrix& x) const;
  /// (I_blocks (x) Phi) on a block matrix whose blocks are in_dim x in_dim.
  ComplexMatrix apply_local(const ComplexMatrix& x, Index blocks) const;
};

/// Throws std::invalid_argument when the operators are not all out x in.
void require_consistent(const KrausSet& k);

/// Throws std::invalid_argument when ||sum F^*F - I||_F > tol.
void require_cptp(const KrausSet& k, double tol = 1e-8);

/// Choi matrix with the input index slow and the output index fast:
///   J = sum_{k,l} |k><l| (x) Phi(|k><l|).
struct ChoiMatrix {
  ComplexMatrix j;
  Index in_dim = 0;
  Index out_dim = 0;

  /// tr_out J, which is I_in for a trace-preserving map.
  ComplexMatrix output_trace() const;
  ComplexMatrix apply(const ComplexMatrix& x) const;
};

ChoiMatrix choi_from_kraus(const KrausSet& k);

/// F_j <- F_j (sum F^*F)^{-1/2}; requires the completeness matrix to be
/// positive definite.
KrausSet normalize_trace_preserving(const KrausSet& k);

KrausSet identity_kraus(Index dim);

} // namespace statedeg
