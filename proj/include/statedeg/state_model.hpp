#pragma once

#include <string>
#include <vector>

#include "statedeg/tensor_core.hpp"

namespace statedeg {

/// Which party's share is processed into the other's.
///   EtoB: a channel on E (dim q) maps rho_AE onto rho_AB.
///   BtoE: a channel on B (dim p) maps rho_AB onto rho_AE.
enum class Direction { EtoB, BtoE };

std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);

/// Pure tripartite vector x in C^n (x) C^p (x) C^q, lexicographic layout.
/// Unnormalised vectors are allowed; `normalized()` records whether the
/// caller asserted unit norm, and that assertion is checked.
class TripartiteState {
public:
  TripartiteState(Dims dims, ComplexVector amplitudes, bool normalized = false);

  const Dims& dims() const { return dims_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  bool normalized() const { return normalized_; }

  Complex amplitude(Index i, Index j, Index k) const {
    return amplitudes_(dims_.flat(i, j, k));
  }
  double norm_squared() const { return amplitudes_.squaredNorm(); }

  TripartiteState scaled(Complex t) const;
  TripartiteState unit() const;
  ComplexMatrix density() const;

private:
  Dims dims_;
  ComplexVector amplitudes_;
  bool normalized_;
};

/// S_i is the p x q slice at first index i; R_i = S_i^t. The SVD factors
/// belong to the R_i (R_i = U_i D_i V_i^t).
struct BlockFamily {
  std::vector<ComplexMatrix> s;
  std::vector<ComplexMatrix> r;
  std::vector<SvdFactors> r_svd;

  Index count() const { return static_cast<Index>(s.size()); }
  double norm_squared() const;

  // Source family of a direction (R for EtoB, S for BtoE); the target family
  // is always the transpose of the source.
  const std::vector<ComplexMatrix>& source(Direction d) const {
    return d == Direction::EtoB ? r : s;
  }
  const std::vector<ComplexMatrix>& target(Direction d) const {
    return d == Direction::EtoB ? s : r;
  }
};

BlockFamily extract_blocks(const TripartiteState& state,
                           double rank_tol = kDefaultRankTol);

/// (M_u M_v^*)_{u,v} laid out as an (n*rows) x (n*rows) block matrix.
ComplexMatrix assemble_products(const std::vector<ComplexMatrix>& blocks);

/// X1 = rho_BE, X2 = rho_AE, X3 = rho_AB.
struct ReducedDensities {
  ComplexMatrix x1;
  ComplexMatrix x2;
  ComplexMatrix x3;
};

ReducedDensities reduced_densities(const TripartiteState& state);

/// Source / target reduced density for a direction (X2 -> X3 for EtoB).
ComplexMatrix source_density(const TripartiteState& state, Direction d);
ComplexMatrix target_density(const TripartiteState& state, Direction d);

namespace fixtures {

/// (|000> + |111>) / sqrt(2) on 2x2x2.
TripartiteState ghz();

/// x = (a, 0, b, 0, 0, a, 0, -b) with 2(a^2 + b^2) = 1.
TripartiteState example2(double a, double b);

/// The 3x2x2 state built from p_+- = (alpha, +-beta), q_+- = (alpha, +-i beta),
/// phi_+- = (a, +-b); left unnormalised.
TripartiteState sec4(double alpha, double a);

/// Maximally entangled pair sent through the qubit depolarizing channel,
/// purified on a four-dimensional E; unnormalised (norm^2 = 2).
TripartiteState bell_lift(double epsilon);

} // namespace fixtures

} // namespace statedeg
