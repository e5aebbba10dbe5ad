#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "statedeg/kraus.hpp"
#include "statedeg/state_model.hpp"

namespace statedeg {

// Necessary-condition filter built on trace-norm contractivity: a channel
// Phi with Phi(A_u A_v^*) = B_u B_v^* for all u, v satisfies
//   ||sum L_uv B_u B_v^*||_1 <= ||sum L_uv A_u A_v^*||_1
// for every coefficient matrix L. A witness with input norm strictly below
// its output norm rules the direction out.

enum class WitnessKind { PairDifference, HermitianSum, Combination };

std::string to_string(WitnessKind k);

struct FilterWitness {
  WitnessKind kind = WitnessKind::PairDifference;
  ComplexMatrix coefficients; // n x n, M = sum coefficients(u,v) X_u X_v^*
  double d_in = 0.0;  // half trace norm for pair witnesses, trace norm otherwise
  double d_out = 0.0;
  bool violated = false;

  double margin() const { return d_out - d_in; }
};

enum class FilterVerdict { Passed, RuledOut };

std::string to_string(FilterVerdict v);

struct FilterReport {
  Direction direction = Direction::EtoB;
  std::vector<FilterWitness> witnesses;
  FilterVerdict verdict = FilterVerdict::Passed;
  double slack = 0.0;

  std::size_t violation_count() const;
  /// Violation with the largest margin, if any.
  std::optional<FilterWitness> strongest_violation() const;
};

struct FilterConfig {
  double slack_tol = 1e-8; // scaled by ||x||^2
};

/// Evaluates a single witness on the given direction.
FilterWitness evaluate_witness(const BlockFamily& blocks, Direction direction,
                               const ComplexMatrix& coefficients,
                               WitnessKind kind, double slack);

/// All differences (i,j) - (i',j') over distinct index pairs, plus the
/// Hermitian sums (i,j) + (j,i) for i < j. Witnesses are listed in
/// lexicographic order of their index pairs.
FilterReport pair_filter(const BlockFamily& blocks, Direction direction,
                         const FilterConfig& config = {});

/// `count` seeded random coefficient matrices; deterministic for a seed.
FilterReport random_witness_filter(const BlockFamily& blocks,
                                   Direction direction, int count,
                                   std::uint64_t seed,
                                   const FilterConfig& config = {});

struct Contractivity {
  double before = 0.0;
  double after = 0.0;
};

/// Trace norms of sigma and Phi(sigma). Rejects non-CPTP Kraus sets.
Contractivity contractivity_check(const KrausSet& channel,
                                  const ComplexMatrix& sigma,
                                  double tp_tol = 1e-8);

} // namespace statedeg
