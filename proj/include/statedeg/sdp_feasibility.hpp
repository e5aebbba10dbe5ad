#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "statedeg/filter.hpp"
#include "statedeg/kraus.hpp"
#include "statedeg/psd_projection.hpp"
#include "statedeg/rank_one.hpp"
#include "statedeg/state_model.hpp"

namespace statedeg {

struct SolverConfig {
  int max_iter = 20000;
  double feas_tol = 1e-8;
  double psd_tol = 1e-9;
  int stall_window = 500;
  double stall_tol = 1e-12;
  double verify_tol = 1e-7;
  double rank_tol = 1e-10; // Kraus extraction, relative to max(1, lambda_max)
  double row_tol = 1e-10;  // constraint row reduction
  bool polish = true;
  int polish_budget = 4000;

  /// Throws std::invalid_argument on non-positive tolerances or budgets.
  void validate() const;
  ProjectionConfig projection() const;
};

enum class PairSelection { All, DiagonalOnly };

/// Real-linear constraints on the Choi matrix J (dimension in*out) of a
/// candidate channel: tr_out J = I_in and Phi(A_u A_v^*) = B_u B_v^*, each
/// product split into its Hermitian and anti-Hermitian parts.
struct AffineSystem {
  Index in_dim = 0;
  Index out_dim = 0;
  AffineSet set;
  Index raw_rows = 0;
  Index reduced_rank = 0;
  std::vector<Index> independent_sources;
  std::vector<std::pair<Index, Index>> pairs;
  double inconsistency = 0.0;
  /// Empty when consistent; otherwise a description of the contradiction.
  std::string cause;

  bool consistent() const { return cause.empty(); }
};

AffineSystem build_constraints(const BlockFamily& blocks, Direction direction,
                               PairSelection selection = PairSelection::All,
                               double row_tol = 1e-10);

enum class Status { Feasible, RuledOut, Inconclusive };
enum class Stage { Filter, RankOne, Constraints, Sdp };

std::string to_string(Status s);
std::string to_string(Stage s);

struct FeasibilityOutcome {
  Status status = Status::Inconclusive;
  Stage stage = Stage::Sdp;
  double residual_affine = 0.0;
  double residual_psd = 0.0;
  int iterations = 0;
  bool polished = false;
  std::optional<KrausSet> certificate;
  std::optional<ChoiMatrix> choi;
  std::optional<FilterWitness> filter_witness;
  std::vector<Index> obstruction; // rank-one principal submatrix, if any
  double obstruction_eigenvalue = 0.0;
  std::string cause;
  double verification_residual = -1.0; // < 0 when nothing was verified
  double tp_defect = -1.0;
};

/// Alternating projections from J0 = I / out_dim. Reports Feasible (with the
/// Choi matrix and extracted Kraus set) or Inconclusive; never RuledOut.
FeasibilityOutcome solve_feasibility(const AffineSystem& system,
                                     const SolverConfig& config = {});

/// Kraus operators from eigenpairs with lambda > rank_tol * max(1, lambda_max).
/// Throws when lambda_min < -1e-6 * max(1, ||J||_F).
KrausSet extract_kraus(const ChoiMatrix& choi, double rank_tol = 1e-10);

/// ||(I_n (x) Phi)(source density) - target density||_F.
double verify_channel(const KrausSet& kraus, const TripartiteState& state,
                      Direction direction);

struct DecideConfig {
  SolverConfig solver{};
  FilterConfig filter{};
  RankOneConfig rank_one{};
  int witnesses = 200;
  std::uint64_t seed = 0;
  bool use_filters = true;
  bool use_rank_one = true;
  PairSelection selection = PairSelection::All;
};

/// Filter, rank-one path, constraint build, projection solve, Kraus
/// extraction and verification on the unit-norm state. Feasible always
/// carries a certificate that passed verify_channel and the TP check.
FeasibilityOutcome decide(const TripartiteState& state, Direction direction,
                          const DecideConfig& config = {});

} // namespace statedeg
