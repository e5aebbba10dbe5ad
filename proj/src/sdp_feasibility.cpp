#include "statedeg/sdp_feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace statedeg {

namespace {

// Relative threshold for accepting a source block as linearly independent.
constexpr double kIndependenceTol = 1e-10;

ComplexVector vectorized(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return (m + m.adjoint()) / 2.0;
}

ComplexMatrix anti_hermitian_part(const ComplexMatrix& m) {
  // (M - M^*) / 2i, itself Hermitian
  return (m - m.adjoint()) / Complex(0.0, 2.0);
}

struct RowSink {
  std::vector<RealVector> rows;
  std::vector<double> rhs;

  void add(RealVector row, double value) {
    rows.push_back(std::move(row));
    rhs.push_back(value);
  }
};

// Rows tr(E_m Phi(H)) = tr(E_m Q) over the svec basis E_m of the output
// space; tr(E Phi(H)) = <H^t (x) E, J>.
void add_map_rows(RowSink& sink, const ComplexMatrix& h, const ComplexMatrix& q,
                  Index out) {
  const ComplexMatrix ht = h.transpose();
  const RealVector target = svec(q);
  for (Index m = 0; m < out * out; ++m) {
    RealVector e = RealVector::Zero(out * out);
    e(m) = 1.0;
    sink.add(svec(kron(ht, smat(e, out))), target(m));
  }
}

std::string describe(const std::vector<Index>& idx) {
  std::ostringstream os;
  for (std::size_t i = 0; i < idx.size(); ++i)
    os << (i ? "," : "") << idx[i];
  return os.str();
}

} // namespace

void SolverConfig::validate() const {
  if (!(feas_tol > 0.0) || !(psd_tol > 0.0) || !(stall_tol > 0.0) ||
      !(verify_tol > 0.0) || !(rank_tol > 0.0) || !(row_tol > 0.0))
    throw std::invalid_argument("solver config: tolerances must be positive");
  if (max_iter < 1 || stall_window < 1 || polish_budget < 1)
    throw std::invalid_argument("solver config: budgets must be positive");
}

ProjectionConfig SolverConfig::projection() const {
  ProjectionConfig p;
  p.max_iter = max_iter;
  p.feas_tol = feas_tol;
  p.psd_tol = psd_tol;
  p.stall_window = stall_window;
  p.stall_tol = stall_tol;
  p.polish = polish;
  p.polish_budget = polish_budget;
  return p;
}

std::string to_string(Status s) {
  switch (s) {
  case Status::Feasible:
    return "Feasible";
  case Status::RuledOut:
    return "RuledOut";
  case Status::Inconclusive:
    return "Inconclusive";
  }
  return "unknown";
}

std::string to_string(Stage s) {
  switch (s) {
  case Stage::Filter:
    return "filter";
  case Stage::RankOne:
    return "rank_one";
  case Stage::Constraints:
    return "constraints";
  case Stage::Sdp:
    return "sdp";
  }
  return "unknown";
}

AffineSystem build_constraints(const BlockFamily& blocks, Direction direction,
                               PairSelection selection, double row_tol) {
  if (blocks.count() == 0)
    throw std::invalid_argument("build_constraints: empty block family");
  const auto& src = blocks.source(direction);
  const auto& tgt = blocks.target(direction);
  AffineSystem sys;
  sys.in_dim = src.front().rows();
  sys.out_dim = tgt.front().rows();
  const Index in = sys.in_dim, out = sys.out_dim;
  const Index n = blocks.count();

  double scale = 0.0;
  for (const auto& a : src)
    scale = std::max(scale, a.norm());

  // Greedy maximal independent subset of the source blocks; each dependent
  // block's relation must hold for the targets too.
  ComplexMatrix basis(src.front().size(), 0);
  for (Index k = 0; k < n; ++k) {
    const ComplexVector a = vectorized(src[k]);
    if (basis.cols() > 0) {
      const ComplexVector c =
          basis.completeOrthogonalDecomposition().solve(a);
      if ((a - basis * c).norm() <= kIndependenceTol * std::max(scale, 1e-300)) {
        ComplexMatrix combo = ComplexMatrix::Zero(tgt[k].rows(), tgt[k].cols());
        for (Index t = 0; t < c.size(); ++t)
          combo += c(t) * tgt[sys.independent_sources[t]];
        const double mismatch = (tgt[k] - combo).norm();
        if (mismatch > 1e-8 * std::max(scale, 1e-300)) {
          sys.inconsistency = mismatch;
          sys.cause = "dependent source block " + std::to_string(k) +
                      " is a combination of blocks {" +
                      describe(sys.independent_sources) +
                      "} but its target is not";
        }
        continue;
      }
    }
    sys.independent_sources.push_back(k);
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = a;
  }

  if (selection == PairSelection::DiagonalOnly) {
    for (Index u = 0; u < n; ++u)
      sys.pairs.emplace_back(u, u);
  } else {
    const auto& ind = sys.independent_sources;
    for (std::size_t a = 0; a < ind.size(); ++a)
      for (std::size_t b = a; b < ind.size(); ++b)
        sys.pairs.emplace_back(ind[a], ind[b]);
  }

  RowSink sink;
  // Trace preservation: <B (x) I, J> = tr B over the svec basis of M_in.
  const ComplexMatrix eye_out = ComplexMatrix::Identity(out, out);
  for (Index m = 0; m < in * in; ++m) {
    RealVector e = RealVector::Zero(in * in);
    e(m) = 1.0;
    const ComplexMatrix b = smat(e, in);
    sink.add(svec(kron(b, eye_out)), b.trace().real());
  }
  for (const auto& [u, v] : sys.pairs) {
    const ComplexMatrix p = src[u] * src[v].adjoint();
    const ComplexMatrix q = tgt[u] * tgt[v].adjoint();
    add_map_rows(sink, hermitian_part(p), hermitian_part(q), out);
    if (u != v)
      add_map_rows(sink, anti_hermitian_part(p), anti_hermitian_part(q), out);
  }

  const Index dim = in * out;
  RealMatrix rows(static_cast<Index>(sink.rows.size()), dim * dim);
  RealVector rhs(static_cast<Index>(sink.rhs.size()));
  for (std::size_t r = 0; r < sink.rows.size(); ++r) {
    rows.row(static_cast<Index>(r)) = sink.rows[r].transpose();
    rhs(static_cast<Index>(r)) = sink.rhs[r];
  }
  const RowReduction reduced = reduce_rows(rows, rhs, dim, row_tol);
  sys.set = reduced.set;
  sys.raw_rows = reduced.raw_rows;
  sys.reduced_rank = reduced.set.rank();
  if (sys.cause.empty() &&
      reduced.inconsistency > 1e-8 * std::max(1.0, rhs.norm())) {
    sys.inconsistency = reduced.inconsistency;
    sys.cause = "no trace-preserving Hermitian map satisfies the product "
                "constraints (least-squares residual " +
                std::to_string(reduced.inconsistency) + ")";
  }
  return sys;
}

KrausSet extract_kraus(const ChoiMatrix& choi, double rank_tol) {
  const Index dim = choi.in_dim * choi.out_dim;
  if (choi.j.rows() != dim || choi.j.cols() != dim)
    throw std::invalid_argument("extract_kraus: Choi matrix has wrong size");
  require_finite(choi.j, "extract_kraus");
  RealVector values;
  ComplexMatrix vectors;
  detail::eigh_ascending(hermitian_part(choi.j), values, vectors);
  const double jnorm = choi.j.norm();
  if (values(0) < -1e-6 * std::max(1.0, jnorm))
    throw std::invalid_argument("extract_kraus: Choi matrix is not PSD "
                                "(smallest eigenvalue " +
                                std::to_string(values(0)) + ")");
  const double cutoff = rank_tol * std::max(1.0, values(dim - 1));
  KrausSet k;
  for (Index e = dim - 1; e >= 0; --e) {
    if (values(e) <= cutoff)
      break;
    const double s = std::sqrt(values(e));
    ComplexMatrix f(choi.out_dim, choi.in_dim);
    for (Index kk = 0; kk < choi.in_dim; ++kk)
      for (Index a = 0; a < choi.out_dim; ++a)
        f(a, kk) = s * vectors(kk * choi.out_dim + a, e);
    k.ops.push_back(std::move(f));
  }
  if (k.ops.empty())
    throw std::invalid_argument("extract_kraus: Choi matrix is zero");
  return k;
}

double verify_channel(const KrausSet& kraus, const TripartiteState& state,
                      Direction direction) {
  require_consistent(kraus);
  const Dims& d = state.dims();
  const Index in = direction == Direction::EtoB ? d.q : d.p;
  const Index out = direction == Direction::EtoB ? d.p : d.q;
  if (kraus.in_dim() != in || kraus.out_dim() != out)
    throw std::invalid_argument(
        "verify_channel: channel is " + std::to_string(kraus.out_dim()) + "x" +
        std::to_string(kraus.in_dim()) + ", direction needs " +
        std::to_string(out) + "x" + std::to_string(in));
  const ComplexMatrix mapped =
      kraus.apply_local(source_density(state, direction), d.n);
  return (mapped - target_density(state, direction)).norm();
}

FeasibilityOutcome solve_feasibility(const AffineSystem& system,
                                     const SolverConfig& config) {
  config.validate();
  FeasibilityOutcome outcome;
  outcome.stage = Stage::Sdp;
  const Index dim = system.in_dim * system.out_dim;
  const ComplexMatrix start =
      ComplexMatrix::Identity(dim, dim) / static_cast<double>(system.out_dim);
  const ProjectionResult r =
      find_psd_point(system.set, start, config.projection());
  outcome.residual_psd = r.residual_psd;
  outcome.iterations = r.iterations;
  outcome.polished = r.polished;
  ChoiMatrix choi{r.point, system.in_dim, system.out_dim};
  // An inconsistent system was projected onto its least-squares solution
  // set; the floor it cannot go below is part of the residual.
  outcome.residual_affine = std::hypot(r.residual_affine, system.inconsistency);
  if (!system.consistent()) {
    outcome.status = Status::Inconclusive;
    outcome.cause = "constraint system inconsistent: " + system.cause;
    outcome.choi = std::move(choi);
    return outcome;
  }
  if (!r.converged()) {
    outcome.status = Status::Inconclusive;
    outcome.cause = r.termination == Termination::Stalled
                        ? "projection stalled"
                        : "iteration budget exhausted";
    outcome.choi = std::move(choi);
    return outcome;
  }
  outcome.status = Status::Feasible;
  outcome.certificate = extract_kraus(choi, config.rank_tol);
  outcome.tp_defect = outcome.certificate->tp_defect();
  outcome.choi = std::move(choi);
  return outcome;
}

namespace {

// Normalises the certificate to exact trace preservation and keeps it only
// if it reproduces the target density.
void accept_if_verified(FeasibilityOutcome& outcome, const KrausSet& raw,
                        const TripartiteState& unit, Direction direction,
                        const SolverConfig& config) {
  KrausSet k;
  try {
    k = normalize_trace_preserving(raw);
  } catch (const std::exception& e) {
    outcome.status = Status::Inconclusive;
    outcome.cause = std::string("certificate rejected: ") + e.what();
    return;
  }
  outcome.tp_defect = k.tp_defect();
  outcome.verification_residual = verify_channel(k, unit, direction);
  if (outcome.verification_residual <= config.verify_tol &&
      outcome.tp_defect <= 1e-8) {
    outcome.status = Status::Feasible;
    outcome.certificate = std::move(k);
  } else {
    outcome.status = Status::Inconclusive;
    outcome.cause = "certificate failed verification";
    outcome.certificate.reset();
  }
}

} // namespace

FeasibilityOutcome decide(const TripartiteState& state, Direction direction,
                          const DecideConfig& config) {
  config.solver.validate();
  if (!(state.norm_squared() > 0.0))
    throw std::invalid_argument("decide: state is zero");
  const TripartiteState unit = state.unit();
  const BlockFamily blocks = extract_blocks(unit);

  if (config.use_filters) {
    const FilterReport pairs = pair_filter(blocks, direction, config.filter);
    auto violation = pairs.strongest_violation();
    if (!violation && config.witnesses > 0)
      violation = random_witness_filter(blocks, direction, config.witnesses,
                                        config.seed, config.filter)
                      .strongest_violation();
    if (violation) {
      FeasibilityOutcome out;
      out.status = Status::RuledOut;
      out.stage = Stage::Filter;
      out.cause = "trace-norm witness violated (" + to_string(violation->kind) +
                  ")";
      out.filter_witness = std::move(violation);
      return out;
    }
  }

  if (config.use_rank_one) {
    if (const auto dec =
            detect_rank_one(blocks, direction, config.rank_one.detect_tol)) {
      const ConditionEResult e = check_condition_e(*dec, config.rank_one);
      if (e.verdict == Verdict::No) {
        FeasibilityOutcome out;
        out.status = Status::RuledOut;
        out.stage = Stage::RankOne;
        out.obstruction = e.obstruction;
        out.obstruction_eigenvalue = e.obstruction_eigenvalue;
        out.cause = e.reason;
        return out;
      }
      if (e.verdict == Verdict::Yes) {
        FeasibilityOutcome out;
        out.stage = Stage::RankOne;
        accept_if_verified(out, channel_from_correlation(*dec, *e.certificate),
                           unit, direction, config.solver);
        if (out.status == Status::Feasible)
          return out;
      }
    }
  }

  const AffineSystem system = build_constraints(
      blocks, direction, config.selection, config.solver.row_tol);
  if (!system.consistent()) {
    FeasibilityOutcome out;
    out.status = Status::RuledOut;
    out.stage = Stage::Constraints;
    out.residual_affine = system.inconsistency;
    out.cause = system.cause;
    return out;
  }

  FeasibilityOutcome out = solve_feasibility(system, config.solver);
  if (out.status == Status::Feasible)
    accept_if_verified(out, *out.certificate, unit, direction, config.solver);
  return out;
}

} // namespace statedeg
