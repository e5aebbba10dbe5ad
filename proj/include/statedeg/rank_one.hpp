#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "statedeg/kraus.hpp"
#include "statedeg/psd_projection.hpp"
#include "statedeg/state_model.hpp"

namespace statedeg {

/// Source blocks written as A_i = u_i d_i v_i^t with unit u_i (input side of
/// the channel) and unit v_i (output side).
struct RankOneDecomposition {
  std::vector<ComplexVector> u;
  std::vector<double> d;
  std::vector<ComplexVector> v;

  Index count() const { return static_cast<Index>(u.size()); }
  /// The decomposition of the transposed family (roles of u and v swapped).
  RankOneDecomposition swapped() const;
};

enum class Verdict { Yes, No, Inconclusive };

std::string to_string(Verdict v);

struct RankOneConfig {
  double detect_tol = 1e-9;
  double div_tol = 1e-10;
  double match_tol = 1e-8;
  double correlation_psd_tol = 1e-8;
  ProjectionConfig completion{};
};

/// Correlation matrix C (Hermitian, unit diagonal, PSD) with
/// gram(u) = gram(v) o C on the fixed entries.
struct CorrelationCertificate {
  ComplexMatrix c;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> fixed_mask;
  bool completed = false;
};

struct ConditionEResult {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<CorrelationCertificate> certificate;
  /// For No: indices of a principal submatrix of forced entries that cannot
  /// be part of a correlation matrix, and its smallest eigenvalue.
  std::vector<Index> obstruction;
  double obstruction_eigenvalue = 0.0;
  std::string reason;
};

/// Phases theta with gram(u)_ij = e^{-i theta_i} gram(v)_ij e^{i theta_j};
/// canonical form has theta_0 = 0 in each connected component.
struct TwoWayCertificate {
  RealVector phases;
};

struct TwoWayResult {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<TwoWayCertificate> certificate;
};

/// Present iff every block has second singular value <= tol * first and no
/// block vanishes.
std::optional<RankOneDecomposition>
detect_rank_one(std::span<const ComplexMatrix> blocks, double tol = 1e-9);

std::optional<RankOneDecomposition>
detect_rank_one(const BlockFamily& blocks, Direction direction,
                double tol = 1e-9);

ConditionEResult check_condition_e(const RankOneDecomposition& dec,
                                   const RankOneConfig& config = {});

TwoWayResult check_two_way(const RankOneDecomposition& dec,
                           const RankOneConfig& config = {});

/// Gamma with C = Gamma^* Gamma (columns are the unit vectors gamma_i).
ComplexMatrix correlation_factor(const ComplexMatrix& c);

/// A channel sending u_i u_j^* to C_ji v_i v_j^*: the partial isometry
/// u_i -> v_i (x) gamma_i on span(u), followed by tracing the gamma register,
/// plus a measure-and-prepare map on the orthogonal complement.
KrausSet channel_from_correlation(const RankOneDecomposition& dec,
                                  const CorrelationCertificate& cert);

} // namespace statedeg
