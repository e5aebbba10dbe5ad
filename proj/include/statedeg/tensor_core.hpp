#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace statedeg {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultHermTol = 1e-9;

/// Dimensions (n, p, q) of a tripartite space C^n (x) C^p (x) C^q.
///
/// Every flat index in this library uses the lexicographic layout
/// (i, j, k) -> (i * p + j) * q + k with 0-based i < n, j < p, k < q.
struct Dims {
  Index n = 0;
  Index p = 0;
  Index q = 0;

  Index total() const { return n * p * q; }
  Index flat(Index i, Index j, Index k) const { return (i * p + j) * q + k; }
  bool operator==(const Dims&) const = default;
};

/// Subsystem labels. A carries dimension n, B carries p, E carries q.
enum class Party { A = 1, B = 2, E = 3 };

/// Compact SVD in transpose form: M = U * diag(D) * V^t.
struct SvdFactors {
  ComplexMatrix u;
  RealVector singular_values;
  ComplexMatrix v;
  Index rank = 0;

  ComplexMatrix reconstruct() const;
};

struct HermitianEigen {
  RealVector values;     // descending
  ComplexMatrix vectors; // column i pairs with values(i)
};

void require_finite(const ComplexMatrix& m, const char* what);

/// Singular values below rank_tol * sigma_max are discarded.
SvdFactors svd(const ComplexMatrix& m, double rank_tol = kDefaultRankTol);

RealVector singular_values(const ComplexMatrix& m);

double trace_norm(const ComplexMatrix& m);

/// Rejects non-square input and input with ||M - M^*||_max > herm_tol;
/// the factored matrix is (M + M^*) / 2.
HermitianEigen hermitian_eig(const ComplexMatrix& m,
                             double herm_tol = kDefaultHermTol);

/// Reduced matrix on the two remaining parties, ordered lexicographically.
ComplexMatrix partial_trace(const ComplexMatrix& rho, const Dims& dims,
                            Party traced);

ComplexMatrix gram(std::span<const ComplexVector> vectors);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Projection of a Hermitian matrix onto the PSD cone in Frobenius norm.
ComplexMatrix psd_part(const ComplexMatrix& h);

double hermitian_defect(const ComplexMatrix& m);

namespace detail {
// No validation; input assumed Hermitian. Ascending order as Eigen returns it.
void eigh_ascending(const ComplexMatrix& h, RealVector& values,
                    ComplexMatrix& vectors);
} // namespace detail

} // namespace statedeg
