#include "statedeg/tensor_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace statedeg {

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite())
    throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

ComplexMatrix SvdFactors::reconstruct() const {
  return u * singular_values.asDiagonal() * v.transpose();
}

SvdFactors svd(const ComplexMatrix& m, double rank_tol) {
  require_finite(m, "svd");
  SvdFactors out;
  if (m.size() == 0) {
    out.u.resize(m.rows(), 0);
    out.v.resize(m.cols(), 0);
    return out;
  }
  Eigen::JacobiSVD<ComplexMatrix> solver(m, Eigen::ComputeThinU |
                                                Eigen::ComputeThinV);
  const RealVector& sv = solver.singularValues();
  const double cutoff = sv.size() > 0 ? rank_tol * sv(0) : 0.0;
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff && sv(rank) > 0.0)
    ++rank;
  out.rank = rank;
  out.singular_values = sv.head(rank);
  out.u = solver.matrixU().leftCols(rank);
  // Eigen returns M = U S V^*, the transpose form wants conj(V).
  out.v = solver.matrixV().leftCols(rank).conjugate();
  return out;
}

RealVector singular_values(const ComplexMatrix& m) {
  require_finite(m, "singular_values");
  if (m.size() == 0)
    return RealVector();
  Eigen::JacobiSVD<ComplexMatrix> solver(m);
  return solver.singularValues();
}

double trace_norm(const ComplexMatrix& m) {
  return singular_values(m).sum();
}

double hermitian_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("hermitian_defect: matrix not square");
  if (m.size() == 0)
    return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace detail {
void eigh_ascending(const ComplexMatrix& h, RealVector& values,
                    ComplexMatrix& vectors) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian eigendecomposition failed");
  values = solver.eigenvalues();
  vectors = solver.eigenvectors();
}
} // namespace detail

HermitianEigen hermitian_eig(const ComplexMatrix& m, double herm_tol) {
  require_finite(m, "hermitian_eig");
  if (m.rows() != m.cols())
    throw std::invalid_argument("hermitian_eig: matrix not square");
  const double defect = hermitian_defect(m);
  if (defect > herm_tol)
    throw std::invalid_argument("hermitian_eig: matrix not Hermitian (defect " +
                                std::to_string(defect) + ")");
  const ComplexMatrix sym = (m + m.adjoint()) / 2.0;
  RealVector asc;
  ComplexMatrix vec;
  detail::eigh_ascending(sym, asc, vec);
  HermitianEigen out;
  out.values = asc.reverse();
  out.vectors = vec.rowwise().reverse();
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const Dims& dims,
                            Party traced) {
  const Index total = dims.total();
  if (rho.rows() != total || rho.cols() != total)
    throw std::invalid_argument("partial_trace: matrix is " +
                                std::to_string(rho.rows()) + "x" +
                                std::to_string(rho.cols()) + ", expected " +
                                std::to_string(total) + "x" +
                                std::to_string(total));
  const Index n = dims.n, p = dims.p, q = dims.q;
  switch (traced) {
  case Party::A: {
    ComplexMatrix out = ComplexMatrix::Zero(p * q, p * q);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < p; ++j)
        for (Index k = 0; k < q; ++k)
          for (Index j2 = 0; j2 < p; ++j2)
            for (Index k2 = 0; k2 < q; ++k2)
              out(j * q + k, j2 * q + k2) +=
                  rho(dims.flat(i, j, k), dims.flat(i, j2, k2));
    return out;
  }
  case Party::B: {
    ComplexMatrix out = ComplexMatrix::Zero(n * q, n * q);
    for (Index j = 0; j < p; ++j)
      for (Index i = 0; i < n; ++i)
        for (Index k = 0; k < q; ++k)
          for (Index i2 = 0; i2 < n; ++i2)
            for (Index k2 = 0; k2 < q; ++k2)
              out(i * q + k, i2 * q + k2) +=
                  rho(dims.flat(i, j, k), dims.flat(i2, j, k2));
    return out;
  }
  case Party::E: {
    ComplexMatrix out = ComplexMatrix::Zero(n * p, n * p);
    for (Index k = 0; k < q; ++k)
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j)
          for (Index i2 = 0; i2 < n; ++i2)
            for (Index j2 = 0; j2 < p; ++j2)
              out(i * p + j, i2 * p + j2) +=
                  rho(dims.flat(i, j, k), dims.flat(i2, j2, k));
    return out;
  }
  }
  throw std::invalid_argument("partial_trace: unknown subsystem");
}

ComplexMatrix gram(std::span<const ComplexVector> vectors) {
  const auto count = static_cast<Index>(vectors.size());
  ComplexMatrix g(count, count);
  if (count == 0)
    return g;
  const Index len = vectors.front().size();
  for (const auto& v : vectors)
    if (v.size() != len)
      throw std::invalid_argument("gram: vectors differ in length");
  for (Index i = 0; i < count; ++i)
    for (Index j = i; j < count; ++j) {
      g(i, j) = vectors[i].dot(vectors[j]); // conjugates the left operand
      g(j, i) = std::conj(g(i, j));
    }
  return g;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix psd_part(const ComplexMatrix& h) {
  RealVector values;
  ComplexMatrix vectors;
  detail::eigh_ascending(h, values, vectors);
  return vectors * values.cwiseMax(0.0).asDiagonal() * vectors.adjoint();
}

} // namespace statedeg
