#include "statedeg/kraus.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace statedeg {

ComplexMatrix KrausSet::completeness() const {
  ComplexMatrix sum = ComplexMatrix::Zero(in_dim(), in_dim());
  for (const auto& f : ops)
    sum += f.adjoint() * f;
  return sum;
}

double KrausSet::tp_defect() const {
  return (completeness() - ComplexMatrix::Identity(in_dim(), in_dim())).norm();
}

ComplexMatrix KrausSet::apply(const ComplexMatrix& x) const {
  if (x.rows() != in_dim() || x.cols() != in_dim())
    throw std::invalid_argument("KrausSet::apply: input is " +
                                std::to_string(x.rows()) + "x" +
                                std::to_string(x.cols()) + ", channel takes " +
                                std::to_string(in_dim()));
  ComplexMatrix out = ComplexMatrix::Zero(out_dim(), out_dim());
  for (const auto& f : ops)
    out += f * x * f.adjoint();
  return out;
}

ComplexMatrix KrausSet::apply_local(const ComplexMatrix& x,
                                    Index blocks) const {
  const Index in = in_dim(), out = out_dim();
  if (x.rows() != blocks * in || x.cols() != blocks * in)
    throw std::invalid_argument("KrausSet::apply_local: dimension mismatch");
  ComplexMatrix y(blocks * out, blocks * out);
  for (Index u = 0; u < blocks; ++u)
    for (Index v = 0; v < blocks; ++v)
      y.block(u * out, v * out, out, out) =
          apply(x.block(u * in, v * in, in, in));
  return y;
}

void require_consistent(const KrausSet& k) {
  if (k.ops.empty())
    throw std::invalid_argument("Kraus set is empty");
  for (const auto& f : k.ops) {
    if (f.rows() != k.out_dim() || f.cols() != k.in_dim())
      throw std::invalid_argument("Kraus operators have inconsistent shapes");
    require_finite(f, "Kraus operator");
  }
}

void require_cptp(const KrausSet& k, double tol) {
  require_consistent(k);
  const double defect = k.tp_defect();
  if (!(defect <= tol))
    throw std::invalid_argument("Kraus set is not trace preserving: "
                                "||sum F^*F - I||_F = " +
                                std::to_string(defect));
}

ComplexMatrix ChoiMatrix::output_trace() const {
  ComplexMatrix t(in_dim, in_dim);
  for (Index k = 0; k < in_dim; ++k)
    for (Index l = 0; l < in_dim; ++l)
      t(k, l) = j.block(k * out_dim, l * out_dim, out_dim, out_dim).trace();
  return t;
}

ComplexMatrix ChoiMatrix::apply(const ComplexMatrix& x) const {
  if (x.rows() != in_dim || x.cols() != in_dim)
    throw std::invalid_argument("ChoiMatrix::apply: dimension mismatch");
  ComplexMatrix y = ComplexMatrix::Zero(out_dim, out_dim);
  for (Index k = 0; k < in_dim; ++k)
    for (Index l = 0; l < in_dim; ++l)
      y += x(k, l) * j.block(k * out_dim, l * out_dim, out_dim, out_dim);
  return y;
}

ChoiMatrix choi_from_kraus(const KrausSet& k) {
  require_consistent(k);
  const Index in = k.in_dim(), out = k.out_dim();
  ChoiMatrix c{ComplexMatrix::Zero(in * out, in * out), in, out};
  for (const auto& f : k.ops) {
    // vec(F)(k*out + a) = F(a, k)
    ComplexVector vec(in * out);
    for (Index col = 0; col < in; ++col)
      vec.segment(col * out, out) = f.col(col);
    c.j += vec * vec.adjoint();
  }
  return c;
}

KrausSet normalize_trace_preserving(const KrausSet& k) {
  require_consistent(k);
  RealVector values;
  ComplexMatrix vectors;
  const ComplexMatrix m = k.completeness();
  detail::eigh_ascending((m + m.adjoint()) / 2.0, values, vectors);
  if (!(values(0) > 1e-12))
    throw std::invalid_argument(
        "normalize_trace_preserving: completeness matrix is singular");
  const ComplexMatrix inv_sqrt = vectors *
                                 values.cwiseSqrt().cwiseInverse().asDiagonal() *
                                 vectors.adjoint();
  KrausSet out;
  out.ops.reserve(k.ops.size());
  for (const auto& f : k.ops)
    out.ops.push_back(f * inv_sqrt);
  return out;
}

KrausSet identity_kraus(Index dim) {
  return KrausSet{{ComplexMatrix::Identity(dim, dim)}};
}

} // namespace statedeg
