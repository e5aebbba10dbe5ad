#include "statedeg/channel_lift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace statedeg {

QuantumChannel::QuantumChannel(KrausSet kraus, double tp_tol)
    : kraus_(std::move(kraus)) {
  require_cptp(kraus_, tp_tol);
  if (kraus_.in_dim() != kraus_.out_dim())
    throw std::invalid_argument("QuantumChannel: input and output dimensions "
                                "differ");
}

ComplexMatrix StinespringDilation::apply(const ComplexMatrix& x) const {
  const ComplexMatrix full = v * x * v.adjoint();
  const Index out = v.rows() / ancilla_dim;
  ComplexMatrix y = ComplexMatrix::Zero(out, out);
  for (Index b = 0; b < out; ++b)
    for (Index c = 0; c < out; ++c)
      for (Index j = 0; j < ancilla_dim; ++j)
        y(b, c) += full(b * ancilla_dim + j, c * ancilla_dim + j);
  return y;
}

ComplexMatrix StinespringDilation::complementary(const ComplexMatrix& x) const {
  const ComplexMatrix full = v * x * v.adjoint();
  const Index out = v.rows() / ancilla_dim;
  ComplexMatrix y = ComplexMatrix::Zero(ancilla_dim, ancilla_dim);
  for (Index j = 0; j < ancilla_dim; ++j)
    for (Index l = 0; l < ancilla_dim; ++l)
      for (Index b = 0; b < out; ++b)
        y(j, l) += full(b * ancilla_dim + j, b * ancilla_dim + l);
  return y;
}

StinespringDilation stinespring(const QuantumChannel& channel) {
  const KrausSet& k = channel.kraus();
  StinespringDilation d;
  d.ancilla_dim = k.size();
  const Index in = k.in_dim(), out = k.out_dim();
  d.v = ComplexMatrix::Zero(out * d.ancilla_dim, in);
  for (Index j = 0; j < d.ancilla_dim; ++j)
    for (Index b = 0; b < out; ++b)
      d.v.row(b * d.ancilla_dim + j) = k.ops[j].row(b);
  return d;
}

TripartiteState lift_filtered(const QuantumChannel& channel,
                              const ComplexMatrix& k) {
  const Index n = channel.dim();
  if (k.rows() != n || k.cols() != n)
    throw std::invalid_argument("lift_filtered: filter must be n x n");
  require_finite(k, "lift_filtered");
  const KrausSet& kraus = channel.kraus();
  const Dims dims{n, n, kraus.size()};
  // (K (x) I) sum_m |m m> = sum_{i,m} K_im |i>|m>, then F_j on the second leg.
  ComplexVector x = ComplexVector::Zero(dims.total());
  for (Index i = 0; i < n; ++i)
    for (Index b = 0; b < n; ++b)
      for (Index j = 0; j < dims.q; ++j) {
        Complex s = 0.0;
        for (Index m = 0; m < n; ++m)
          s += k(i, m) * kraus.ops[j](b, m);
        x(dims.flat(i, b, j)) = s;
      }
  return TripartiteState(dims, x, false);
}

TripartiteState lift_max_entangled(const QuantumChannel& channel) {
  return lift_filtered(channel,
                       ComplexMatrix::Identity(channel.dim(), channel.dim()));
}

QuantumChannel depolarizing(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 0.75))
    throw std::invalid_argument("depolarizing: epsilon must lie in [0, 3/4]");
  const double a = std::sqrt(1.0 - epsilon);
  const double b = std::sqrt(epsilon / 3.0);
  ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  ComplexMatrix z(2, 2), y(2, 2), x(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  y << 0.0, -1.0, 1.0, 0.0;
  x << 0.0, 1.0, 1.0, 0.0;
  return QuantumChannel(KrausSet{{a * i2, b * z, b * y, b * x}});
}

QuantumChannel amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("amplitude_damping: gamma must lie in [0, 1]");
  ComplexMatrix f0 = ComplexMatrix::Zero(2, 2), f1 = ComplexMatrix::Zero(2, 2);
  f0(0, 0) = 1.0;
  f0(1, 1) = std::sqrt(1.0 - gamma);
  f1(0, 1) = std::sqrt(gamma);
  return QuantumChannel(KrausSet{{f0, f1}});
}

std::string to_string(ChannelVerdict v) {
  switch (v) {
  case ChannelVerdict::AntiDegradableCertified:
    return "anti_degradable_certified";
  case ChannelVerdict::DegradableCertified:
    return "degradable_certified";
  case ChannelVerdict::RuledOutForFilteredInputs:
    return "ruled_out_for_filtered_inputs";
  case ChannelVerdict::Inconclusive:
    return "inconclusive";
  }
  return "unknown";
}

ChannelReport channel_degradability_test(const QuantumChannel& channel,
                                         const DecideConfig& config) {
  const TripartiteState lifted = lift_max_entangled(channel);
  ChannelReport r;
  r.e_to_b = decide(lifted, Direction::EtoB, config);
  r.b_to_e = decide(lifted, Direction::BtoE, config);
  r.anti_degradable = r.e_to_b.status == Status::Feasible;
  r.degradable = r.b_to_e.status == Status::Feasible;
  if (r.degradable) {
    r.verdict = ChannelVerdict::DegradableCertified;
    r.scope = "B->E map on the maximally entangled lift; the same map "
              "degrades every input (K_A (x) I)|psi_M>";
  } else if (r.anti_degradable) {
    r.verdict = ChannelVerdict::AntiDegradableCertified;
    r.scope = "E->B map on the maximally entangled lift; the channel is "
              "anti-degradable and the same map works for every input "
              "(K_A (x) I)|psi_M>";
  } else if (r.e_to_b.status == Status::RuledOut) {
    r.verdict = ChannelVerdict::RuledOutForFilteredInputs;
    r.scope = "no E->B map exists for any input (W_A (x) I)|psi_M> with "
              "invertible W_A";
  } else {
    r.verdict = ChannelVerdict::Inconclusive;
    r.scope = "no certificate or witness found within the configured budget";
  }
  return r;
}

std::optional<double> ScanResult::threshold_qber() const {
  if (!threshold)
    return std::nullopt;
  return 2.0 * *threshold / 3.0;
}

ScanResult epsilon_scan(double lo, double hi, double step,
                        const ScanOptions& options) {
  if (!(lo >= 0.0 && hi <= 0.75 && lo < hi && step > 0.0))
    throw std::invalid_argument(
        "epsilon_scan: need 0 <= lo < hi <= 3/4 and step > 0");
  if (options.threads < 1)
    throw std::invalid_argument("epsilon_scan: threads must be >= 1");

  std::vector<double> grid;
  for (long k = 0;; ++k) {
    const double eps = std::round((lo + k * step) * 1e12) / 1e12;
    if (eps > hi + 1e-12)
      break;
    grid.push_back(std::min(eps, 0.75));
  }

  ScanResult result;
  result.points.resize(grid.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < grid.size(); i += stride) {
      ScanPoint& pt = result.points[i];
      pt.epsilon = grid[i];
      pt.qber = 2.0 * pt.epsilon / 3.0;
      const TripartiteState lifted = lift_max_entangled(depolarizing(pt.epsilon));
      const BlockFamily blocks = extract_blocks(lifted);
      ComplexMatrix lambda = ComplexMatrix::Zero(2, 2);
      lambda(0, 0) = 1.0;
      lambda(1, 1) = -1.0;
      const FilterWitness w = evaluate_witness(
          blocks, Direction::EtoB, lambda, WitnessKind::PairDifference, 0.0);
      pt.d_r = w.d_in;
      pt.d_s = w.d_out;
      pt.ruled_out = pair_filter(blocks, Direction::EtoB, options.decide.filter)
                         .verdict == FilterVerdict::RuledOut;
      if (options.full_decide)
        pt.full = decide(lifted, Direction::EtoB, options.decide).status;
    }
  };
  const auto threads = static_cast<std::size_t>(options.threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back(work, t, threads);
    for (auto& th : pool)
      th.join();
  }

  for (std::size_t i = 0; i < result.points.size(); ++i) {
    if (!result.points[i].ruled_out)
      continue;
    result.last_ruled_out = result.points[i].epsilon;
    if (i + 1 < result.points.size() && !result.points[i + 1].ruled_out)
      result.first_passed = result.points[i + 1].epsilon;
    else
      result.first_passed.reset();
  }
  if (result.last_ruled_out && result.first_passed)
    result.threshold = (*result.last_ruled_out + *result.first_passed) / 2.0;
  return result;
}

} // namespace statedeg
