#pragma once

#include <optional>
#include <string>
#include <vector>

#include "statedeg/kraus.hpp"
#include "statedeg/sdp_feasibility.hpp"
#include "statedeg/state_model.hpp"

namespace statedeg {

/// Square CPTP channel on C^n, validated on construction.
class QuantumChannel {
public:
  explicit QuantumChannel(KrausSet kraus, double tp_tol = 1e-8);

  const KrausSet& kraus() const { return kraus_; }
  Index dim() const { return kraus_.in_dim(); }

private:
  KrausSet kraus_;
};

/// V = sum_j F_j (x) |j>, an isometry C^n -> C^n (x) C^e with the output
/// index slow and the ancilla index fast.
struct StinespringDilation {
  ComplexMatrix v;
  Index ancilla_dim = 0;

  /// tr_anc V X V^*
  ComplexMatrix apply(const ComplexMatrix& x) const;
  /// tr_out V X V^* (the complementary channel)
  ComplexMatrix complementary(const ComplexMatrix& x) const;
};

StinespringDilation stinespring(const QuantumChannel& channel);

/// (I_A (x) V) sum_i |ii>, dims (n, n, e), amplitude x_{i,b,j} = F_j(b, i);
/// unnormalised with norm^2 = n.
TripartiteState lift_max_entangled(const QuantumChannel& channel);

/// Lift of (K_A (x) I) sum_i |ii>.
TripartiteState lift_filtered(const QuantumChannel& channel,
                              const ComplexMatrix& k);

/// Qubit depolarizing channel, Kraus order (I, Z, Y, X), Y = [[0,-1],[1,0]].
QuantumChannel depolarizing(double epsilon);

QuantumChannel amplitude_damping(double gamma);

enum class ChannelVerdict {
  AntiDegradableCertified,
  DegradableCertified,
  RuledOutForFilteredInputs,
  Inconclusive
};

std::string to_string(ChannelVerdict v);

struct ChannelReport {
  ChannelVerdict verdict = ChannelVerdict::Inconclusive;
  FeasibilityOutcome e_to_b;
  FeasibilityOutcome b_to_e;
  bool anti_degradable = false; // E->B certified
  bool degradable = false;      // B->E certified
  std::string scope;
};

ChannelReport channel_degradability_test(const QuantumChannel& channel,
                                         const DecideConfig& config = {});

struct ScanPoint {
  double epsilon = 0.0;
  double d_r = 0.0;
  double d_s = 0.0;
  bool ruled_out = false; // pair filter, E->B
  double qber = 0.0;
  std::optional<Status> full; // decide E->B when requested
};

struct ScanResult {
  std::vector<ScanPoint> points;
  /// Last ruled-out and first not-ruled-out grid values, when both exist.
  std::optional<double> last_ruled_out;
  std::optional<double> first_passed;
  std::optional<double> threshold; // midpoint of the bracket

  std::optional<double> threshold_qber() const;
};

struct ScanOptions {
  bool full_decide = false;
  DecideConfig decide{};
  int threads = 1;
};

/// Depolarizing lifts on the grid lo, lo + step, ... <= hi. d_R and d_S are
/// the half trace norms of the (0,0) minus (1,1) pair witness.
ScanResult epsilon_scan(double lo, double hi, double step,
                        const ScanOptions& options = {});

} // namespace statedeg
