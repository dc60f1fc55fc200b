#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "rlp/archlaw.hpp"
#include "rlp/random.hpp"

namespace rlp {

/// Bounce times and log outgoing velocities of the reflected process,
/// starting at a bounce at time 0 with outgoing speed start_velocity.
///
/// Times are kept as logarithms: in the supercritical regime they grow like
/// exp(2 mu n) and leave double range after a few hundred bounces. Entry 0
/// has log time -inf (time 0).
struct BounceSkeleton {
  Elasticity e;
  double start_velocity = 1.0;
  std::vector<double> log_times;
  std::vector<double> log_velocities;
  /// Normalized duration of arch k (between bounce k and k+1).
  std::vector<double> arch_durations;

  std::size_t size() const { return log_velocities.size(); }
  double time(std::size_t n) const { return std::exp(log_times.at(n)); }
};

struct CrossingRecord {
  double level = 0.0;
  std::size_t index = 0;
  double overshoot = 0.0;
  double log_time = 0.0;
  double time() const { return std::exp(log_time); }
};

/// Skeleton with n arches (n + 1 bounces, counting the start).
BounceSkeleton simulate_skeleton(Stream& rng, const Elasticity& e, double u0,
                                 std::size_t n);

/// Skeleton up to and including the first bounce whose log velocity exceeds
/// level. Throws NotReached after max_arches arches without a crossing.
BounceSkeleton simulate_until_crossing(Stream& rng, const Elasticity& e,
                                       double u0, double level,
                                       std::uint64_t max_arches);

enum class Verdict { Convergent, Divergent, Inconclusive };
const char* to_string(Verdict v);

struct AccumulationReport {
  std::size_t n = 0;
  double log_zeta_n = 0.0;
  double log_zeta_half = 0.0;
  double log_zeta_tenth = 0.0;
  /// (zeta_N - zeta_{N/2}) / zeta_{N/2}
  double tail_ratio = 0.0;
  /// log(zeta_N / zeta_{N/10})
  double log_growth = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

/// Heuristic accumulation verdict: Convergent when the last half of the
/// skeleton adds less than 1e-3 relative time, Divergent when the time grew
/// more than tenfold over the last nine tenths.
AccumulationReport accumulation_diagnostics(const BounceSkeleton& sk);

inline constexpr double kConvergentTailRatio = 1e-3;
inline constexpr double kDivergentGrowth = 10.0;

CrossingRecord first_crossing(const BounceSkeleton& sk, double x);

/// CSV with columns n, zeta_n, S_n at 17 significant digits. Times beyond
/// double range print as inf.
void write_skeleton_csv(std::ostream& os, const BounceSkeleton& sk);

}  // namespace rlp
