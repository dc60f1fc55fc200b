#include "rlp/skeleton.hpp"

#include <cstdio>
#include <limits>

#include "rlp/error.hpp"
#include "rlp/format.hpp"

namespace rlp {

namespace {

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

BounceSkeleton start(const Elasticity& e, double u0) {
  if (!(u0 > 0.0) || !std::isfinite(u0)) {
    throw DomainError("start velocity must be finite and positive");
  }
  BounceSkeleton sk;
  sk.e = e;
  sk.start_velocity = u0;
  sk.log_times.push_back(-std::numeric_limits<double>::infinity());
  sk.log_velocities.push_back(std::log(u0));
  return sk;
}

void advance(Stream& rng, BounceSkeleton& sk) {
  const ArchSample a = sample_arch(rng, sk.e);
  const double s = sk.log_velocities.back();
  sk.log_times.push_back(log_add(sk.log_times.back(), 2.0 * s + std::log(a.duration)));
  sk.log_velocities.push_back(s + a.log_step);
  sk.arch_durations.push_back(a.duration);
}

}  // namespace

BounceSkeleton simulate_skeleton(Stream& rng, const Elasticity& e, double u0,
                                 std::size_t n) {
  if (n < 1) throw DomainError("simulate_skeleton: n must be at least 1");
  BounceSkeleton sk = start(e, u0);
  sk.log_times.reserve(n + 1);
  sk.log_velocities.reserve(n + 1);
  sk.arch_durations.reserve(n);
  for (std::size_t k = 0; k < n; ++k) advance(rng, sk);
  return sk;
}

BounceSkeleton simulate_until_crossing(Stream& rng, const Elasticity& e,
                                       double u0, double level,
                                       std::uint64_t max_arches) {
  BounceSkeleton sk = start(e, u0);
  double max_seen = sk.log_velocities.back();
  for (std::uint64_t k = 0; sk.log_velocities.back() <= level; ++k) {
    if (k == max_arches) {
      throw NotReached("simulate_until_crossing: level not exceeded", max_seen);
    }
    advance(rng, sk);
    max_seen = std::max(max_seen, sk.log_velocities.back());
  }
  return sk;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Convergent:
      return "Convergent";
    case Verdict::Divergent:
      return "Divergent";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "unknown";
}

AccumulationReport accumulation_diagnostics(const BounceSkeleton& sk) {
  if (sk.size() < 101) {
    throw DomainError("accumulation_diagnostics: need at least 100 arches");
  }
  AccumulationReport r;
  r.n = sk.size() - 1;
  r.log_zeta_n = sk.log_times[r.n];
  r.log_zeta_half = sk.log_times[r.n / 2];
  r.log_zeta_tenth = sk.log_times[r.n / 10];
  r.tail_ratio = std::expm1(r.log_zeta_n - r.log_zeta_half);
  r.log_growth = r.log_zeta_n - r.log_zeta_tenth;
  if (r.tail_ratio < kConvergentTailRatio) {
    r.verdict = Verdict::Convergent;
  } else if (r.log_growth > std::log(kDivergentGrowth)) {
    r.verdict = Verdict::Divergent;
  } else {
    r.verdict = Verdict::Inconclusive;
  }
  return r;
}

CrossingRecord first_crossing(const BounceSkeleton& sk, double x) {
  double max_seen = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < sk.size(); ++n) {
    const double s = sk.log_velocities[n];
    if (s > x) {
      return {x, n, s - x, sk.log_times[n]};
    }
    max_seen = std::max(max_seen, s);
  }
  throw NotReached("first_crossing: level not exceeded within skeleton", max_seen);
}

void write_skeleton_csv(std::ostream& os, const BounceSkeleton& sk) {
  os << "n,zeta_n,S_n\n";
  for (std::size_t n = 0; n < sk.size(); ++n) {
    os << n << ',' << fmt17(sk.time(n)) << ',' << fmt17(sk.log_velocities[n]) << '\n';
  }
}

}  // namespace rlp
