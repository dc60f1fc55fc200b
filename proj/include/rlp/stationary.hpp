#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "rlp/archlaw.hpp"
#include "rlp/random.hpp"
#include "rlp/renewal.hpp"
#include "rlp/skeleton.hpp"

namespace rlp {

/// Finite piece of the two-sided log-velocity sequence, indexed
/// -back_depth .. fwd_length, anchored so that S_0 > 0 >= S_n for n < 0.
/// duration(n) is the normalized duration of arch n (from bounce n to n+1).
struct StationaryWindow {
  Elasticity e;
  std::size_t back_depth = 0;
  std::vector<double> S;
  std::vector<double> durations;
  double weight = 1.0;

  std::size_t fwd_length() const { return S.size() - back_depth - 1; }
  long first_index() const { return -long(back_depth); }
  long last_index() const { return long(fwd_length()); }
  double S_at(long n) const { return S.at(std::size_t(n + long(back_depth))); }
  double duration_at(long n) const {
    return durations.at(std::size_t(n + long(back_depth)));
  }
  bool anchored() const;
};

/// Re-index around the first index with S_n > x and subtract x. Throws
/// TruncatedShift when no entry exceeds x or fewer than min_back_depth
/// entries would remain before the new anchor.
StationaryWindow theta_shift(const StationaryWindow& w, double x,
                             std::size_t min_back_depth = 1);

/// Precomputed pieces for supercritical windows.
struct SupercriticalContext {
  std::unique_ptr<LangevinStep> law;
  std::unique_ptr<OvershootLaw> m;
  EscapeLevel escape;
};

struct ContextSizes {
  std::size_t ladder_pool = 100000;
  std::uint64_t ladder_budget = kDefaultLadderBudget;
  std::size_t escape_aux = 100000;
  std::size_t h_paths = 10000;
  double h_xmax = 24.0;
  double h_step = 0.1;
};

SupercriticalContext make_supercritical_context(Stream& rng, const Elasticity& e,
                                                const ContextSizes& sizes = {});

/// Precomputed pieces for critical windows.
struct CriticalContext {
  std::unique_ptr<LangevinStep> law;
  std::unique_ptr<OvershootLaw> m;
  std::unique_ptr<RenewalFunction> h;
  std::unique_ptr<NuSampler> nu;
};

CriticalContext make_critical_context(Stream& rng, const ContextSizes& sizes = {});

inline constexpr std::uint64_t kDefaultWindowAttempts = 1'000'000;

/// S_0 from m, the backward part by rejection (the walk from -S_0 staying
/// positive), the forward part plainly; durations attached given the walk.
StationaryWindow build_window_supercritical(Stream& rng, const SupercriticalContext& ctx,
                                            std::size_t K, std::size_t N,
                                            std::uint64_t max_attempts = kDefaultWindowAttempts);

/// (-S_{-1}, S_0) from nu, the backward part from the exact h-transformed
/// walk above 0, the forward part plainly. Windows have weight 1.
StationaryWindow build_window_critical(Stream& rng, const CriticalContext& ctx,
                                       std::size_t K, std::size_t N);

struct AlphaResult {
  double value = 0.0;
  /// Extrapolated contribution of the entries below the window.
  double tail_bound = 0.0;
  /// #{n <= K : e^{2 S_{-n}} duration_{-n} > exp(-n^{1/4})}
  std::size_t large_terms = 0;
};

/// alpha_x = sum over n < T_x of e^{2 S_n} duration_n, i.e. e^{2x} times the
/// same sum over negative indices of theta_shift(w, x).
AlphaResult alpha(const StationaryWindow& w, double x);

enum class EntranceMode { Backward, ForwardOnly };

struct EntranceSample {
  double v = 0.0;
  double Y = 0.0;
  double tau_v = 0.0;
  double tau_tail_bound = 0.0;
  /// True in ForwardOnly mode, where tau_v is set to 0.
  bool approximate = false;
  BounceSkeleton forward;
};

/// Either context pointer may be null; the one matching e's regime is used.
struct EntranceContext {
  const SupercriticalContext* super = nullptr;
  const CriticalContext* critical = nullptr;
  std::size_t K = 1000;
  std::size_t N = 64;
  /// Forward arches appended at most when the window stays below ln v.
  std::uint64_t max_extension = 10'000'000;
};

EntranceSample sample_entrance(Stream& rng, const Elasticity& e,
                               const EntranceContext& ctx, double v,
                               EntranceMode mode);

/// Overshoot ln(speed / v2) of the first forward bounce with speed above
/// v2, continuing the log-velocity walk past the stored skeleton when
/// needed. nullopt when max_steps further steps did not reach v2.
std::optional<double> overshoot_above(Stream& rng, const EntranceSample& s, double v2,
                                      std::uint64_t max_steps);

void write_window_csv(std::ostream& os, const StationaryWindow& w);
void write_entrance_csv(std::ostream& os, const std::vector<EntranceSample>& s);

}  // namespace rlp
