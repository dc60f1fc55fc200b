#include "rlp/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rlp/error.hpp"
#include "rlp/format.hpp"

namespace rlp {

namespace {

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

// Normalized duration of the arch from S_n to S_{n+1}: start speed 1,
// returning speed e^{S_{n+1} - S_n} / c.
double bridge_duration(Stream& rng, const Elasticity& e, double s0, double s1) {
  return sample_duration_given_velocities(rng, 1.0, std::exp(s1 - s0 - e.log_c));
}

// Fills the forward part S_1..S_N (S_0 already in place) with durations
// d_0..d_N; the last arch is drawn only for its duration.
void fill_forward(Stream& rng, StationaryWindow& w, std::size_t N) {
  for (std::size_t n = 0; n <= N; ++n) {
    const ArchSample a = sample_arch(rng, w.e);
    w.durations.push_back(a.duration);
    if (n < N) w.S.push_back(w.S.back() + a.log_step);
  }
}

// Appends one forward entry. The last arch's duration was drawn with a step
// that was discarded, so that arch is redrawn as a whole.
void extend_forward(Stream& rng, StationaryWindow& w) {
  const ArchSample a = sample_arch(rng, w.e);
  w.durations.back() = a.duration;
  w.S.push_back(w.S.back() + a.log_step);
  w.durations.push_back(sample_arch(rng, w.e).duration);
}

}  // namespace

bool StationaryWindow::anchored() const {
  if (S.empty() || back_depth >= S.size()) return false;
  if (!(S[back_depth] > 0.0)) return false;
  for (std::size_t i = 0; i < back_depth; ++i) {
    if (S[i] > 0.0) return false;
  }
  return true;
}

StationaryWindow theta_shift(const StationaryWindow& w, double x,
                             std::size_t min_back_depth) {
  std::size_t i = 0;
  while (i < w.S.size() && !(w.S[i] > x)) ++i;
  if (i == w.S.size()) {
    throw TruncatedShift("theta_shift: no entry exceeds the level", -1);
  }
  if (i < std::max<std::size_t>(min_back_depth, 1)) {
    throw TruncatedShift("theta_shift: not enough entries below the new anchor", long(i));
  }
  StationaryWindow out;
  out.e = w.e;
  out.back_depth = i;
  out.weight = w.weight;
  out.durations = w.durations;
  out.S.resize(w.S.size());
  for (std::size_t k = 0; k < w.S.size(); ++k) out.S[k] = w.S[k] - x;
  return out;
}

SupercriticalContext make_supercritical_context(Stream& rng, const Elasticity& e,
                                                const ContextSizes& sizes) {
  if (e.regime != Regime::Supercritical) {
    throw DomainError("make_supercritical_context: regime must be supercritical");
  }
  SupercriticalContext ctx;
  ctx.law = std::make_unique<LangevinStep>(e);
  ctx.m = std::make_unique<OvershootLaw>(
      ladder_height_pool(rng, *ctx.law, sizes.ladder_pool, sizes.ladder_budget));
  ctx.escape = choose_escape_level(rng, *ctx.law, {5, 10, 15, 20, 30, 40}, sizes.escape_aux);
  return ctx;
}

CriticalContext make_critical_context(Stream& rng, const ContextSizes& sizes) {
  CriticalContext ctx;
  ctx.law = std::make_unique<LangevinStep>(Elasticity::critical());
  ctx.m = std::make_unique<OvershootLaw>(
      ladder_height_pool(rng, *ctx.law, sizes.ladder_pool, sizes.ladder_budget));
  std::vector<double> grid;
  const auto knots = std::size_t(std::llround(sizes.h_xmax / sizes.h_step));
  for (std::size_t j = 0; j <= knots; ++j) grid.push_back(double(j) * sizes.h_step);
  ctx.h = std::make_unique<RenewalFunction>(
      renewal_function_h(rng, *ctx.law, grid, sizes.h_paths, sizes.ladder_budget));
  ctx.nu = std::make_unique<NuSampler>(*ctx.law, *ctx.h, ctx.m->mu_H().mean);
  return ctx;
}

StationaryWindow build_window_supercritical(Stream& rng, const SupercriticalContext& ctx,
                                            std::size_t K, std::size_t N,
                                            std::uint64_t max_attempts) {
  const Elasticity& e = ctx.law->elasticity();
  if (e.regime != Regime::Supercritical) {
    throw DomainError("build_window_supercritical: regime must be supercritical");
  }
  if (K < 1) throw DomainError("build_window_supercritical: K must be at least 1");
  const double y = sample_overshoot_m(rng, *ctx.m);
  // Long enough for the escape requirement not to bite on short windows.
  const std::size_t horizon =
      std::max<std::size_t>(K, std::size_t(std::ceil(3.0 * ctx.escape.level / e.mu)));
  std::optional<std::vector<double>> back;
  for (std::uint64_t k = 0; !back; ++k) {
    if (k == max_attempts) {
      throw BudgetExceeded("build_window_supercritical: rejection budget exhausted");
    }
    back = conditioned_walk_rejection(rng, *ctx.law, -y, horizon, ctx.escape.level);
  }
  StationaryWindow w;
  w.e = e;
  w.back_depth = K;
  w.S.reserve(K + N + 1);
  for (std::size_t n = K; n >= 1; --n) w.S.push_back(-(*back)[n]);
  w.S.push_back(y);
  for (std::size_t i = 0; i < K; ++i) {
    w.durations.push_back(bridge_duration(rng, e, w.S[i], w.S[i + 1]));
  }
  fill_forward(rng, w, N);
  return w;
}

StationaryWindow build_window_critical(Stream& rng, const CriticalContext& ctx,
                                       std::size_t K, std::size_t N) {
  if (K < 1) throw DomainError("build_window_critical: K must be at least 1");
  const Elasticity& e = ctx.law->elasticity();
  const auto [x, y] = ctx.nu->sample(rng);
  std::vector<double> up(K + 1);
  up[1] = x;
  HChain chain(*ctx.law, *ctx.h);
  for (std::size_t n = 2; n <= K; ++n) up[n] = chain.step(rng, up[n - 1]);
  StationaryWindow w;
  w.e = e;
  w.back_depth = K;
  w.S.reserve(K + N + 1);
  for (std::size_t n = K; n >= 1; --n) w.S.push_back(-up[n]);
  w.S.push_back(y);
  for (std::size_t i = 0; i < K; ++i) {
    w.durations.push_back(bridge_duration(rng, e, w.S[i], w.S[i + 1]));
  }
  fill_forward(rng, w, N);
  return w;
}

AlphaResult alpha(const StationaryWindow& w, double x) {
  const StationaryWindow s = theta_shift(w, x, 1);
  const std::size_t D = s.back_depth;
  if (D == 0) throw DomainError("alpha: no entries before the anchor");
  AlphaResult r;
  std::vector<double> logt(D + 1);
  double sum = 0.0;
  for (std::size_t j = D; j >= 1; --j) {
    const double t = std::exp(2.0 * s.S_at(-long(j))) * s.duration_at(-long(j));
    sum += t;
    logt[j] = std::log(t);
    if (logt[j] > -std::pow(double(j), 0.25)) ++r.large_terms;
  }
  r.value = std::exp(2.0 * x) * sum;
  // Geometric fit of the deepest quarter of the terms.
  const std::size_t q = std::max<std::size_t>(D / 4, 2);
  if (D >= 4) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t j = D - q + 1; j <= D; ++j) {
      sx += double(j);
      sy += logt[j];
      sxx += double(j) * double(j);
      sxy += double(j) * logt[j];
    }
    const double nq = double(q);
    const double b = (nq * sxy - sx * sy) / (nq * sxx - sx * sx);
    const double a = (sy - b * sx) / nq;
    if (b < 0.0) {
      const double ratio = std::exp(b);
      r.tail_bound = std::exp(2.0 * x) * std::exp(a + b * double(D)) * ratio / (1.0 - ratio);
    } else {
      r.tail_bound = std::numeric_limits<double>::infinity();
    }
  } else {
    r.tail_bound = std::numeric_limits<double>::infinity();
  }
  return r;
}

EntranceSample sample_entrance(Stream& rng, const Elasticity& e,
                               const EntranceContext& ctx, double v,
                               EntranceMode mode) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("sample_entrance: v must be positive");
  if (e.regime == Regime::Subcritical) {
    throw DomainError("sample_entrance: regime must be critical or supercritical");
  }
  const bool critical = e.regime == Regime::Critical;
  if (critical ? !ctx.critical : !ctx.super) {
    throw DomainError("sample_entrance: missing context for the regime");
  }
  const OvershootLaw& m = critical ? *ctx.critical->m : *ctx.super->m;
  const Elasticity& le = critical ? ctx.critical->law->elasticity()
                                  : ctx.super->law->elasticity();
  EntranceSample out;
  out.v = v;
  if (mode == EntranceMode::ForwardOnly) {
    out.Y = sample_overshoot_m(rng, m);
    out.approximate = true;
    out.forward = simulate_skeleton(rng, le, v * std::exp(out.Y), std::max<std::size_t>(ctx.N, 1));
    return out;
  }
  StationaryWindow w = critical ? build_window_critical(rng, *ctx.critical, ctx.K, ctx.N)
                                : build_window_supercritical(rng, *ctx.super, ctx.K, ctx.N);
  const double x = std::log(v);
  double top = *std::max_element(w.S.begin(), w.S.end());
  for (std::uint64_t k = 0; !(top > x); ++k) {
    if (k == ctx.max_extension) {
      throw BudgetExceeded("sample_entrance: forward walk did not reach ln v");
    }
    extend_forward(rng, w);
    top = std::max(top, w.S.back());
  }
  const StationaryWindow s = theta_shift(w, x, 1);
  const AlphaResult a = alpha(w, x);
  out.Y = s.S_at(0);
  out.tau_v = a.value;
  out.tau_tail_bound = a.tail_bound;
  BounceSkeleton& f = out.forward;
  f.e = le;
  f.start_velocity = v * std::exp(out.Y);
  f.log_times.push_back(-std::numeric_limits<double>::infinity());
  f.log_velocities.push_back(out.Y + x);
  for (long n = 0; n < s.last_index(); ++n) {
    const double d = s.duration_at(n);
    f.log_times.push_back(log_add(f.log_times.back(), 2.0 * (s.S_at(n) + x) + std::log(d)));
    f.log_velocities.push_back(s.S_at(n + 1) + x);
    f.arch_durations.push_back(d);
  }
  return out;
}

std::optional<double> overshoot_above(Stream& rng, const EntranceSample& s, double v2,
                                      std::uint64_t max_steps) {
  const double level = std::log(v2);
  for (double lv : s.forward.log_velocities) {
    if (lv > level) return lv - level;
  }
  double lv = s.forward.log_velocities.back();
  for (std::uint64_t k = 0; k < max_steps; ++k) {
    lv += sample_step(rng, s.forward.e);
    if (lv > level) return lv - level;
  }
  return std::nullopt;
}

void write_window_csv(std::ostream& os, const StationaryWindow& w) {
  os << "n,S_n,duration_n,weight\n";
  for (long n = w.first_index(); n <= w.last_index(); ++n) {
    os << n << ',' << fmt17(w.S_at(n)) << ',' << fmt17(w.duration_at(n)) << ','
       << fmt17(w.weight) << '\n';
  }
}

void write_entrance_csv(std::ostream& os, const std::vector<EntranceSample>& s) {
  os << "v,Y,tau_v,tau_tail_bound\n";
  for (const auto& e : s) {
    os << fmt17(e.v) << ',' << fmt17(e.Y) << ',' << fmt17(e.tau_v) << ','
       << fmt17(e.tau_tail_bound) << '\n';
  }
}

}  // namespace rlp
