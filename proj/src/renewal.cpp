#include "rlp/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rlp/format.hpp"

namespace rlp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename F>
double gk(F f, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 8, 1e-12);
}

}  // namespace

double LangevinStep::variance() const {
  return 4.0 * std::numbers::pi * std::numbers::pi / 9.0;
}

GaussianStep::GaussianStep(double mean, double sd) : m_(mean), sd_(sd) {
  if (!(sd > 0.0) || !std::isfinite(mean)) {
    throw DomainError("GaussianStep: need finite mean and sd > 0");
  }
}

double GaussianStep::density(double x) const {
  const double z = (x - m_) / sd_;
  return std::exp(-0.5 * z * z) / (sd_ * std::sqrt(2.0 * std::numbers::pi));
}

double GaussianStep::cdf(double x) const {
  return 0.5 * std::erfc(-(x - m_) / (sd_ * std::numbers::sqrt2));
}

double GaussianStep::survival(double x) const {
  return 0.5 * std::erfc((x - m_) / (sd_ * std::numbers::sqrt2));
}

// Ladder processes ------------------------------------------------------------

std::optional<LadderStep> first_ladder_step(Stream& rng, const StepLaw& law,
                                            bool ascending, std::uint64_t budget) {
  double s = 0.0;
  for (std::uint64_t n = 1; n <= budget; ++n) {
    s += law.sample(rng);
    if (ascending ? s > 0.0 : s < 0.0) {
      return LadderStep{std::abs(s), n};
    }
  }
  return std::nullopt;
}

namespace {

LadderSample ladder(Stream& rng, const StepLaw& law, std::size_t k,
                    std::uint64_t budget, bool ascending) {
  if (k < 1) throw DomainError("ladder: k must be at least 1");
  LadderSample out;
  out.heights.push_back(0.0);
  out.epochs.push_back(0);
  double s = 0.0;
  std::uint64_t n = 0;
  while (out.heights.size() <= k) {
    std::uint64_t since = 0;
    const double record = out.heights.back();
    for (;;) {
      s += law.sample(rng);
      ++n;
      if (ascending ? s > record : s < record) break;
      if (++since >= budget) {
        throw LadderBudgetExceeded("ladder: step budget exhausted before k records",
                                   std::move(out));
      }
    }
    out.heights.push_back(s);
    out.epochs.push_back(n);
  }
  return out;
}

}  // namespace

LadderSample ascending_ladder(Stream& rng, const StepLaw& law, std::size_t k,
                              std::uint64_t max_steps_per_record) {
  return ladder(rng, law, k, max_steps_per_record, true);
}

LadderSample descending_ladder(Stream& rng, const StepLaw& law, std::size_t k,
                               std::uint64_t max_steps_per_record) {
  return ladder(rng, law, k, max_steps_per_record, false);
}

LadderPool ladder_height_pool(Stream& rng, const StepLaw& law, std::size_t n,
                              std::uint64_t budget) {
  LadderPool pool;
  pool.heights.reserve(n);
  while (pool.heights.size() < n) {
    if (auto st = first_ladder_step(rng, law, true, budget)) {
      pool.heights.push_back(st->height);
    } else {
      ++pool.censored;
      if (pool.censored > n) {
        throw BudgetExceeded("ladder_height_pool: most draws exceed the budget");
      }
    }
  }
  return pool;
}

MeanEstimate estimate_mu_H(Stream& rng, const StepLaw& law, std::size_t n,
                           std::uint64_t budget, double max_censored_fraction) {
  if (n < 100) throw DomainError("estimate_mu_H: n must be at least 100");
  const LadderPool pool = ladder_height_pool(rng, law, n, budget);
  if (pool.censored_fraction() > max_censored_fraction) {
    throw BudgetExceeded("estimate_mu_H: too many ladder epochs exceed the budget");
  }
  return mean_estimate(pool.heights);
}

OvershootLaw::OvershootLaw(LadderPool pool) : pool_(std::move(pool)) {
  if (pool_.heights.empty()) throw DomainError("OvershootLaw: empty pool");
  sorted_ = pool_.heights;
  std::sort(sorted_.begin(), sorted_.end());
  if (!(sorted_.front() >= 0.0)) throw DomainError("OvershootLaw: negative height");
  cum_.resize(sorted_.size());
  double c = 0.0;
  for (std::size_t i = 0; i < sorted_.size(); ++i) cum_[i] = (c += sorted_[i]);
  if (!(c > 0.0)) throw DomainError("OvershootLaw: all heights are zero");
  mu_H_ = mean_estimate(pool_.heights);
}

double OvershootLaw::tail(double y) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), y);
  return double(sorted_.end() - it) / double(sorted_.size());
}

double OvershootLaw::tail_inclusive(double y) const {
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), y);
  return double(sorted_.end() - it) / double(sorted_.size());
}

double OvershootLaw::cdf(double y) const {
  if (y <= 0.0) return 0.0;
  // E[min(H, y)] = sum_{H <= y} H + y * #{H > y}, over n; divided by E[H].
  const auto k = std::size_t(std::upper_bound(sorted_.begin(), sorted_.end(), y) -
                             sorted_.begin());
  const double below = k ? cum_[k - 1] : 0.0;
  return (below + y * double(sorted_.size() - k)) / cum_.back();
}

double sample_overshoot_m(Stream& rng, const OvershootLaw& m) {
  const double t = rng.uniform() * m.cum_.back();
  auto k = std::size_t(std::upper_bound(m.cum_.begin(), m.cum_.end(), t) - m.cum_.begin());
  if (k >= m.sorted_.size()) k = m.sorted_.size() - 1;
  return rng.uniform() * m.sorted_[k];
}

// Renewal function -----------------------------------------------------------

double RenewalFunction::operator()(double x) const {
  if (x < 0.0) return 0.0;
  const double top = grid.back();
  if (x >= top) return values.back() + tail_slope * (x - top);
  std::size_t i;
  if (inv_step > 0.0) {
    i = std::min(std::size_t(x * inv_step), grid.size() - 2);
  } else {
    i = std::size_t(std::upper_bound(grid.begin(), grid.end(), x) - grid.begin()) - 1;
  }
  const double f = (x - grid[i]) / (grid[i + 1] - grid[i]);
  return values[i] + f * (values[i + 1] - values[i]);
}

double RenewalFunction::clamped(double x, bool* truncated) const {
  if (x > grid.back()) {
    if (truncated) *truncated = true;
    return values.back();
  }
  return (*this)(x);
}

double RenewalFunction::se_at(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= grid.back()) return se.back();
  const std::size_t i =
      std::size_t(std::upper_bound(grid.begin(), grid.end(), x) - grid.begin()) - 1;
  const double f = (x - grid[i]) / (grid[i + 1] - grid[i]);
  return se[i] + f * (se[i + 1] - se[i]);
}

RenewalFunction renewal_function_h(Stream& rng, const StepLaw& law,
                                   const std::vector<double>& grid,
                                   std::size_t n_paths,
                                   std::uint64_t max_steps_per_epoch) {
  if (grid.size() < 2 || grid.front() != 0.0 ||
      !std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
    throw DomainError("renewal_function_h: grid must start at 0 and increase");
  }
  if (n_paths < 2) throw DomainError("renewal_function_h: need at least 2 paths");
  if (law.mean() > 0.0) {
    throw DomainError("renewal_function_h: law must not drift upwards");
  }
  const std::size_t K = grid.size();
  const double x_max = grid.back();
  std::vector<double> sum(K, 0.0), sum2(K, 0.0);
  std::vector<std::uint32_t> hist(K);
  std::uint64_t censored = 0, n_inc = 0;
  double total_descent = 0.0;

  for (std::size_t p = 0; p < n_paths; ++p) {
    std::fill(hist.begin(), hist.end(), 0u);
    hist[0] = 1;  // D_0 = 0
    double low = 0.0;
    while (low >= -x_max) {
      double s = low;
      std::uint64_t steps = 0;
      for (;;) {
        s += law.sample(rng);
        if (s < low) break;
        if (++steps >= max_steps_per_epoch) {
          ++censored;
          s = low;
          steps = 0;
        }
      }
      total_descent += low - s;
      ++n_inc;
      low = s;
      if (-low <= x_max) {
        const auto j = std::lower_bound(grid.begin(), grid.end(), -low) - grid.begin();
        ++hist[std::size_t(j)];
      }
    }
    double c = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
      c += hist[j];
      sum[j] += c;
      sum2[j] += c * c;
    }
  }

  RenewalFunction h;
  h.grid = grid;
  h.values.resize(K);
  h.se.resize(K);
  const double n = double(n_paths);
  for (std::size_t j = 0; j < K; ++j) {
    h.values[j] = sum[j] / n;
    const double var = std::max(0.0, (sum2[j] - sum[j] * sum[j] / n) / (n - 1.0));
    h.se[j] = std::sqrt(var / n);
  }
  h.mean_descent = total_descent / double(n_inc);
  h.tail_slope = 1.0 / h.mean_descent;
  h.n_paths = n_paths;
  h.censored_epochs = censored;
  const double step = grid[1] - grid[0];
  bool uniform = true;
  for (std::size_t j = 1; j < K; ++j) {
    if (std::abs(grid[j] - j * step) > 1e-9 * x_max) uniform = false;
  }
  h.inv_step = uniform ? 1.0 / step : 0.0;
  return h;
}

HbarEstimate hbar(Stream& rng, const StepLaw& law, const RenewalFunction& h,
                  double x, std::size_t n) {
  if (n < 2) throw DomainError("hbar: need at least 2 draws");
  double sum = 0.0, sum2 = 0.0;
  HbarEstimate r;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = x + law.sample(rng);
    double v = 0.0;
    if (s >= 0.0) {
      bool trunc = false;
      v = h.clamped(s, &trunc);
      if (trunc) ++r.truncated;
    }
    sum += v;
    sum2 += v * v;
  }
  const double dn = double(n);
  r.n = n;
  r.value = sum / dn;
  r.se = std::sqrt(std::max(0.0, (sum2 - sum * sum / dn) / (dn - 1.0)) / dn);
  return r;
}

// Conditioned walks ----------------------------------------------------------

std::pair<double, double> WeightedEnsemble::prob_min_at_least(double level) const {
  double p = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (running_min[i] >= level) p += weights[i];
  }
  const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / std::max(final_ess, 1.0));
  return {p, se};
}

double WeightedEnsemble::unstable_fraction() const {
  double f = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (running_min[i] < running_min_half[i]) f += weights[i];
  }
  return f;
}

namespace {

double ess_of(const std::vector<double>& w, double* total) {
  double s = 0.0, s2 = 0.0;
  for (double v : w) {
    s += v;
    s2 += v * v;
  }
  *total = s;
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

WeightedEnsemble htransform_ensemble(Stream& rng, const StepLaw& law,
                                     const RenewalFunction& h, double x, double a,
                                     BarrierRange range, const EnsembleConfig& cfg) {
  const std::size_t N = cfg.n_particles;
  const std::size_t half = cfg.n_steps / 2;
  HChain chain(law, h);
  WeightedEnsemble out;
  out.final_position.resize(N);
  out.running_min.resize(N);
  out.running_min_half.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    // The chain lives on u = s - a >= 0.
    double u = x - a;
    double mn = range == BarrierRange::FromZero ? u : kInf;
    double mn_half = mn;
    for (std::size_t n = 1; n <= cfg.n_steps; ++n) {
      u = chain.step(rng, u);
      mn = std::min(mn, u);
      if (n == half) mn_half = mn;
    }
    if (half == 0) mn_half = mn;
    out.final_position[i] = u + a;
    out.running_min[i] = mn + a;
    out.running_min_half[i] = mn_half + a;
  }
  out.weights.assign(N, 1.0 / double(N));
  out.min_ess = out.final_ess = double(N);
  out.early_ancestors = N;
  out.mean_weight = std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace

WeightedEnsemble conditioned_walk_ensemble(Stream& rng, const StepLaw& law,
                                           const RenewalFunction& h, double x,
                                           double a, BarrierRange range,
                                           const EnsembleConfig& cfg) {
  const std::size_t N = cfg.n_particles;
  if (N < 100) throw DomainError("conditioned_walk_ensemble: need >= 100 particles");
  if (cfg.n_steps < 1) throw DomainError("conditioned_walk_ensemble: need >= 1 step");
  if (range == BarrierRange::FromZero && x < a) {
    throw DomainError("conditioned_walk_ensemble: start below the barrier needs FromOne");
  }
  if (cfg.proposal == Proposal::HTransform) return htransform_ensemble(rng, law, h, x, a, range, cfg);
  std::vector<double> pos(N, x), hv(N), w(N), mn(N), mn_half(N);
  const double base = range == BarrierRange::FromZero ? h(x - a) : 1.0;
  std::fill(hv.begin(), hv.end(), base);
  std::fill(w.begin(), w.end(), 1.0);
  std::fill(mn.begin(), mn.end(), range == BarrierRange::FromZero ? x : kInf);
  double log_norm = std::log(base);
  WeightedEnsemble out;
  out.min_ess = double(N);
  const std::size_t half = cfg.n_steps / 2;
  std::vector<double> cum(N);
  std::vector<std::size_t> idx(N);
  std::vector<double> anc(N);
  const std::size_t early = std::min<std::size_t>(8, cfg.n_steps);

  auto check_ess = [&](double ess) {
    out.min_ess = std::min(out.min_ess, ess);
    if (ess < cfg.min_ess_fraction * double(N)) {
      throw DegenerateEnsemble("conditioned_walk_ensemble: effective sample size collapsed",
                               ess);
    }
  };

  for (std::size_t n = 1; n <= cfg.n_steps; ++n) {
    for (std::size_t i = 0; i < N; ++i) {
      if (w[i] == 0.0) continue;
      const double s = pos[i] + law.sample(rng);
      pos[i] = s;
      if (s < a) {
        w[i] = 0.0;
        continue;
      }
      if (s < mn[i]) mn[i] = s;
      const double hn = h(s - a);
      w[i] *= hn / hv[i];
      hv[i] = hn;
    }
    if (n == half) mn_half = mn;
    if (n == early) std::iota(anc.begin(), anc.end(), 0.0);
    if (cfg.resample_every && n % cfg.resample_every == 0 && n < cfg.n_steps) {
      double total;
      const double ess = ess_of(w, &total);
      check_ess(ess);
      if (ess >= cfg.resample_threshold * double(N)) continue;
      log_norm += std::log(total / double(N));
      // Systematic resampling.
      std::partial_sum(w.begin(), w.end(), cum.begin());
      const double u0 = rng.uniform() / double(N);
      std::size_t j = 0;
      for (std::size_t k = 0; k < N; ++k) {
        const double u = (u0 + double(k) / double(N)) * total;
        while (j + 1 < N && cum[j] < u) ++j;
        idx[k] = j;
      }
      auto gather = [&](std::vector<double>& v) {
        std::vector<double> t(N);
        for (std::size_t k = 0; k < N; ++k) t[k] = v[idx[k]];
        v.swap(t);
      };
      gather(pos);
      gather(hv);
      gather(mn);
      if (n >= half) gather(mn_half);
      if (n >= early) gather(anc);
      std::fill(w.begin(), w.end(), 1.0);
      ++out.resamplings;
    }
  }
  if (half == 0) mn_half = mn;
  double total;
  const double ess = ess_of(w, &total);
  check_ess(ess);
  out.final_ess = ess;
  {
    std::vector<double> live;
    for (std::size_t i = 0; i < N; ++i) {
      if (w[i] > 0.0) live.push_back(anc[i]);
    }
    std::sort(live.begin(), live.end());
    out.early_ancestors = std::size_t(std::unique(live.begin(), live.end()) - live.begin());
  }
  out.mean_weight = std::exp(log_norm) * total / double(N);
  for (double& v : w) v /= total;
  out.final_position = std::move(pos);
  out.running_min = std::move(mn);
  out.running_min_half = std::move(mn_half);
  out.weights = std::move(w);
  return out;
}

HChain::HChain(const StepLaw& law, const RenewalFunction& h, double lookahead)
    : law_(law), h_(h), lookahead_(lookahead) {
  if (!(lookahead > 0.0)) throw DomainError("HChain: lookahead must be positive");
}

double HChain::step(Stream& rng, double s) {
  if (!(s + lookahead_ > 0.0)) throw DomainError("HChain: state too far below the barrier");
  const double top = h_(s + lookahead_);
  for (;;) {
    const double dx = law_.sample(rng);
    ++proposals_;
    const double t = s + dx;
    if (t < 0.0) continue;
    if (dx > lookahead_) {
      ++overflows_;
      ++accepted_;
      return t;
    }
    if (rng.uniform() * top < h_(t)) {
      ++accepted_;
      return t;
    }
  }
}

std::optional<std::vector<double>> conditioned_walk_rejection(
    Stream& rng, const StepLaw& law, double x, std::size_t horizon,
    double escape_level) {
  if (!(law.mean() > 0.0)) {
    throw DomainError("conditioned_walk_rejection: law must have positive mean");
  }
  if (horizon < 1) throw DomainError("conditioned_walk_rejection: horizon >= 1");
  std::vector<double> path;
  path.reserve(horizon + 1);
  path.push_back(x);
  double s = x;
  for (std::size_t n = 1; n <= horizon; ++n) {
    s += law.sample(rng);
    if (!(s > 0.0)) return std::nullopt;
    path.push_back(s);
  }
  if (s < escape_level) return std::nullopt;
  return path;
}

EscapeLevel choose_escape_level(Stream& rng, const StepLaw& law,
                                const std::vector<double>& candidates,
                                std::size_t n_aux, double max_ruin) {
  if (!(law.mean() > 0.0)) {
    throw DomainError("choose_escape_level: law must have positive mean");
  }
  constexpr std::uint64_t kMaxSteps = 1'000'000;
  for (double level : candidates) {
    std::uint64_t ruined = 0;
    for (std::size_t i = 0; i < n_aux; ++i) {
      double s = level;
      for (std::uint64_t k = 0;; ++k) {
        s += law.sample(rng);
        if (s <= 0.0 || k == kMaxSteps) {
          ++ruined;
          break;
        }
        if (s >= level + kEscapeMargin) break;
      }
    }
    EscapeLevel r;
    r.level = level;
    r.n_aux = n_aux;
    r.ruin_estimate = double(ruined) / double(n_aux);
    r.ruin_upper = wilson_interval(double(ruined), double(n_aux), 0.99).hi;
    if (r.ruin_upper < max_ruin) return r;
  }
  throw DomainError("choose_escape_level: no candidate level has small enough ruin");
}

// Stationary undershoot / overshoot law ---------------------------------------

double nu_density(double x, double y, const StepLaw& law,
                  const RenewalFunction& h, double mu_H) {
  if (x < 0.0 || y < 0.0) return 0.0;
  return law.density(x + y) * h(x) / mu_H;
}

NuSampler::NuSampler(const StepLaw& law, const RenewalFunction& h, double mu_H,
                     double box, double min_captured)
    : law_(law), h_(h), mu_H_(mu_H), box_(box > 0.0 ? box : h.x_max()) {
  if (!(mu_H > 0.0)) throw DomainError("NuSampler: mu_H must be positive");
  h_top_ = h_(box_);
  for (std::size_t j = 0; j < h_.grid.size() && h_.grid[j] <= box_; ++j) {
    h_top_ = std::max(h_top_, h_.values[j]);
  }
  // Integration nodes: grid knots inside the box, then the box edge.
  cdf_x_.push_back(0.0);
  for (double g : h_.grid) {
    if (g > 0.0 && g < box_) cdf_x_.push_back(g);
  }
  cdf_x_.push_back(box_);
  const double f_box = law_.cdf(box_);
  cdf_v_.assign(cdf_x_.size(), 0.0);
  for (std::size_t i = 1; i < cdf_x_.size(); ++i) {
    cdf_v_[i] = cdf_v_[i - 1] + gk([&](double t) { return h_(t) * (f_box - law_.cdf(t)); },
                                   cdf_x_[i - 1], cdf_x_[i]) / mu_H_;
  }
  box_mass_ = cdf_v_.back();
  double full = 0.0;
  for (std::size_t i = 1; i < cdf_x_.size(); ++i) {
    full += gk([&](double t) { return h_(t) * law_.survival(t); }, cdf_x_[i - 1], cdf_x_[i]);
  }
  for (double t0 = box_; t0 < box_ + 200.0; t0 += 10.0) {
    full += gk([&](double t) { return h_(t) * law_.survival(t); }, t0, t0 + 10.0);
  }
  mass_ = full / mu_H_;
  if (captured() < min_captured) {
    throw TruncationError("NuSampler: truncation box captures too little mass", captured());
  }
}

std::pair<double, double> NuSampler::sample(Stream& rng) {
  for (;;) {
    ++proposals_;
    const double r = law_.sample(rng);
    if (r < 0.0 || r > box_) continue;
    if (rng.uniform() * box_ > r) continue;
    const double x = rng.uniform() * r;
    if (rng.uniform() * h_top_ >= h_(x)) continue;
    return {x, r - x};
  }
}

double NuSampler::x_marginal_cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= box_) return 1.0;
  const auto i = std::size_t(std::upper_bound(cdf_x_.begin(), cdf_x_.end(), x) -
                             cdf_x_.begin()) - 1;
  const double f_box = law_.cdf(box_);
  // h is linear inside a cell, so one Gauss-Kronrod panel is enough.
  const double part = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                          [&](double t) { return h_(t) * (f_box - law_.cdf(t)); },
                          cdf_x_[i], x, 0) / mu_H_;
  return (cdf_v_[i] + part) / box_mass_;
}

double NuSampler::y_marginal_density(double y) const {
  if (y < 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 1; i < cdf_x_.size(); ++i) {
    s += gk([&](double t) { return h_(t) * law_.density(t + y); }, cdf_x_[i - 1], cdf_x_[i]);
  }
  for (double t0 = box_; t0 < box_ + 200.0; t0 += 10.0) {
    s += gk([&](double t) { return h_(t) * law_.density(t + y); }, t0, t0 + 10.0);
  }
  return s / mu_H_;
}

// Duality --------------------------------------------------------------------

DualityReport duality_check(Stream& rng, const StepLaw& law,
                            const RenewalFunction& h, const OvershootLaw& heights,
                            std::size_t n, std::size_t n_steps, Proposal proposal) {
  DualityReport r;
  if (law.variance() == 0.0) {
    r.skipped = true;
    r.status = "skipped: degenerate step law never descends, so the conditioned "
               "infimum and the ladder height cannot agree";
    return r;
  }
  const auto& pool = heights.pool().heights;
  if (pool.empty()) throw DomainError("duality_check: empty ladder pool");
  EnsembleConfig cfg;
  cfg.n_particles = n;
  cfg.n_steps = n_steps;
  cfg.proposal = proposal;
  const WeightedEnsemble ens =
      conditioned_walk_ensemble(rng, law, h, 0.0, 0.0, BarrierRange::FromOne, cfg);
  const EmpiricalSample a(pool);
  const EmpiricalSample b(ens.running_min, ens.weights);
  const KsResult ks = ks_two_sample(a, b);
  r.ks = ks.statistic;
  r.n_eff = ks.n_eff;
  r.ess = ens.final_ess;
  r.unstable_fraction = ens.unstable_fraction();
  r.status = "ok";
  return r;
}

void write_h_csv(std::ostream& os, const RenewalFunction& h) {
  os << "x,h,SE\n";
  for (std::size_t j = 0; j < h.grid.size(); ++j) {
    os << fmt17(h.grid[j]) << ',' << fmt17(h.values[j]) << ',' << fmt17(h.se[j]) << '\n';
  }
}

void write_nu_csv(std::ostream& os,
                  const std::vector<std::pair<double, double>>& samples,
                  const std::vector<double>& weights) {
  os << "x,y,weight\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    os << fmt17(samples[i].first) << ',' << fmt17(samples[i].second) << ',' << fmt17(w)
       << '\n';
  }
}

}  // namespace rlp
