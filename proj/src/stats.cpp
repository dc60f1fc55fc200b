#include "rlp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "rlp/error.hpp"

namespace rlp {

EmpiricalSample::EmpiricalSample(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("empty sample");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("sample values must be finite");
  }
}

EmpiricalSample::EmpiricalSample(std::vector<double> values,
                                 std::vector<double> weights)
    : EmpiricalSample(std::move(values)) {
  if (weights.size() != values_.size()) {
    throw DomainError("weights and values differ in length");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DomainError("weights must be finite and nonnegative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw DomainError("weights sum to zero");
  for (double& w : weights) w /= total;
  weights_ = std::move(weights);
}

double EmpiricalSample::ess() const {
  if (weights_.empty()) return double(values_.size());
  double s2 = 0.0;
  for (double w : weights_) s2 += w * w;
  return 1.0 / s2;
}

double EmpiricalSample::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) m += weight(i) * values_[i];
  return m;
}

void EmpiricalSample::ensure_sorted() const {
  if (!order_.empty()) return;
  order_.resize(values_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
    return values_[a] < values_[b];
  });
  cum_.resize(values_.size());
  double c = 0.0;
  for (std::size_t k = 0; k < order_.size(); ++k) {
    c += weight(order_[k]);
    cum_[k] = c;
  }
}

double EmpiricalSample::ecdf(double x) const {
  ensure_sorted();
  auto it = std::upper_bound(order_.begin(), order_.end(), x,
                             [&](double v, std::size_t i) { return v < values_[i]; });
  if (it == order_.begin()) return 0.0;
  return std::min(1.0, cum_[std::size_t(it - order_.begin()) - 1]);
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.3) {
    // 1 - P(K <= lambda) via the theta-function form; P(K <= 0.3) < 1e-8.
    const double r = std::sqrt(2.0 * std::numbers::pi) / lambda;
    double s = 0.0;
    for (int k = 1; k <= 7; ++k) {
      const double t = (2 * k - 1) * std::numbers::pi / lambda;
      s += std::exp(-t * t / 8.0);
    }
    return 1.0 - r * s;
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

double ks_critical_value(double n_eff, double alpha) {
  if (!(n_eff > 0.0) || !(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("ks_critical_value: bad arguments");
  }
  double lo = 0.2, hi = 5.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_survival(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / std::sqrt(n_eff);
}

namespace {

// Stephens' finite-sample correction to the asymptotic distribution.
double ks_p(double d, double n) {
  const double rn = std::sqrt(n);
  return kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d);
}

void require_size(const EmpiricalSample& s) {
  if (s.size() < 10) throw DomainError("KS test needs at least 10 values");
}

}  // namespace

KsResult ks_one_sample(const EmpiricalSample& s,
                       const std::function<double(double)>& cdf) {
  require_size(s);
  const auto& v = s.values();
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  double d = 0.0, below = 0.0;
  std::size_t k = 0;
  while (k < order.size()) {
    // Group ties so the ECDF jump is taken once.
    const double x = v[order[k]];
    double mass = 0.0;
    while (k < order.size() && v[order[k]] == x) mass += s.weight(order[k++]);
    const double f = cdf(x);
    d = std::max({d, std::abs(f - below), std::abs(below + mass - f)});
    below += mass;
  }
  KsResult r;
  r.statistic = d;
  r.n_eff = s.ess();
  r.p_value = ks_p(d, r.n_eff);
  return r;
}

KsResult ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b) {
  require_size(a);
  require_size(b);
  auto sorted = [](const EmpiricalSample& s) {
    std::vector<std::pair<double, double>> p(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) p[i] = {s.values()[i], s.weight(i)};
    std::sort(p.begin(), p.end());
    return p;
  };
  const auto pa = sorted(a), pb = sorted(b);
  double fa = 0.0, fb = 0.0, d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < pa.size() || j < pb.size()) {
    double x;
    if (j == pb.size() || (i < pa.size() && pa[i].first <= pb[j].first)) {
      x = pa[i].first;
    } else {
      x = pb[j].first;
    }
    while (i < pa.size() && pa[i].first == x) fa += pa[i++].second;
    while (j < pb.size() && pb[j].first == x) fb += pb[j++].second;
    d = std::max(d, std::abs(fa - fb));
  }
  KsResult r;
  r.statistic = d;
  const double na = a.ess(), nb = b.ess();
  r.n_eff = na * nb / (na + nb);
  r.p_value = ks_p(d, r.n_eff);
  return r;
}

ChiSquareResult chi_square_counts(const std::vector<double>& observed,
                                  const std::vector<double>& probabilities,
                                  double min_expected) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw DomainError("chi_square_counts: size mismatch or empty");
  }
  const double n = std::accumulate(observed.begin(), observed.end(), 0.0);
  const double ptot = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  if (!(n > 0.0) || !(ptot > 0.0)) throw DomainError("chi_square_counts: empty");
  double stat = 0.0, pool_o = 0.0, pool_e = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = n * probabilities[i] / ptot;
    if (e < min_expected) {
      pool_o += observed[i];
      pool_e += e;
      continue;
    }
    stat += (observed[i] - e) * (observed[i] - e) / e;
    ++cells;
  }
  if (pool_e > 0.0) {
    stat += (pool_o - pool_e) * (pool_o - pool_e) / pool_e;
    ++cells;
  }
  ChiSquareResult r;
  r.statistic = stat;
  r.dof = std::max(1, cells - 1);
  r.p_value = boost::math::cdf(
      boost::math::complement(boost::math::chi_squared(r.dof), stat));
  return r;
}

ChiSquareResult chi_square_binned(const EmpiricalSample& s,
                                  const std::function<double(double)>& cdf,
                                  const std::vector<double>& edges) {
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
    throw DomainError("chi_square_binned: edges must be sorted, at least two");
  }
  const std::size_t cells = edges.size() + 1;
  std::vector<double> obs(cells, 0.0), prob(cells, 0.0);
  for (double x : s.values()) {
    const auto k = std::upper_bound(edges.begin(), edges.end(), x) - edges.begin();
    obs[std::size_t(k)] += 1.0;
  }
  double prev = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const double f = cdf(edges[k]);
    prob[k] = f - prev;
    prev = f;
  }
  prob[cells - 1] = 1.0 - prev;
  return chi_square_counts(obs, prob);
}

Interval bootstrap_ci(const EmpiricalSample& s,
                      const std::function<double(const std::vector<double>&)>& stat,
                      double level, Stream& rng, int replicates) {
  if (s.size() == 0) throw DomainError("bootstrap_ci: empty sample");
  if (!(level > 0.0 && level < 1.0) || replicates < 10) {
    throw DomainError("bootstrap_ci: bad level or replicate count");
  }
  const auto& v = s.values();
  std::vector<double> res(replicates), buf(v.size());
  for (int r = 0; r < replicates; ++r) {
    for (auto& x : buf) x = v[rng.index(v.size())];
    res[r] = stat(buf);
  }
  std::sort(res.begin(), res.end());
  const double a = 0.5 * (1.0 - level);
  auto q = [&](double p) {
    const double pos = p * (replicates - 1);
    const auto i = std::size_t(pos);
    const double f = pos - double(i);
    return i + 1 < res.size() ? res[i] * (1 - f) + res[i + 1] * f : res[i];
  };
  return {q(a), q(1.0 - a)};
}

double normal_critical(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("normal_critical: bad level");
  return boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * level);
}

Interval MeanEstimate::ci(double level) const {
  const double z = normal_critical(level);
  return {mean - z * se, mean + z * se};
}

MeanEstimate mean_estimate(const std::vector<double>& x) {
  if (x.empty()) throw DomainError("mean_estimate: empty");
  MeanEstimate m;
  m.n = x.size();
  // Welford for stability on long runs.
  double mean = 0.0, m2 = 0.0;
  std::uint64_t k = 0;
  for (double v : x) {
    ++k;
    const double d = v - mean;
    mean += d / double(k);
    m2 += d * (v - mean);
  }
  m.mean = mean;
  m.se = k > 1 ? std::sqrt(m2 / double(k - 1) / double(k)) : 0.0;
  return m;
}

Interval wilson_interval(double successes, double n, double level) {
  if (!(n > 0.0)) throw DomainError("wilson_interval: n must be positive");
  const double z = normal_critical(level);
  const double p = successes / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace rlp
