#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rlp/random.hpp"

namespace rlp {

/// Sample of real values with optional importance weights. Weights are
/// normalized to sum to one on construction.
class EmpiricalSample {
 public:
  EmpiricalSample() = default;
  explicit EmpiricalSample(std::vector<double> values);
  EmpiricalSample(std::vector<double> values, std::vector<double> weights);

  std::size_t size() const { return values_.size(); }
  bool weighted() const { return !weights_.empty(); }
  const std::vector<double>& values() const { return values_; }
  /// Normalized weights; empty for an unweighted sample.
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t i) const {
    return weights_.empty() ? 1.0 / double(values_.size()) : weights_[i];
  }

  /// Kish effective sample size (equals size() when unweighted).
  double ess() const;
  double mean() const;

  /// Weighted empirical CDF at x (fraction of mass at values <= x).
  double ecdf(double x) const;

 private:
  std::vector<double> values_;
  std::vector<double> weights_;
  mutable std::vector<std::size_t> order_;
  mutable std::vector<double> cum_;
  void ensure_sorted() const;
};

struct KsResult {
  double statistic = 0.0;
  /// Asymptotic Kolmogorov p-value at the effective sample size. For
  /// weighted samples this is a conservative proxy, not an exact p-value.
  double p_value = 1.0;
  double n_eff = 0.0;
};

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

/// Critical value of the KS statistic at level alpha for effective size n.
double ks_critical_value(double n_eff, double alpha);

KsResult ks_one_sample(const EmpiricalSample& s,
                       const std::function<double(double)>& cdf);
KsResult ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson test of observed counts against expected cell probabilities.
/// Cells with expected count below min_expected are pooled into one cell.
ChiSquareResult chi_square_counts(const std::vector<double>& observed,
                                  const std::vector<double>& probabilities,
                                  double min_expected = 5.0);

/// Pearson test of s against a reference CDF over the bins defined by
/// consecutive edges; mass outside [edges.front(), edges.back()] forms two
/// extra cells.
ChiSquareResult chi_square_binned(const EmpiricalSample& s,
                                  const std::function<double(double)>& cdf,
                                  const std::vector<double>& edges);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

/// Percentile bootstrap interval for a statistic of an unweighted sample.
Interval bootstrap_ci(const EmpiricalSample& s,
                      const std::function<double(const std::vector<double>&)>& stat,
                      double level, Stream& rng, int replicates = 1000);

/// Two-sided standard normal quantile for a central interval at level.
double normal_critical(double level);

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::uint64_t n = 0;
  Interval ci(double level) const;
};

MeanEstimate mean_estimate(const std::vector<double>& x);

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(double successes, double n, double level);

}  // namespace rlp
