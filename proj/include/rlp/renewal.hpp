#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rlp/archlaw.hpp"
#include "rlp/error.hpp"
#include "rlp/random.hpp"
#include "rlp/stats.hpp"

namespace rlp {

/// Step distribution of a real random walk.
class StepLaw {
 public:
  virtual ~StepLaw() = default;
  virtual double density(double x) const = 0;
  virtual double cdf(double x) const = 0;
  virtual double survival(double x) const { return 1.0 - cdf(x); }
  virtual double sample(Stream& rng) const = 0;
  virtual double mean() const = 0;
  virtual double variance() const = 0;
  virtual std::string name() const = 0;
};

/// Log-velocity step of the reflected Langevin process.
class LangevinStep final : public StepLaw {
 public:
  explicit LangevinStep(const Elasticity& e) : e_(e) {}
  double density(double x) const override { return step_density(x, e_); }
  double cdf(double x) const override { return step_cdf(x, e_); }
  double survival(double x) const override { return step_survival(x, e_); }
  double sample(Stream& rng) const override { return sample_step(rng, e_); }
  double mean() const override { return e_.mu; }
  double variance() const override;
  std::string name() const override { return "langevin"; }
  const Elasticity& elasticity() const { return e_; }

 private:
  Elasticity e_;
};

class GaussianStep final : public StepLaw {
 public:
  GaussianStep(double mean, double sd);
  double density(double x) const override;
  double cdf(double x) const override;
  double survival(double x) const override;
  double sample(Stream& rng) const override { return m_ + sd_ * rng.normal(); }
  double mean() const override { return m_; }
  double variance() const override { return sd_ * sd_; }
  std::string name() const override { return "gaussian"; }

 private:
  double m_, sd_;
};

/// Degenerate step, for tests.
class PointMassStep final : public StepLaw {
 public:
  explicit PointMassStep(double value) : v_(value) {}
  double density(double) const override { return 0.0; }
  double cdf(double x) const override { return x >= v_ ? 1.0 : 0.0; }
  double sample(Stream&) const override { return v_; }
  double mean() const override { return v_; }
  double variance() const override { return 0.0; }
  std::string name() const override { return "point-mass"; }

 private:
  double v_;
};

// Ladder processes ------------------------------------------------------------

struct LadderSample {
  std::vector<double> heights;
  std::vector<std::uint64_t> epochs;
};

class LadderBudgetExceeded : public BudgetExceeded {
 public:
  LadderBudgetExceeded(const std::string& what, LadderSample partial)
      : BudgetExceeded(what), partial_(std::move(partial)) {}
  const LadderSample& partial() const noexcept { return partial_; }

 private:
  LadderSample partial_;
};

inline constexpr std::uint64_t kDefaultLadderBudget = 10'000'000;

/// Strict record highs of the walk from 0, k records after the start.
/// Throws LadderBudgetExceeded when one record takes more than
/// max_steps_per_record steps.
LadderSample ascending_ladder(Stream& rng, const StepLaw& law, std::size_t k,
                              std::uint64_t max_steps_per_record = kDefaultLadderBudget);
/// Strict record lows, symmetrically.
LadderSample descending_ladder(Stream& rng, const StepLaw& law, std::size_t k,
                               std::uint64_t max_steps_per_record = kDefaultLadderBudget);

/// First strict ladder step (height increment and epoch), or nullopt when
/// the budget ran out.
struct LadderStep {
  double height;
  std::uint64_t epoch;
};
std::optional<LadderStep> first_ladder_step(Stream& rng, const StepLaw& law,
                                            bool ascending, std::uint64_t budget);

/// Independent first ascending ladder heights. Draws whose epoch exceeds
/// the budget are counted and left out.
struct LadderPool {
  std::vector<double> heights;
  std::uint64_t censored = 0;
  double censored_fraction() const {
    const double n = double(heights.size() + censored);
    return n > 0 ? double(censored) / n : 0.0;
  }
};

LadderPool ladder_height_pool(Stream& rng, const StepLaw& law, std::size_t n,
                              std::uint64_t budget = kDefaultLadderBudget);

/// Mean first ladder height with standard error.
MeanEstimate estimate_mu_H(Stream& rng, const StepLaw& law, std::size_t n,
                           std::uint64_t budget = kDefaultLadderBudget,
                           double max_censored_fraction = 1e-3);

/// Stationary overshoot law m(dy) = P(H1 > y) dy / mu_H, represented by a
/// pool of ladder heights.
class OvershootLaw {
 public:
  explicit OvershootLaw(LadderPool pool);

  MeanEstimate mu_H() const { return mu_H_; }
  /// Empirical P(H1 > y).
  double tail(double y) const;
  /// Empirical P(H1 >= y).
  double tail_inclusive(double y) const;
  /// CDF of m: E[min(H1, y)] / E[H1].
  double cdf(double y) const;
  const LadderPool& pool() const { return pool_; }
  const std::vector<double>& sorted_heights() const { return sorted_; }

 private:
  LadderPool pool_;
  std::vector<double> sorted_;
  std::vector<double> cum_;  // cumulative sums of sorted heights
  MeanEstimate mu_H_;
  friend double sample_overshoot_m(Stream& rng, const OvershootLaw& m);
};

/// U * H where H is a size-biased pick from the pool and U ~ Uniform(0, 1).
double sample_overshoot_m(Stream& rng, const OvershootLaw& m);

// Renewal function -----------------------------------------------------------

/// h(x) = sum_k P(D_k >= -x), the renewal function of the strict
/// descending ladder heights, tabulated on a grid from 0.
struct RenewalFunction {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> se;
  /// 1 / E|D_1|, the asymptotic slope used beyond the grid.
  double tail_slope = 0.0;
  double mean_descent = 0.0;
  std::uint64_t n_paths = 0;
  std::uint64_t censored_epochs = 0;
  /// 1 / knot spacing when the grid is uniform, else 0.
  double inv_step = 0.0;

  double x_max() const { return grid.back(); }
  /// Linear interpolation, 0 below 0, linear extension with tail_slope
  /// beyond the grid.
  double operator()(double x) const;
  /// As operator() but flat at the top knot beyond the grid; sets
  /// *truncated when that happened.
  double clamped(double x, bool* truncated = nullptr) const;
  double se_at(double x) const;
};

/// Estimate h on grid (must start at 0 and increase) from n_paths descending
/// ladder paths, each followed until it drops below -grid.back(). A ladder
/// epoch longer than max_steps_per_epoch is discarded and redrawn; the
/// number of such redraws is reported.
RenewalFunction renewal_function_h(Stream& rng, const StepLaw& law,
                                   const std::vector<double>& grid,
                                   std::size_t n_paths,
                                   std::uint64_t max_steps_per_epoch = kDefaultLadderBudget);

struct HbarEstimate {
  double value = 0.0;
  double se = 0.0;
  std::uint64_t n = 0;
  std::uint64_t truncated = 0;
};

/// hbar(x) = E_x[h(S_1); S_1 >= 0] by Monte Carlo with n draws.
HbarEstimate hbar(Stream& rng, const StepLaw& law, const RenewalFunction& h,
                  double x, std::size_t n);

// Conditioned walks ----------------------------------------------------------

enum class BarrierRange {
  /// min over 0..n, normalizer h(x - a)
  FromZero,
  /// min over 1..n, normalizer hbar(x - a); allows starts below a
  FromOne,
};

enum class Proposal {
  /// Particles follow the plain walk and carry h-transform weights.
  Plain,
  /// Particles follow the h-transformed chain itself (HChain); weights stay
  /// equal and every particle is an independent lineage.
  HTransform,
};

struct EnsembleConfig {
  Proposal proposal = Proposal::Plain;
  std::size_t n_steps = 1000;
  std::size_t n_particles = 10000;
  /// Systematic resampling cadence in steps (0 disables).
  std::size_t resample_every = 8;
  /// At a cadence step, resample only when ESS / n_particles is below this
  /// (1 resamples unconditionally).
  double resample_threshold = 1.0;
  double min_ess_fraction = 0.01;
};

struct WeightedEnsemble {
  std::vector<double> final_position;
  /// Running minimum over the constrained index range.
  std::vector<double> running_min;
  /// Running minimum at step n_steps / 2, for stabilization checks.
  std::vector<double> running_min_half;
  std::vector<double> weights;  // normalized
  double min_ess = 0.0;
  double final_ess = 0.0;
  /// Estimate of E_x[h(S_n - a); barrier respected], which equals the
  /// normalizer h(x - a) or hbar(x - a) when h is exact. NaN for the
  /// HTransform proposal.
  double mean_weight = 0.0;
  std::uint64_t resamplings = 0;
  /// Distinct ancestors, at step min(8, n_steps), of the final particles.
  std::size_t early_ancestors = 0;

  /// Weighted probability that the running minimum is >= level, with its
  /// ESS-based standard error.
  std::pair<double, double> prob_min_at_least(double level) const;
  /// Weighted mass of particles whose running minimum moved after n/2.
  double unstable_fraction() const;
};

/// Ensemble of the walk from x conditioned (by the h-transform) to stay
/// above a. With the plain proposal this is sequential importance sampling:
/// weights are h(S_n - a) on the barrier event, and DegenerateEnsemble is
/// thrown when the ESS falls below min_ess_fraction of the particle count.
WeightedEnsemble conditioned_walk_ensemble(Stream& rng, const StepLaw& law,
                                           const RenewalFunction& h, double x,
                                           double a, BarrierRange range,
                                           const EnsembleConfig& cfg);

/// Exact sampler of the h-transformed walk above 0 (Doob transform of the
/// walk killed below 0). Proposals s + X >= 0 are accepted with probability
/// h(s + X) / h(s + lookahead); steps beyond the lookahead are counted. A
/// start s < 0 gives the first step of the hbar-normalized transform.
class HChain {
 public:
  HChain(const StepLaw& law, const RenewalFunction& h, double lookahead = 40.0);
  double step(Stream& rng, double s);
  std::uint64_t proposals() const { return proposals_; }
  std::uint64_t accepted() const { return accepted_; }
  std::uint64_t overflows() const { return overflows_; }

 private:
  const StepLaw& law_;
  const RenewalFunction& h_;
  double lookahead_;
  std::uint64_t proposals_ = 0, accepted_ = 0, overflows_ = 0;
};

/// One attempt at the walk from x conditioned to stay positive at times
/// 1..horizon and to end at or above escape_level. Returns S_0..S_horizon,
/// or nullopt when rejected. Requires a positive-mean law.
std::optional<std::vector<double>> conditioned_walk_rejection(
    Stream& rng, const StepLaw& law, double x, std::size_t horizon,
    double escape_level);

struct EscapeLevel {
  double level = 0.0;
  double ruin_estimate = 0.0;
  double ruin_upper = 0.0;  // 99% Wilson upper bound
  std::uint64_t n_aux = 0;
};

inline constexpr double kEscapeMargin = 40.0;

/// Smallest candidate level whose ruin probability (walk from the level
/// ever reaching <= 0, declared escaped past level + kEscapeMargin) has a
/// 99% upper bound below max_ruin. Throws DomainError when none qualifies.
EscapeLevel choose_escape_level(Stream& rng, const StepLaw& law,
                                const std::vector<double>& candidates,
                                std::size_t n_aux, double max_ruin = 1e-4);

// Stationary undershoot / overshoot law ---------------------------------------

/// nu(dx, dy) = p(x + y) h(x) dx dy / mu_H on the quadrant.
double nu_density(double x, double y, const StepLaw& law,
                  const RenewalFunction& h, double mu_H);

/// Rejection sampler of nu restricted to x + y <= box.
class NuSampler {
 public:
  NuSampler(const StepLaw& law, const RenewalFunction& h, double mu_H,
            double box = 0.0, double min_captured = 0.999);

  std::pair<double, double> sample(Stream& rng);

  /// Total mass of nu (1 when h and mu_H are exact).
  double mass() const { return mass_; }
  double box_mass() const { return box_mass_; }
  double captured() const { return box_mass_ / mass_; }
  double box() const { return box_; }
  /// CDF of the first marginal of nu restricted to the box.
  double x_marginal_cdf(double x) const;
  /// Density of the second marginal (unrestricted), by quadrature.
  double y_marginal_density(double y) const;
  std::uint64_t proposals() const { return proposals_; }

 private:
  const StepLaw& law_;
  const RenewalFunction& h_;
  double mu_H_;
  double box_;
  double h_top_;
  double mass_ = 0.0, box_mass_ = 0.0;
  std::vector<double> cdf_x_, cdf_v_;
  // Window builders on several threads may share one instance.
  std::atomic<std::uint64_t> proposals_{0};
};

// Duality --------------------------------------------------------------------

struct DualityReport {
  bool skipped = false;
  std::string status;
  double ks = 0.0;
  double n_eff = 0.0;
  double ess = 0.0;
  double unstable_fraction = 0.0;
};

/// Compares the whole pool of first ladder heights with the infimum over
/// n >= 1 of the walk from 0 conditioned to stay nonnegative (ensemble of n
/// particles over n_steps steps).
DualityReport duality_check(Stream& rng, const StepLaw& law,
                            const RenewalFunction& h, const OvershootLaw& heights,
                            std::size_t n, std::size_t n_steps,
                            Proposal proposal = Proposal::HTransform);

void write_h_csv(std::ostream& os, const RenewalFunction& h);
void write_nu_csv(std::ostream& os,
                  const std::vector<std::pair<double, double>>& samples,
                  const std::vector<double>& weights = {});

}  // namespace rlp
