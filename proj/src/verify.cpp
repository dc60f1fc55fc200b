#include "rlp/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include "rlp/archlaw.hpp"
#include "rlp/error.hpp"
#include "rlp/random.hpp"
#include "rlp/renewal.hpp"
#include "rlp/sde.hpp"
#include "rlp/skeleton.hpp"
#include "rlp/stationary.hpp"
#include "rlp/stats.hpp"

namespace rlp {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZ99 = 2.5758293035489004;

const char* const kAnchors[kCheckCount] = {
    "step-law normalization and mean",
    "joint arch density normalization and speed marginal",
    "arch duration tail constant",
    "accumulation phase separation",
    "overshoot convergence to the stationary law m",
    "Woodroofe-Gut identity, supercritical",
    "renewal function h: exact values, monotonicity, subadditivity",
    "undershoot/overshoot law nu: mass and marginals",
    "ladder height / conditioned infimum duality",
    "h-ratio identities for the conditioned walk",
    "conditional duration tail bound",
    "Euler oracle against exact first arch",
    "entrance law overshoot and threshold invariance",
    "alpha truncation sensitivity",
    "determinism of the report",
};

Elasticity elasticity_for(double c) {
  Elasticity e = Elasticity::of(c);
  return e.regime == Regime::Critical ? Elasticity::critical() : e;
}

// Precomputations shared by several checks, each built once from its own
// stream.
class Shared {
 public:
  explicit Shared(const VerifyConfig& cfg) : cfg_(cfg) {
    if (cfg.quick) {
      // The escape level keeps its full auxiliary run: fewer walks cannot
      // certify a ruin bound of 1e-4.
      sizes_.ladder_pool = 10000;
      sizes_.h_paths = 1000;
    }
  }

  const VerifyConfig& cfg() const { return cfg_; }
  std::size_t n(std::size_t full) const {
    return cfg_.quick ? std::max<std::size_t>(full / 10, 1) : full;
  }
  double tol() const { return cfg_.quick ? 2.0 : 1.0; }

  const CriticalContext& critical() {
    std::call_once(crit_once_, [&] {
      Stream rng(cfg_.seed, task_id("verify/context/critical"));
      crit_ = std::make_unique<CriticalContext>(make_critical_context(rng, sizes_));
    });
    return *crit_;
  }

  const SupercriticalContext& super() {
    std::call_once(super_once_, [&] {
      Stream rng(cfg_.seed, task_id("verify/context/supercritical"));
      super_ = std::make_unique<SupercriticalContext>(
          make_supercritical_context(rng, elasticity_for(cfg_.c), sizes_));
    });
    return *super_;
  }

 private:
  VerifyConfig cfg_;
  ContextSizes sizes_;
  std::once_flag crit_once_, super_once_;
  std::unique_ptr<CriticalContext> crit_;
  std::unique_ptr<SupercriticalContext> super_;
};

void detail(CheckResult& r, std::string name, double value) {
  r.details.emplace_back(std::move(name), value);
}

std::string tag(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", c);
  return buf;
}

// 1 -----------------------------------------------------------------------
CheckResult check_step_law(Shared& sh, Stream&) {
  CheckResult r;
  r.threshold = 1e-8 * sh.tol();
  double worst = 0.0;
  for (double c : {critical_elasticity(), 0.5, 1.0}) {
    const Elasticity e = elasticity_for(c);
    auto f = [&](double w) { return step_density(w, e); };
    auto wf = [&](double w) { return w * step_density(w, e); };
    const double mass = GK::integrate(f, -kInf, e.log_c, 12, 1e-13) +
                        GK::integrate(f, e.log_c, kInf, 12, 1e-13);
    const double mean = GK::integrate(wf, -kInf, e.log_c, 12, 1e-13) +
                        GK::integrate(wf, e.log_c, kInf, 12, 1e-13);
    const double dm = std::abs(mass - 1.0);
    const double du = std::abs(mean - (e.log_c + kPiOverSqrt3));
    detail(r, "c=" + tag(c) + "/mass_error", dm);
    detail(r, "c=" + tag(c) + "/mean_error", du);
    worst = std::max({worst, dm, du});
  }
  r.statistic = worst;
  return r;
}

// 2 -----------------------------------------------------------------------
double speed_marginal(double u) {
  // Integrate the joint density over s = e^t.
  auto g = [u](double t) {
    const double s = std::exp(t);
    return joint_density(s, u) * s;
  };
  return GK::integrate(g, -50.0, 120.0, 20, 1e-13);
}

CheckResult check_joint_density(Shared& sh, Stream&) {
  CheckResult r;
  r.threshold = sh.tol();
  const double mass = GK::integrate(
      [](double u) { return u > 0.0 && std::isfinite(u) ? speed_marginal(u) : 0.0; },
      0.0, kInf, 15, 1e-10);
  const double dmass = std::abs(mass - 1.0);
  double worst_rel = 0.0;
  for (double u : {0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0}) {
    // Speed density from the step law at c = 1: p(ln u) / u.
    const double expect = step_density(std::log(u), Elasticity::of(1.0)) / u;
    worst_rel = std::max(worst_rel, std::abs(speed_marginal(u) / expect - 1.0));
  }
  detail(r, "mass_error", dmass);
  detail(r, "marginal_max_rel_error", worst_rel);
  r.statistic = std::max(dmass / 1e-3, worst_rel / 1e-5);
  return r;
}

// 3 -----------------------------------------------------------------------
CheckResult check_duration_tail(Shared& sh, Stream& rng) {
  CheckResult r;
  r.threshold = 0.15 * sh.tol();
  const std::size_t N = sh.n(1'000'000);
  const Elasticity e = Elasticity::of(1.0);
  const std::vector<double> ts = {1e2, 1e3, 1e4};
  std::vector<std::size_t> above(ts.size(), 0);
  for (std::size_t i = 0; i < N; ++i) {
    const double d = sample_arch(rng, e).duration;
    for (std::size_t k = 0; k < ts.size(); ++k) above[k] += d > ts[k];
  }
  const double cp = duration_tail_constant();
  detail(r, "c_prime", cp);
  double worst = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double est = double(above[k]) / double(N) * std::pow(ts[k], 0.25);
    detail(r, "t=" + tag(ts[k]) + "/scaled_tail", est);
    worst = std::max(worst, std::abs(est / cp - 1.0));
  }
  r.statistic = worst;
  return r;
}

// 4 -----------------------------------------------------------------------
CheckResult check_phase_separation(Shared& sh, Stream& rng) {
  CheckResult r;
  r.comparison = ">=";
  r.threshold = 1.0 - 0.05 * sh.tol();
  const std::size_t M = sh.n(200);
  auto fraction = [&](double c, Verdict want) {
    const Elasticity e = elasticity_for(c);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < M; ++i) {
      const BounceSkeleton sk = simulate_skeleton(rng, e, 1.0, 2000);
      hits += accumulation_diagnostics(sk).verdict == want;
    }
    return double(hits) / double(M);
  };
  const double conv = fraction(0.05, Verdict::Convergent);
  const double div = fraction(sh.cfg().c, Verdict::Divergent);
  detail(r, "c=0.05/convergent_fraction", conv);
  detail(r, "c=" + tag(sh.cfg().c) + "/divergent_fraction", div);
  r.statistic = std::min(conv, div);
  return r;
}

// 5 -----------------------------------------------------------------------
CheckResult check_overshoot(Shared& sh, Stream& rng) {
  CheckResult r;
  r.threshold = 0.02 * sh.tol();
  const std::size_t N = sh.n(100'000);
  constexpr std::uint64_t kBudget = 1'000'000;
  double worst = 0.0;
  auto run = [&](const StepLaw& law, const OvershootLaw& m, const std::string& name) {
    std::vector<double> walk, ref;
    std::size_t censored = 0;
    for (std::size_t i = 0; i < N; ++i) {
      double s = -20.0;
      std::uint64_t k = 0;
      while (s <= 0.0 && k < kBudget) {
        s += law.sample(rng);
        ++k;
      }
      if (s > 0.0) {
        walk.push_back(s);
      } else {
        ++censored;
      }
    }
    for (std::size_t i = 0; i < N; ++i) ref.push_back(sample_overshoot_m(rng, m));
    const KsResult ks = ks_two_sample(EmpiricalSample(walk), EmpiricalSample(ref));
    detail(r, name + "/ks", ks.statistic);
    detail(r, name + "/censored_fraction", double(censored) / double(N));
    worst = std::max(worst, ks.statistic);
  };
  const SupercriticalContext& sc = sh.super();
  run(*sc.law, *sc.m, "c=" + tag(sh.cfg().c));
  const CriticalContext& cc = sh.critical();
  run(*cc.law, *cc.m, "c=critical");
  r.statistic = worst;
  return r;
}

// 6 -----------------------------------------------------------------------
CheckResult check_woodroofe_gut(Shared& sh, Stream& rng) {
  CheckResult r;
  r.threshold = sh.tol();
  const std::size_t N = sh.n(1'000'000);
  const LangevinStep law(Elasticity::of(1.0));
  const double mu = law.mean();
  const LadderPool pool = ladder_height_pool(rng, law, N);
  const EscapeLevel esc =
      choose_escape_level(rng, law, {5, 10, 15, 20, 30, 40}, 100'000);
  detail(r, "escape_level", esc.level);
  detail(r, "escape_ruin_upper", esc.ruin_upper);
  const std::vector<double> ys = {0.5, 1.0, 2.0};
  std::vector<std::size_t> stay(ys.size(), 0);
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const double y = ys[k];
    for (std::size_t i = 0; i < N; ++i) {
      double s = 0.0;
      for (;;) {
        s += law.sample(rng);
        if (s <= y) break;
        if (s > y + esc.level) {
          ++stay[k];
          break;
        }
      }
    }
  }
  const auto& H = pool.heights;
  const double n = double(H.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const double y = ys[k];
    // Ratio of means mu * mean(1{H > y}) / mean(H) with delta-method SE.
    double a = 0, b = 0;
    for (double h : H) {
      a += h > y;
      b += h;
    }
    a /= n;
    b /= n;
    double vb = 0, cab = 0;
    for (double h : H) {
      vb += (h - b) * (h - b);
      cab += ((h > y) - a) * (h - b);
    }
    vb /= n - 1;
    cab /= n - 1;
    const double va = a * (1 - a);
    const double ratio = mu * a / b;
    const double se_ratio =
        ratio * std::sqrt((va / (a * a) + vb / (b * b) - 2 * cab / (a * b)) / n);
    const Interval lhs{ratio - kZ99 * se_ratio, ratio + kZ99 * se_ratio};
    const Interval rhs = wilson_interval(double(stay[k]), double(N), 0.99);
    const double p = double(stay[k]) / double(N);
    const double gap = std::abs(ratio - p);
    const double half = 0.5 * (lhs.hi - lhs.lo) + 0.5 * (rhs.hi - rhs.lo);
    detail(r, "y=" + tag(y) + "/ladder_side", ratio);
    detail(r, "y=" + tag(y) + "/infimum_side", p);
    worst = std::max(worst, gap / half);
  }
  r.statistic = worst;
  return r;
}

// 7 -----------------------------------------------------------------------
CheckResult check_renewal_h(Shared& sh, Stream&) {
  CheckResult r;
  r.threshold = 2.0 * sh.tol();
  const RenewalFunction& h = *sh.critical().h;
  const bool exact = h(0.0) == 1.0 && h(-0.5) == 0.0 && h(-1e-300) == 0.0 && h(-100.0) == 0.0;
  detail(r, "exact_values", exact ? 1.0 : 0.0);
  std::vector<double> knots;
  for (int j = 0; j < 20; ++j) knots.push_back(1.2 * j);
  double mono = -kInf, sub = -kInf;
  for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
    const double se = std::hypot(h.se_at(knots[j]), h.se_at(knots[j + 1]));
    const double drop = h(knots[j]) - h(knots[j + 1]);
    mono = std::max(mono, se > 0 ? drop / se : (drop > 0 ? kInf : -kInf));
  }
  for (std::size_t i = 1; i < knots.size(); ++i) {
    for (std::size_t j = 1; i + j < knots.size(); ++j) {
      const double x = knots[i], a = knots[j], xa = knots[i + j];
      const double excess = h(xa) - h(x) - h(a);
      const double se = std::sqrt(h.se_at(xa) * h.se_at(xa) + h.se_at(x) * h.se_at(x) +
                                  h.se_at(a) * h.se_at(a));
      sub = std::max(sub, excess / se);
    }
  }
  detail(r, "monotone_max_violation_se", mono);
  detail(r, "subadditive_max_violation_se", sub);
  detail(r, "censored_epochs", double(h.censored_epochs));
  r.statistic = exact ? std::max(mono, sub) : kInf;
  return r;
}

// 8 -----------------------------------------------------------------------
CheckResult check_nu(Shared& sh, Stream& rng) {
  CheckResult r;
  r.threshold = sh.tol();
  const CriticalContext& cc = sh.critical();
  NuSampler nu(*cc.law, *cc.h, cc.m->mu_H().mean);
  const double mass_err = std::abs(nu.mass() - 1.0);
  detail(r, "mass", nu.mass());
  detail(r, "box_captured", nu.captured());
  double worst = mass_err / 0.05;
  // Second marginal against m: mu_H * nu_+(y) = P(H >= y).
  const RenewalFunction& h = *cc.h;
  const double muH = cc.m->mu_H().mean;
  const double npool = double(cc.m->pool().heights.size());
  for (double y : {0.5, 1.0, 2.0}) {
    const double q = muH * nu.y_marginal_density(y);
    const double se_q = GK::integrate(
        [&](double x) { return cc.law->density(x + y) * h.se_at(x); }, 0.0, kInf, 15, 1e-8);
    const double p = cc.m->tail_inclusive(y);
    const double se_p = std::sqrt(p * (1 - p) / npool);
    const double z = std::abs(q - p) / (kZ99 * std::hypot(se_q, se_p));
    detail(r, "y=" + tag(y) + "/nu_plus_scaled", q);
    detail(r, "y=" + tag(y) + "/ladder_tail", p);
    worst = std::max(worst, z);
  }
  const std::size_t N = sh.n(100'000);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < N; ++i) {
    const auto [x, y] = nu.sample(rng);
    xs.push_back(x);
    ys.push_back(y);
  }
  const KsResult kx = ks_one_sample(EmpiricalSample(xs), [&](double x) { return nu.x_marginal_cdf(x); });
  const double crit_x = ks_critical_value(double(N), 0.01);
  const KsResult ky = ks_one_sample(EmpiricalSample(ys), [&](double y) { return cc.m->cdf(y); });
  const double crit_y = ks_critical_value(double(N) * npool / (double(N) + npool), 0.01);
  detail(r, "x_marginal_ks", kx.statistic);
  detail(r, "y_marginal_ks", ky.statistic);
  worst = std::max({worst, kx.statistic / crit_x, ky.statistic / crit_y});
  r.statistic = worst;
  return r;
}

// 9 -----------------------------------------------------------------------
CheckResult check_duality(Shared& sh, Stream& rng) {
  CheckResult r;
  r.threshold = 0.03 * sh.tol();
  const CriticalContext& cc = sh.critical();
  const DualityReport d = duality_check(rng, *cc.law, *cc.h, *cc.m, sh.n(10'000), sh.n(10'000));
  detail(r, "n_eff", d.n_eff);
  detail(r, "unstable_fraction", d.unstable_fraction);
  r.statistic = d.ks;
  return r;
}

// 10 ----------------------------------------------------------------------
CheckResult check_h_ratios(Shared& sh, Stream& rng) {
  CheckResult r;
  r.threshold = sh.tol();
  const CriticalContext& cc = sh.critical();
  const RenewalFunction& h = *cc.h;
  EnsembleConfig cfg;
  cfg.proposal = Proposal::HTransform;
  cfg.n_particles = sh.n(10'000);
  cfg.n_steps = sh.n(10'000);
  const std::size_t nbar = sh.n(400'000);
  double worst = 0.0;
  auto compare = [&](const std::string& name, double x, double level, BarrierRange range,
                     double expect, double se_expect) {
    const WeightedEnsemble ens = conditioned_walk_ensemble(rng, *cc.law, h, x, 0.0, range, cfg);
    const auto [p, se] = ens.prob_min_at_least(level);
    detail(r, name + "/ensemble", p);
    detail(r, name + "/expected", expect);
    worst = std::max(worst, std::abs(p - expect) / (kZ99 * std::hypot(se, se_expect)));
  };
  auto ratio_se = [](double a, double sa, double b, double sb) {
    return a / b * std::hypot(sa / a, sb / b);
  };
  for (auto [x, level] : {std::pair{2.0, 1.0}, {3.0, 1.0}, {3.0, 2.0}}) {
    const double a = h(x - level), b = h(x);
    compare("from0/x=" + tag(x) + "/level=" + tag(level), x, level, BarrierRange::FromZero,
            a / b, ratio_se(a, h.se_at(x - level), b, h.se_at(x)));
  }
  for (auto [x, level] : {std::pair{0.0, 1.0}, {-1.0, 0.5}, {1.0, 2.0}}) {
    const HbarEstimate a = hbar(rng, *cc.law, h, x - level, nbar);
    const HbarEstimate b = hbar(rng, *cc.law, h, x, nbar);
    compare("from1/x=" + tag(x) + "/level=" + tag(level), x, level, BarrierRange::FromOne,
            a.value / b.value, ratio_se(a.value, a.se, b.value, b.se));
  }
  r.statistic = worst;
  return r;
}

// 11 ----------------------------------------------------------------------
CheckResult check_conditional_tail(Shared& sh, Stream& rng) {
  CheckResult r;
  r.threshold = sh.tol();
  const std::vector<double> as = {0.5, 1.0, 2.0};
  const std::vector<double> fr = {0.1, 0.4, 0.7, 1.0};
  const std::vector<double> ts = {1.0, 4.0, 16.0};
  const std::size_t per = sh.n(100'000);
  double worst = 0.0;
  std::vector<double> worst_t(ts.size(), 0.0);
  for (double a : as) {
    for (double fu : fr) {
      for (double fv : fr) {
        std::vector<std::size_t> above(ts.size(), 0);
        for (std::size_t i = 0; i < per; ++i) {
          const double s = sample_duration_given_velocities(rng, fu * a, fv * a);
          for (std::size_t k = 0; k < ts.size(); ++k) above[k] += s > ts[k] * a * a;
        }
        for (std::size_t k = 0; k < ts.size(); ++k) {
          const double q = double(above[k]) / double(per) / conditional_tail_bound(ts[k]);
          worst_t[k] = std::max(worst_t[k], q);
          worst = std::max(worst, q);
        }
      }
    }
  }
  for (std::size_t k = 0; k < ts.size(); ++k) {
    detail(r, "t=" + tag(ts[k]) + "/max_tail_over_bound", worst_t[k]);
  }
  detail(r, "draws_per_point", double(per));
  r.statistic = worst;
  return r;
}

// 12 ----------------------------------------------------------------------
CheckResult check_sde(Shared& sh, Stream& rng) {
  CheckResult r;
  r.comparison = ">=";
  r.threshold = 0.01 / sh.tol();
  const std::size_t N = sh.n(5000);
  const double t_max = 2.0;
  const Elasticity e = Elasticity::of(1.0);
  const std::vector<int> factors = {100, 10, 1};
  const std::vector<double> dts = {1e-3, 1e-4, 1e-5};
  std::vector<std::vector<double>> oracle(factors.size());
  for (std::size_t i = 0; i < N; ++i) {
    const auto fa = first_arch_coupled(rng, e, 0.0, 1.0, 1e-5, factors, t_max);
    for (std::size_t l = 0; l < factors.size(); ++l) {
      oracle[l].push_back(fa[l] ? fa[l]->zeta1 : kInf);
    }
  }
  // Durations past t_max are censored to one value on both sides; the KS
  // distance is then that of the distributions restricted to [0, t_max].
  const double censored = 2.0 * t_max;
  for (auto& o : oracle) {
    for (double& z : o) z = z <= t_max ? z : censored;
  }
  std::vector<double> exact;
  for (std::size_t i = 0; i < N; ++i) {
    const double d = sample_arch(rng, e).duration;
    exact.push_back(d <= t_max ? d : censored);
  }
  const EmpiricalSample ex(exact);
  std::vector<double> dist;
  for (std::size_t l = 0; l < factors.size(); ++l) {
    const KsResult ks = ks_two_sample(EmpiricalSample(oracle[l]), ex);
    dist.push_back(ks.statistic);
    detail(r, "dt=" + tag(dts[l]) + "/ks", ks.statistic);
    if (l + 1 == factors.size()) {
      detail(r, "dt=1e-05/p_value", ks.p_value);
      r.statistic = ks.p_value;
    }
  }
  const bool monotone = dist[0] > dist[1] && dist[1] > dist[2];
  detail(r, "ks_decreasing", monotone ? 1.0 : 0.0);
  if (!monotone) r.statistic = 0.0;
  return r;
}

// 13 ----------------------------------------------------------------------
CheckResult check_entrance(Shared& sh, Stream& rng) {
  CheckResult r;
  r.threshold = 0.02 * sh.tol();
  const std::size_t N = sh.n(10'000);
  const double v = 5.0;
  double worst = 0.0;
  auto run = [&](const Elasticity& e, const EntranceContext& ctx, const OvershootLaw& m,
                 const std::string& name) {
    std::vector<double> ys, ys2;
    std::size_t censored = 0, unreached = 0;
    for (std::size_t i = 0; i < N; ++i) {
      EntranceSample s;
      try {
        s = sample_entrance(rng, e, ctx, v, EntranceMode::Backward);
      } catch (const BudgetExceeded&) {
        ++unreached;
        continue;
      }
      ys.push_back(s.Y);
      const auto o = overshoot_above(rng, s, 2.0 * v, 1'000'000);
      if (o) {
        ys2.push_back(*o);
      } else {
        ++censored;
      }
    }
    auto cdf = [&](double y) { return m.cdf(y); };
    const double k1 = ks_one_sample(EmpiricalSample(ys), cdf).statistic;
    const double k2 = ks_one_sample(EmpiricalSample(ys2), cdf).statistic;
    detail(r, name + "/Y_ks", k1);
    detail(r, name + "/threshold_2v_ks", k2);
    detail(r, name + "/threshold_2v_censored", double(censored));
    detail(r, name + "/v_unreached", double(unreached));
    worst = std::max({worst, k1, k2});
  };
  {
    const SupercriticalContext& sc = sh.super();
    EntranceContext ctx;
    ctx.super = &sc;
    ctx.K = 200;
    ctx.max_extension = 1'000'000;
    run(sc.law->elasticity(), ctx, *sc.m, "c=" + tag(sh.cfg().c));
  }
  {
    const CriticalContext& cc = sh.critical();
    EntranceContext ctx;
    ctx.critical = &cc;
    ctx.K = 200;
    ctx.max_extension = 1'000'000;
    run(cc.law->elasticity(), ctx, *cc.m, "c=critical");
  }
  r.statistic = worst;
  return r;
}

// 14 ----------------------------------------------------------------------
StationaryWindow truncate_back(const StationaryWindow& w, std::size_t depth) {
  StationaryWindow t = w;
  const std::size_t drop = w.back_depth - depth;
  t.back_depth = depth;
  t.S.assign(w.S.begin() + long(drop), w.S.end());
  t.durations.assign(w.durations.begin() + long(drop), w.durations.end());
  return t;
}

CheckResult check_alpha(Shared& sh, Stream& rng) {
  CheckResult r;
  r.threshold = 0.01 * sh.tol();
  const std::size_t M = sh.n(100);
  double worst = 0.0;
  auto run = [&](const std::function<StationaryWindow()>& build, const std::string& name) {
    std::vector<double> rel;
    for (std::size_t i = 0; i < M; ++i) {
      const StationaryWindow w = build();
      const double deep = alpha(w, 0.0).value;
      const double shallow = alpha(truncate_back(w, 1000), 0.0).value;
      rel.push_back(std::abs(deep - shallow) / deep);
    }
    std::nth_element(rel.begin(), rel.begin() + long(rel.size() / 2), rel.end());
    const double med = rel[rel.size() / 2];
    detail(r, name + "/median_rel_change", med);
    worst = std::max(worst, med);
  };
  const SupercriticalContext& sc = sh.super();
  run([&] { return build_window_supercritical(rng, sc, 10'000, 1); }, "c=" + tag(sh.cfg().c));
  const CriticalContext& cc = sh.critical();
  run([&] { return build_window_critical(rng, cc, 10'000, 1); }, "c=critical");
  r.statistic = worst;
  return r;
}

// 15 ----------------------------------------------------------------------
CheckResult check_determinism(Shared& sh, Stream&) {
  CheckResult r;
  r.threshold = 0.0;
  VerifyConfig sub;
  sub.seed = sh.cfg().seed;
  sub.c = sh.cfg().c;
  sub.quick = true;
  sub.threads = 1;
  sub.only = {1, 3, 4, 11};
  const std::string a = run_verify(sub).to_json();
  sub.threads = 4;
  const std::string b = run_verify(sub).to_json();
  std::size_t diff = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) diff += a[i] != b[i];
  detail(r, "report_bytes", double(a.size()));
  r.statistic = double(diff);
  return r;
}

using CheckFn = CheckResult (*)(Shared&, Stream&);

const CheckFn kChecks[kCheckCount] = {
    check_step_law,   check_joint_density, check_duration_tail, check_phase_separation,
    check_overshoot,  check_woodroofe_gut, check_renewal_h,     check_nu,
    check_duality,    check_h_ratios,      check_conditional_tail, check_sde,
    check_entrance,   check_alpha,         check_determinism,
};

CheckResult run_one(Shared& sh, int id) {
  Stream rng(sh.cfg().seed, task_id("verify/check"), std::uint64_t(id));
  CheckResult r;
  try {
    r = kChecks[id - 1](sh, rng);
    r.pass = r.comparison == "<=" ? r.statistic <= r.threshold : r.statistic >= r.threshold;
  } catch (const std::exception& ex) {
    r.error = ex.what();
    r.statistic = std::numeric_limits<double>::quiet_NaN();
    r.pass = false;
  }
  r.id = id;
  r.anchor = kAnchors[id - 1];
  std::sort(r.details.begin(), r.details.end());
  return r;
}

}  // namespace

const char* check_anchor(int id) {
  if (id < 1 || id > kCheckCount) throw DomainError("check_anchor: unknown check id");
  return kAnchors[id - 1];
}

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string VerifyReport::to_json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema"] = 1;
  j["seed"] = config.seed;
  j["config"] = {{"c", config.c}, {"quick", config.quick}, {"only", config.only}};
  j["all_pass"] = all_pass();
  ordered_json arr = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json o;
    o["id"] = c.id;
    o["anchor"] = c.anchor;
    o["comparison"] = c.comparison;
    o["statistic"] = c.statistic;
    o["threshold"] = c.threshold;
    o["pass"] = c.pass;
    ordered_json d = ordered_json::object();
    for (const auto& [k, v] : c.details) d[k] = v;
    o["details"] = d;
    if (!c.error.empty()) o["error"] = c.error;
    arr.push_back(o);
  }
  j["checks"] = arr;
  return j.dump(2) + "\n";
}

VerifyReport run_verify(const VerifyConfig& cfg) {
  if (!(cfg.c > critical_elasticity()) || !std::isfinite(cfg.c) ||
      elasticity_for(cfg.c).regime != Regime::Supercritical) {
    throw DomainError("verify: c must be finite and above the critical value 0.1630335");
  }
  std::vector<int> ids = cfg.only;
  if (ids.empty()) {
    for (int i = 1; i <= kCheckCount; ++i) ids.push_back(i);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (int id : ids) {
    if (id < 1 || id > kCheckCount) throw DomainError("verify: unknown check id");
  }
  Shared sh(cfg);
  VerifyReport rep;
  rep.config = cfg;
  rep.checks.resize(ids.size());
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, unsigned(ids.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < ids.size();) {
      rep.checks[k] = run_one(sh, ids[k]);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rep;
}

}  // namespace rlp
