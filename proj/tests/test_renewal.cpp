#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "rlp/error.hpp"
#include "rlp/renewal.hpp"

using namespace rlp;

namespace {

std::vector<double> uniform_grid(double x_max, double step) {
  std::vector<double> g;
  for (int j = 0; j * step <= x_max + 1e-12; ++j) g.push_back(j * step);
  return g;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Spitzer: E T+ = exp(sum_n P(S_n <= 0) / n); Wald gives E H1 = mu E T+.
double gaussian_mu_H(double mu) {
  double s = 0.0;
  for (int n = 1; n < 200000; ++n) {
    const double t = normal_cdf(-mu * std::sqrt(double(n))) / n;
    s += t;
    if (t < 1e-18) break;
  }
  return mu * std::exp(s);
}

}  // namespace

TEST_SUITE("renewal") {

TEST_CASE("Gaussian step law") {
  GaussianStep g(0.5, 2.0);
  CHECK(g.cdf(0.5) == doctest::Approx(0.5));
  CHECK(g.density(0.5) == doctest::Approx(1.0 / (2.0 * std::sqrt(2 * std::numbers::pi))));
  CHECK(g.survival(4.5) == doctest::Approx(1.0 - normal_cdf(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(GaussianStep(0.0, 0.0), DomainError);
  LangevinStep l(Elasticity::of(1.0));
  CHECK(l.variance() == doctest::Approx(4.0 * std::numbers::pi * std::numbers::pi / 9.0));
}

TEST_CASE("ladders are strict records") {
  Stream rng(1, task_id("test/renewal"));
  GaussianStep g(0.0, 1.0);
  const auto up = ascending_ladder(rng, g, 20);
  const auto down = descending_ladder(rng, g, 20);
  REQUIRE(up.heights.size() == 21);
  for (std::size_t k = 1; k < 21; ++k) {
    CHECK(up.heights[k] > up.heights[k - 1]);
    CHECK(up.epochs[k] > up.epochs[k - 1]);
    CHECK(down.heights[k] < down.heights[k - 1]);
  }
  PointMassStep neg(-1.0);
  CHECK_THROWS_AS(ascending_ladder(rng, neg, 1, 100), LadderBudgetExceeded);
  CHECK_FALSE(first_ladder_step(rng, neg, true, 100).has_value());
  // Heights are reported as magnitudes in both directions.
  CHECK(first_ladder_step(rng, neg, false, 100)->height == 1.0);
}

TEST_CASE("mean ladder height of the driftless Gaussian walk is 1/sqrt 2") {
  Stream rng(2, task_id("test/renewal"));
  GaussianStep g(0.0, 1.0);
  const auto m = estimate_mu_H(rng, g, 100000, 1'000'000, 0.01);
  CHECK(std::abs(m.mean - 1.0 / std::sqrt(2.0)) < 4.0 * m.se);
}

TEST_CASE("mean ladder height with drift against Spitzer's series") {
  Stream rng(3, task_id("test/renewal"));
  for (double mu : {0.3, 1.0}) {
    GaussianStep g(mu, 1.0);
    const auto m = estimate_mu_H(rng, g, 50000);
    CHECK(std::abs(m.mean - gaussian_mu_H(mu)) < 4.0 * m.se);
  }
}

TEST_CASE("no-return probability equals mu / mu_H") {
  // P(S_n > 0 for all n >= 1) = mu / E H1 for a positive-drift walk.
  const double mu = 0.5;
  GaussianStep g(mu, 1.0);
  Stream rng(4, task_id("test/renewal"));
  const int n = 20000;
  int escaped = 0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    bool ok = true;
    for (int k = 0; k < 400 && s < 40.0; ++k) {
      s += g.sample(rng);
      if (s <= 0.0) {
        ok = false;
        break;
      }
    }
    escaped += ok;
  }
  const double p = mu / gaussian_mu_H(mu);
  CHECK(std::abs(double(escaped) / n - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("overshoot law m") {
  LadderPool pool;
  pool.heights = {1.0, 1.0, 2.0, 4.0};
  OvershootLaw m(pool);
  CHECK(m.mu_H().mean == doctest::Approx(2.0));
  CHECK(m.tail(1.0) == doctest::Approx(0.5));
  CHECK(m.tail_inclusive(1.0) == doctest::Approx(1.0));
  // cdf(y) = E min(H, y) / E H
  CHECK(m.cdf(1.5) == doctest::Approx((1 + 1 + 1.5 + 1.5) / 4.0 / 2.0));
  CHECK(m.cdf(10.0) == doctest::Approx(1.0));
  CHECK(m.cdf(0.0) == 0.0);
  Stream rng(5, task_id("test/renewal"));
  std::vector<double> x(40000);
  for (auto& v : x) v = sample_overshoot_m(rng, m);
  CHECK(ks_one_sample(EmpiricalSample(x), [&](double y) { return m.cdf(y); }).p_value > 0.001);
  CHECK_THROWS_AS(OvershootLaw(LadderPool{}), DomainError);
}

TEST_CASE("renewal function of the driftless Gaussian walk") {
  Stream rng(6, task_id("test/renewal"));
  GaussianStep g(0.0, 1.0);
  const auto h = renewal_function_h(rng, g, uniform_grid(12.0, 0.1), 4000, 1'000'000);
  CHECK(h.values[0] == doctest::Approx(1.0));
  CHECK(h.inv_step == doctest::Approx(10.0));
  CHECK(h.mean_descent == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.03));
  // Renewal theorem: slope 1 / E|D1| far from 0.
  CHECK((h(12.0) - h(8.0)) / 4.0 == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
  for (std::size_t j = 1; j < h.values.size(); ++j) CHECK(h.values[j] >= h.values[j - 1]);
  CHECK(h(-1.0) == 0.0);
  CHECK(h(14.0) == doctest::Approx(h.values.back() + 2.0 * h.tail_slope));
  bool trunc = false;
  CHECK(h.clamped(14.0, &trunc) == h.values.back());
  CHECK(trunc);
  CHECK_THROWS_AS(renewal_function_h(rng, GaussianStep(1.0, 1.0), {0.0, 1.0}, 10), DomainError);
  CHECK_THROWS_AS(renewal_function_h(rng, g, {0.5, 1.0}, 10), DomainError);

  SUBCASE("h is harmonic for the walk killed below 0") {
    for (double x : {0.0, 1.0, 3.0}) {
      const auto hb = hbar(rng, g, h, x, 200000);
      CHECK(std::abs(hb.value - h(x)) < 4.0 * hb.se + 4.0 * h.se_at(x) + 0.01);
    }
  }

  SUBCASE("HChain stays above 0 and both proposals agree") {
    HChain chain(g, h);
    double s = 0.0;
    for (int i = 0; i < 2000; ++i) {
      s = chain.step(rng, s);
      CHECK(s >= 0.0);
      if (s > 8.0) s = 0.0;
    }
    CHECK(chain.accepted() == 2000);
    CHECK(chain.proposals() >= chain.accepted());

    EnsembleConfig cfg;
    cfg.n_steps = 30;
    cfg.n_particles = 20000;
    cfg.proposal = Proposal::Plain;
    const auto plain = conditioned_walk_ensemble(rng, g, h, 1.0, 0.0, BarrierRange::FromZero, cfg);
    cfg.proposal = Proposal::HTransform;
    const auto ht = conditioned_walk_ensemble(rng, g, h, 1.0, 0.0, BarrierRange::FromZero, cfg);
    for (double lvl : {0.5, 1.0}) {
      const auto [p1, se1] = plain.prob_min_at_least(lvl);
      const auto [p2, se2] = ht.prob_min_at_least(lvl);
      CHECK(std::abs(p1 - p2) < 4.0 * std::hypot(se1, se2));
    }
    // Plain weights estimate the normalizer h(x - a).
    CHECK(plain.mean_weight == doctest::Approx(h(1.0)).epsilon(0.05));
    CHECK(std::isnan(ht.mean_weight));
    for (double m : ht.running_min) CHECK(m >= 0.0);
  }

  SUBCASE("nu has unit mass") {
    const double mu_H = 1.0 / std::sqrt(2.0);
    NuSampler nu(g, h, mu_H, 10.0, 0.99);
    CHECK(nu.mass() == doctest::Approx(1.0).epsilon(0.03));
    CHECK(nu.captured() > 0.99);
    const auto [x, y] = nu.sample(rng);
    CHECK(x >= 0.0);
    CHECK(y >= 0.0);
    CHECK(x + y <= 10.0);
    CHECK(nu_density(-1.0, 1.0, g, h, mu_H) == 0.0);
  }
}

TEST_CASE("duality is skipped for a degenerate law") {
  Stream rng(7, task_id("test/renewal"));
  PointMassStep p(0.0);
  RenewalFunction h;
  h.grid = {0.0, 1.0};
  h.values = {1.0, 1.0};
  h.se = {0.0, 0.0};
  LadderPool pool;
  pool.heights = {1.0};
  const auto r = duality_check(rng, p, h, OvershootLaw(pool), 100, 10);
  CHECK(r.skipped);
  CHECK(r.status.rfind("skipped", 0) == 0);
}

TEST_CASE("conditioned walk by rejection and escape level") {
  Stream rng(8, task_id("test/renewal"));
  GaussianStep g(1.0, 1.0);
  int kept = 0;
  for (int i = 0; i < 200; ++i) {
    if (auto p = conditioned_walk_rejection(rng, g, 0.5, 20, 5.0)) {
      ++kept;
      CHECK(p->size() == 21);
      for (std::size_t k = 1; k < p->size(); ++k) CHECK((*p)[k] > 0.0);
      CHECK(p->back() >= 5.0);
    }
  }
  CHECK(kept > 0);
  const auto lvl = choose_escape_level(rng, g, {1.0, 2.0, 4.0, 8.0, 16.0}, 100000);
  CHECK(lvl.ruin_upper < 1e-4);
  CHECK(lvl.n_aux == 100000);
  CHECK_THROWS_AS(conditioned_walk_rejection(rng, GaussianStep(-1.0, 1.0), 1.0, 5, 1.0),
                  DomainError);
}

TEST_CASE("CSV writers") {
  RenewalFunction h;
  h.grid = {0.0, 0.5};
  h.values = {1.0, 1.5};
  h.se = {0.0, 0.25};
  std::ostringstream a, b;
  write_h_csv(a, h);
  CHECK(a.str() == "x,h,SE\n0,1,0\n0.5,1.5,0.25\n");
  write_nu_csv(b, {{1.0, 2.0}});
  CHECK(b.str() == "x,y,weight\n1,2,1\n");
}

}
