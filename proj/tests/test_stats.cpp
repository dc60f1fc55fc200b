#include <doctest.h>

#include <cmath>
#include <vector>

#include "rlp/error.hpp"
#include "rlp/random.hpp"
#include "rlp/stats.hpp"

using namespace rlp;

TEST_SUITE("stats") {

TEST_CASE("Kolmogorov survival against reference values") {
  // scipy.special.kolmogorov
  CHECK(kolmogorov_survival(1.0) == doctest::Approx(0.26999967167735456).epsilon(1e-12));
  CHECK(kolmogorov_survival(1.358) == doctest::Approx(0.05002679733444698).epsilon(1e-12));
  CHECK(kolmogorov_survival(0.5) == doctest::Approx(0.9639452436648751).epsilon(1e-12));
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(0.2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ks_critical_value(100.0, 0.05) == doctest::Approx(0.1358).epsilon(1e-3));
  CHECK_THROWS_AS(ks_critical_value(0.0, 0.05), DomainError);
}

TEST_CASE("weighted sample basics") {
  EmpiricalSample s({3.0, 1.0, 2.0}, {1.0, 1.0, 2.0});
  CHECK(s.weighted());
  CHECK(s.weight(2) == doctest::Approx(0.5));
  CHECK(s.ess() == doctest::Approx(1.0 / (0.25 * 0.25 * 2 + 0.25)));
  CHECK(s.mean() == doctest::Approx(0.25 * 3 + 0.25 * 1 + 0.5 * 2));
  CHECK(s.ecdf(0.5) == 0.0);
  CHECK(s.ecdf(1.0) == doctest::Approx(0.25));
  CHECK(s.ecdf(2.5) == doctest::Approx(0.75));
  CHECK(s.ecdf(3.0) == doctest::Approx(1.0));
  EmpiricalSample u({1.0, 2.0, 3.0, 4.0});
  CHECK(u.ess() == 4.0);
  CHECK(u.ecdf(2.0) == doctest::Approx(0.5));
}

TEST_CASE("KS tests accept the true law and reject a shifted one") {
  Stream rng(1, task_id("test/ks"));
  std::vector<double> a(20000), b(20000), c(20000);
  for (auto& x : a) x = rng.uniform();
  for (auto& x : b) x = rng.uniform();
  for (auto& x : c) x = 0.03 + rng.uniform();
  auto unif = [](double x) { return x < 0 ? 0.0 : x > 1 ? 1.0 : x; };
  const auto one = ks_one_sample(EmpiricalSample(a), unif);
  CHECK(one.p_value > 0.001);
  CHECK(one.n_eff == 20000.0);
  CHECK(ks_two_sample(EmpiricalSample(a), EmpiricalSample(b)).p_value > 0.001);
  const auto shifted = ks_two_sample(EmpiricalSample(a), EmpiricalSample(c));
  CHECK(shifted.statistic == doctest::Approx(0.03).epsilon(0.3));
  CHECK(shifted.p_value < 1e-6);
  CHECK_THROWS_AS(ks_one_sample(EmpiricalSample({1.0, 2.0}), unif), DomainError);
}

TEST_CASE("KS statistic of a tiny sample by hand") {
  std::vector<double> x{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
  auto unif = [](double t) { return t < 0 ? 0.0 : t > 1 ? 1.0 : t; };
  // Just below each x_i the ecdf lags F by 0.1.
  CHECK(ks_one_sample(EmpiricalSample(x), unif).statistic == doctest::Approx(0.1));
}

TEST_CASE("chi-square counts") {
  const auto r = chi_square_counts({30, 20, 50}, {0.25, 0.25, 0.5});
  // (30-25)^2/25 + (20-25)^2/25 + 0 = 2 on 2 dof: p = e^{-1}
  CHECK(r.statistic == doctest::Approx(2.0));
  CHECK(r.dof == 2);
  CHECK(r.p_value == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  // Cells below the expected-count floor are pooled.
  // Expected 40, 40, 2, 18: the third cell joins the pool alone.
  const auto p = chi_square_counts({40, 40, 10, 10}, {0.4, 0.4, 0.02, 0.18});
  CHECK(p.dof == 3);
  CHECK(p.statistic == doctest::Approx(32.0 + 64.0 / 18.0));
  CHECK_THROWS_AS(chi_square_counts({1, 2}, {1.0}), DomainError);
}

TEST_CASE("chi-square binned on uniforms") {
  Stream rng(2, task_id("test/chi"));
  std::vector<double> a(10000);
  for (auto& x : a) x = rng.uniform();
  auto unif = [](double t) { return t < 0 ? 0.0 : t > 1 ? 1.0 : t; };
  const auto r = chi_square_binned(EmpiricalSample(a), unif, {0.0, 0.2, 0.4, 0.6, 0.8, 1.0});
  CHECK(r.p_value > 0.001);
  CHECK_THROWS_AS(chi_square_binned(EmpiricalSample(a), unif, {0.5}), DomainError);
}

TEST_CASE("intervals") {
  CHECK(normal_critical(0.95) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  const auto w = wilson_interval(30, 100, 0.95);
  CHECK(w.lo == doctest::Approx(0.21894885294932764).epsilon(1e-12));
  CHECK(w.hi == doctest::Approx(0.39584854633346667).epsilon(1e-12));
  CHECK(wilson_interval(0, 100, 0.99).lo == 0.0);
  const auto m = mean_estimate({1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(m.ci(0.95).contains(2.5));
  CHECK_THROWS_AS(mean_estimate({}), DomainError);
}

TEST_CASE("bootstrap interval covers the mean") {
  Stream rng(3, task_id("test/boot"));
  std::vector<double> x(2000);
  for (auto& v : x) v = rng.normal();
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double t : v) s += t;
    return s / double(v.size());
  };
  const auto ci = bootstrap_ci(EmpiricalSample(x), mean, 0.99, rng, 500);
  CHECK(ci.contains(mean(x)));
  CHECK(ci.hi - ci.lo == doctest::Approx(2 * 2.5758 / std::sqrt(2000.0)).epsilon(0.15));
}

TEST_CASE("streams are reproducible and distinct") {
  Stream a(5, task_id("x"), 1), b(5, task_id("x"), 1), c(5, task_id("x"), 2);
  const double ua = a.uniform();
  CHECK(ua == b.uniform());
  CHECK(ua != c.uniform());
  CHECK(task_id("a") != task_id("b"));
  // FNV-1a of the empty string is the offset basis.
  CHECK(task_id("") == 0xcbf29ce484222325ULL);
}

}
