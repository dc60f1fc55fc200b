#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "rlp/error.hpp"
#include "rlp/skeleton.hpp"
#include "rlp/stats.hpp"

using namespace rlp;

TEST_SUITE("skeleton") {

TEST_CASE("sizes, start and monotone times") {
  Stream rng(1, task_id("test/skeleton"));
  const auto sk = simulate_skeleton(rng, Elasticity::of(0.5), 2.0, 500);
  CHECK(sk.size() == 501);
  CHECK(sk.log_times.size() == 501);
  CHECK(sk.arch_durations.size() == 500);
  CHECK(sk.time(0) == 0.0);
  CHECK(sk.log_velocities[0] == doctest::Approx(std::log(2.0)));
  for (std::size_t n = 1; n < sk.size(); ++n) CHECK(sk.log_times[n] > sk.log_times[n - 1]);
  CHECK_THROWS_AS(simulate_skeleton(rng, Elasticity::of(0.5), 1.0, 0), DomainError);
  CHECK_THROWS_AS(simulate_skeleton(rng, Elasticity::of(0.5), -1.0, 5), DomainError);
}

TEST_CASE("bounce times are Brownian-scaled sums of arch durations") {
  Stream rng(2, task_id("test/skeleton"));
  const auto sk = simulate_skeleton(rng, Elasticity::of(0.3), 1.5, 40);
  double t = 0.0;
  for (std::size_t k = 0; k < 40; ++k) {
    const double u = std::exp(sk.log_velocities[k]);
    t += u * u * sk.arch_durations[k];
    CHECK(sk.time(k + 1) == doctest::Approx(t).epsilon(1e-12));
  }
}

TEST_CASE("log-velocity increments follow the step law") {
  const auto e = Elasticity::of(0.5);
  Stream rng(3, task_id("test/skeleton"));
  const auto sk = simulate_skeleton(rng, e, 1.0, 20000);
  std::vector<double> inc(sk.size() - 1);
  for (std::size_t k = 0; k + 1 < sk.size(); ++k) {
    inc[k] = sk.log_velocities[k + 1] - sk.log_velocities[k];
  }
  const auto ks = ks_one_sample(EmpiricalSample(inc), [&](double w) { return step_cdf(w, e); });
  CHECK(ks.p_value > 0.001);
}

TEST_CASE("same stream gives the same skeleton") {
  Stream a(9, task_id("test/skeleton")), b(9, task_id("test/skeleton"));
  const auto x = simulate_skeleton(a, Elasticity::of(0.5), 1.0, 100);
  const auto y = simulate_skeleton(b, Elasticity::of(0.5), 1.0, 100);
  CHECK(x.log_times == y.log_times);
  CHECK(x.log_velocities == y.log_velocities);
}

TEST_CASE("accumulation verdicts in both regimes") {
  Stream rng(4, task_id("test/skeleton"));
  int conv = 0, div = 0;
  for (int i = 0; i < 20; ++i) {
    const auto a = accumulation_diagnostics(simulate_skeleton(rng, Elasticity::of(0.05), 1.0, 2000));
    conv += a.verdict == Verdict::Convergent;
    const auto b = accumulation_diagnostics(simulate_skeleton(rng, Elasticity::of(0.5), 1.0, 2000));
    div += b.verdict == Verdict::Divergent;
    CHECK(b.n == 2000);
  }
  CHECK(conv >= 19);
  CHECK(div >= 19);
  Stream r2(5, task_id("test/skeleton"));
  CHECK_THROWS_AS(accumulation_diagnostics(simulate_skeleton(r2, Elasticity::of(0.5), 1.0, 99)),
                  DomainError);
  CHECK(std::string(to_string(Verdict::Inconclusive)) == "Inconclusive");
}

TEST_CASE("verdict thresholds on a hand-made skeleton") {
  BounceSkeleton sk;
  sk.log_times.assign(101, 0.0);
  sk.log_velocities.assign(101, 0.0);
  sk.log_times[0] = -std::numeric_limits<double>::infinity();
  CHECK(accumulation_diagnostics(sk).verdict == Verdict::Convergent);
  for (std::size_t n = 1; n <= 100; ++n) sk.log_times[n] = 0.1 * double(n);
  const auto r = accumulation_diagnostics(sk);
  CHECK(r.tail_ratio == doctest::Approx(std::expm1(5.0)));
  CHECK(r.log_growth == doctest::Approx(9.0));
  CHECK(r.verdict == Verdict::Divergent);
  for (std::size_t n = 1; n <= 100; ++n) sk.log_times[n] = 0.02 * double(n);
  CHECK(accumulation_diagnostics(sk).verdict == Verdict::Inconclusive);
}

TEST_CASE("first crossing and NotReached") {
  BounceSkeleton sk;
  sk.log_velocities = {0.0, 0.5, -0.2, 1.3, 2.0};
  sk.log_times = {-std::numeric_limits<double>::infinity(), 0.0, 1.0, 2.0, 3.0};
  const auto c = first_crossing(sk, 1.0);
  CHECK(c.index == 3);
  CHECK(c.overshoot == doctest::Approx(0.3));
  CHECK(c.log_time == 2.0);
  CHECK(first_crossing(sk, -0.1).index == 0);
  try {
    first_crossing(sk, 2.0);
    FAIL("expected NotReached");
  } catch (const NotReached& e) {
    CHECK(e.max_seen() == 2.0);
  }
}

TEST_CASE("simulate until crossing") {
  Stream rng(6, task_id("test/skeleton"));
  const auto sk = simulate_until_crossing(rng, Elasticity::of(0.5), 1.0, 10.0, 100000);
  CHECK(sk.log_velocities.back() > 10.0);
  for (std::size_t n = 0; n + 1 < sk.size(); ++n) CHECK(sk.log_velocities[n] <= 10.0);
  CHECK(first_crossing(sk, 10.0).index == sk.size() - 1);
  CHECK_THROWS_AS(simulate_until_crossing(rng, Elasticity::of(0.05), 1.0, 50.0, 1000), NotReached);
}

TEST_CASE("CSV layout") {
  Stream rng(7, task_id("test/skeleton"));
  const auto sk = simulate_skeleton(rng, Elasticity::of(0.5), 1.0, 3);
  std::ostringstream os;
  write_skeleton_csv(os, sk);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "n,zeta_n,S_n");
  std::getline(is, line);
  CHECK(line == "0,0,0");
  int rows = 1;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 4);
}

}
