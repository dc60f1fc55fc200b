#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rlp/error.hpp"
#include "rlp/sde.hpp"

using namespace rlp;
using boost::math::quadrature::gauss_kronrod;

TEST_SUITE("sde") {

TEST_CASE("noise-free path bounces once at t = 1 with speed c") {
  Stream rng(1, task_id("test/sde"));
  IntegrateOptions opt;
  opt.noise_scale = 0.0;
  opt.record_path = true;
  const auto p = integrate(rng, Elasticity::of(0.5), 1.0, -1.0, 1e-3, 3.0, opt);
  REQUIRE(p.bounce_events.size() == 1);
  CHECK(p.bounce_events[0].time == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p.bounce_events[0].v_in == doctest::Approx(-1.0));
  CHECK(p.bounce_events[0].v_out == doctest::Approx(0.5));
  CHECK(p.t_end == doctest::Approx(3.0));
  CHECK(p.positions.back() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p.times.size() == p.positions.size());
  CHECK_FALSE(p.accumulation_reached);
  const auto fa = extract_first_arch(p);
  REQUIRE(fa.has_value());
  CHECK(fa->v1 == doctest::Approx(0.5));
}

TEST_CASE("domain errors") {
  Stream rng(2, task_id("test/sde"));
  const auto e = Elasticity::of(0.5);
  CHECK_THROWS_AS(integrate(rng, e, -1.0, 1.0, 1e-3, 1.0), DomainError);
  CHECK_THROWS_AS(integrate(rng, e, 0.0, 0.0, 1e-3, 1.0), DomainError);
  CHECK_THROWS_AS(integrate(rng, e, 0.0, 1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(integrate(rng, e, 0.0, 1.0, 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(first_arch_coupled(rng, e, 0.0, 1.0, 1e-3, {0}, 1.0), DomainError);
}

TEST_CASE("coupled factor 1 reproduces integrate on the same stream") {
  const auto e = Elasticity::of(0.7);
  for (int run = 0; run < 20; ++run) {
    Stream a(3, task_id("test/sde"), run), b(3, task_id("test/sde"), run);
    IntegrateOptions opt;
    opt.max_bounces = 1;
    const auto p = integrate(a, e, 0.0, 1.0, 1e-3, 5.0, opt);
    const auto c = first_arch_coupled(b, e, 0.0, 1.0, 1e-3, {1}, 5.0);
    const auto fa = extract_first_arch(p);
    REQUIRE(fa.has_value() == c[0].has_value());
    if (fa) {
      CHECK(fa->zeta1 == c[0]->zeta1);
      CHECK(fa->v1 == c[0]->v1);
    }
  }
}

TEST_CASE("bounce events respect the restitution rule") {
  Stream rng(4, task_id("test/sde"));
  const auto p = integrate(rng, Elasticity::of(0.8), 0.1, -1.0, 1e-4, 20.0);
  CHECK(p.bounce_events.size() > 0);
  double last = 0.0;
  for (const auto& ev : p.bounce_events) {
    CHECK(ev.v_in <= 0.0);
    CHECK(ev.v_out == doctest::Approx(-0.8 * ev.v_in));
    CHECK(ev.time >= last);
    last = ev.time;
  }
}

TEST_CASE("first-return time distribution matches the joint density") {
  // P(zeta1 <= t) from the double integral of the joint density.
  auto inner = [](double s) {
    auto f = [s](double u) { return joint_density(s, u); };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                                                10, 1e-10);
  };
  auto cdf = [&](double t) { return gauss_kronrod<double, 61>::integrate(inner, 0.0, t, 10, 1e-9); };
  const auto e = Elasticity::of(1.0);
  const int n = 2000;
  const std::vector<double> ts{0.25, 1.0, 4.0};
  std::vector<double> hits(ts.size(), 0.0);
  for (int run = 0; run < n; ++run) {
    Stream rng(5, task_id("test/sde/first"), run);
    const auto c = first_arch_coupled(rng, e, 0.0, 1.0, 1e-4, {1}, ts.back());
    if (!c[0]) continue;
    for (std::size_t k = 0; k < ts.size(); ++k) hits[k] += c[0]->zeta1 <= ts[k];
  }
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double p = cdf(ts[k]);
    const double se = std::sqrt(p * (1 - p) / n);
    // 4 SE of noise plus a small allowance for the discrete bounce detection.
    CHECK(std::abs(hits[k] / n - p) < 4 * se + 0.01);
  }
}

TEST_CASE("CSV layout") {
  Stream rng(6, task_id("test/sde"));
  IntegrateOptions opt;
  opt.record_path = true;
  const auto p = integrate(rng, Elasticity::of(0.5), 0.0, 1.0, 0.1, 0.35, opt);
  std::ostringstream b, q;
  write_bounce_csv(b, p);
  write_path_csv(q, p);
  CHECK(b.str().rfind("t,v_in,v_out\n", 0) == 0);
  CHECK(q.str().rfind("t,X,V\n0,0,1\n", 0) == 0);
  CHECK(p.times.size() == 5);
}

}
