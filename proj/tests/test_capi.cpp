#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "rlp/rlp.h"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("status strings and errors") {
  CHECK(std::string(rlp_version()) == "0.1.0");
  CHECK(std::string(rlp_status_string(RLP_OK)) == "ok");
  double x = 0.0;
  CHECK(rlp_step_cdf(-1.0, 0.0, &x) == RLP_ERR_DOMAIN);
  CHECK(std::string(rlp_last_error()).size() > 0);
  CHECK(rlp_step_cdf(1.0, 0.0, nullptr) == RLP_ERR_NULL);
  CHECK(rlp_step_quantile(1.0, 1.5, &x) == RLP_ERR_DOMAIN);
  CHECK(rlp_skeleton_new(1, 0.5, 1.0, 10, nullptr) == RLP_ERR_NULL);
  CHECK(rlp_critical_elasticity() == doctest::Approx(0.16303353482158046).epsilon(1e-15));
}

TEST_CASE("step law through the C interface") {
  double f = 0.0, p = 0.0, q = 0.0;
  REQUIRE(rlp_step_cdf(1.0, 1.0, &f) == RLP_OK);
  CHECK(f == doctest::Approx(0.424818554984204022).epsilon(1e-14));
  REQUIRE(rlp_step_density(1.0, 0.0, &p) == RLP_OK);
  CHECK(p == doctest::Approx(3.0 / (4.0 * M_PI)));
  REQUIRE(rlp_step_quantile(1.0, f, &q) == RLP_OK);
  CHECK(q == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("skeleton handle") {
  rlp_skeleton* sk = nullptr;
  REQUIRE(rlp_skeleton_new(3, 0.05, 1.0, 2000, &sk) == RLP_OK);
  uint64_t n = 0;
  CHECK(rlp_skeleton_size(sk, &n) == RLP_OK);
  CHECK(n == 2001);
  rlp_accumulation a;
  REQUIRE(rlp_skeleton_accumulation(sk, &a) == RLP_OK);
  CHECK(a.n == 2000);
  CHECK(a.verdict == RLP_CONVERGENT);
  CHECK(std::string(rlp_verdict_string(a.verdict)) == "Convergent");
  const std::string path = "capi_skeleton.csv";
  REQUIRE(rlp_skeleton_write_csv(sk, path.c_str()) == RLP_OK);
  const auto text = slurp(path);
  CHECK(text.rfind("n,zeta_n,S_n\n0,0,0\n", 0) == 0);
  std::remove(path.c_str());
  CHECK(rlp_skeleton_write_csv(sk, "/nonexistent/dir/x.csv") == RLP_ERR_IO);
  rlp_skeleton_free(sk);
  rlp_skeleton_free(nullptr);

  rlp_skeleton* small = nullptr;
  REQUIRE(rlp_skeleton_new(3, 0.5, 1.0, 50, &small) == RLP_OK);
  CHECK(rlp_skeleton_accumulation(small, &a) == RLP_ERR_DOMAIN);
  rlp_skeleton_free(small);
}

TEST_CASE("sde handle") {
  rlp_sde_options o = rlp_sde_default_options();
  o.x0 = 0.0;
  o.u0 = 1.0;
  o.dt = 1e-3;
  o.t_max = 2.0;
  o.record_path = 1;
  rlp_sde_path* p = nullptr;
  REQUIRE(rlp_sde_new(1, 0.5, &o, &p) == RLP_OK);
  uint64_t b = 0;
  CHECK(rlp_sde_bounce_count(p, &b) == RLP_OK);
  int acc = -1;
  CHECK(rlp_sde_accumulated(p, &acc) == RLP_OK);
  CHECK(acc == 0);
  const std::string path = "capi_path.csv";
  REQUIRE(rlp_sde_write_path(p, path.c_str()) == RLP_OK);
  CHECK(slurp(path).rfind("t,X,V\n", 0) == 0);
  std::remove(path.c_str());
  rlp_sde_free(p);
  o.dt = 0.0;
  CHECK(rlp_sde_new(1, 0.5, &o, &p) == RLP_ERR_DOMAIN);
}

TEST_CASE("arch CSV is reproducible") {
  REQUIRE(rlp_arch_write_csv(5, 0.5, 20, "capi_a.csv") == RLP_OK);
  REQUIRE(rlp_arch_write_csv(5, 0.5, 20, "capi_b.csv") == RLP_OK);
  const auto a = slurp("capi_a.csv");
  CHECK(a == slurp("capi_b.csv"));
  CHECK(a.rfind("duration,log_step\n", 0) == 0);
  std::remove("capi_a.csv");
  std::remove("capi_b.csv");
}

TEST_CASE("renewal JSON and entrance CSV") {
  rlp_renewal_options o = rlp_renewal_default_options();
  o.ladder_pool = 2000;
  o.m_samples = 10;
  o.check_size = 2000;
  REQUIRE(rlp_renewal_write_json(1, 0.5, &o, "capi_renewal.json") == RLP_OK);
  const auto j = slurp("capi_renewal.json");
  CHECK(j.find("no_return_probability") != std::string::npos);
  std::remove("capi_renewal.json");

  REQUIRE(rlp_entrance_write_csv(1, 0.5, 10.0, 5, 20, 8, RLP_ENTRANCE_FORWARD_ONLY,
                                 "capi_entrance.csv") == RLP_OK);
  const auto e = slurp("capi_entrance.csv");
  CHECK(e.rfind("v,Y,tau_v,tau_tail_bound\n", 0) == 0);
  std::remove("capi_entrance.csv");
  CHECK(rlp_entrance_write_csv(1, 0.05, 10.0, 5, 20, 8, RLP_ENTRANCE_BACKWARD, "-") ==
        RLP_ERR_DOMAIN);
}

TEST_CASE("verify through the C interface") {
  rlp_verify_options o = rlp_verify_default_options();
  const int only[] = {1};
  o.only = only;
  o.only_count = 1;
  o.quick = 1;
  rlp_report* r = nullptr;
  REQUIRE(rlp_verify_run(&o, &r) == RLP_OK);
  REQUIRE(rlp_report_check_count(r) == 1);
  rlp_check_info c;
  REQUIRE(rlp_report_check(r, 0, &c) == RLP_OK);
  CHECK(c.id == 1);
  CHECK(c.pass == 1);
  CHECK(std::string(c.comparison) == "<=");
  CHECK(rlp_report_all_pass(r) == 1);
  CHECK(std::string(rlp_report_json(r)).find("\"schema\": 1") != std::string::npos);
  CHECK(rlp_report_check(r, 5, &c) == RLP_ERR_DOMAIN);
  rlp_report_free(r);

  const int bad[] = {99};
  o.only = bad;
  CHECK(rlp_verify_run(&o, &r) == RLP_ERR_DOMAIN);
  o.only = only;
  o.c = 0.1;
  CHECK(rlp_verify_run(&o, &r) == RLP_ERR_DOMAIN);
}
