#include <doctest.h>

#include <string>

#include <json.hpp>

#include "rlp/error.hpp"
#include "rlp/verify.hpp"

using namespace rlp;

TEST_SUITE("verify") {

TEST_CASE("a subset runs and reports in id order") {
  VerifyConfig cfg;
  cfg.quick = true;
  cfg.only = {7, 1};
  cfg.threads = 2;
  const auto r = run_verify(cfg);
  REQUIRE(r.checks.size() == 2);
  CHECK(r.checks[0].id == 1);
  CHECK(r.checks[1].id == 7);
  for (const auto& c : r.checks) {
    CHECK(c.error.empty());
    CHECK(c.pass);
    CHECK(c.anchor == check_anchor(c.id));
  }
  CHECK(r.all_pass());
}

TEST_CASE("JSON report schema") {
  VerifyConfig cfg;
  cfg.quick = true;
  cfg.only = {1};
  cfg.seed = 42;
  const auto j = nlohmann::json::parse(run_verify(cfg).to_json());
  CHECK(j["schema"] == 1);
  CHECK(j["seed"] == 42);
  CHECK(j["config"]["quick"] == true);
  CHECK(j["config"]["c"] == 0.5);
  CHECK(j["all_pass"] == true);
  const auto& c = j["checks"].at(0);
  CHECK(c["id"] == 1);
  CHECK(c["comparison"] == "<=");
  CHECK(c["pass"] == true);
  CHECK(c["statistic"].get<double>() <= c["threshold"].get<double>());
  CHECK(c["details"].is_object());
  CHECK_FALSE(c.contains("error"));
}

TEST_CASE("report does not depend on the thread count") {
  VerifyConfig a;
  a.quick = true;
  a.only = {1, 4, 7};
  a.threads = 1;
  VerifyConfig b = a;
  b.threads = 3;
  CHECK(run_verify(a).to_json() == run_verify(b).to_json());
  VerifyConfig s = a;
  s.seed = 2;
  CHECK(run_verify(a).to_json() != run_verify(s).to_json());
}

TEST_CASE("invalid configurations") {
  VerifyConfig cfg;
  cfg.c = 0.1;
  CHECK_THROWS_AS(run_verify(cfg), DomainError);
  cfg.c = 0.5;
  cfg.only = {16};
  CHECK_THROWS_AS(run_verify(cfg), DomainError);
  cfg.only = {0};
  CHECK_THROWS_AS(run_verify(cfg), DomainError);
  CHECK_THROWS_AS(check_anchor(0), DomainError);
}

}
