#define RLP_BUILDING_LIBRARY
#include "rlp/rlp.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlp/archlaw.hpp"
#include "rlp/error.hpp"
#include "rlp/format.hpp"
#include "rlp/random.hpp"
#include "rlp/renewal.hpp"
#include "rlp/sde.hpp"
#include "rlp/skeleton.hpp"
#include "rlp/stationary.hpp"
#include "rlp/verify.hpp"

struct rlp_skeleton {
  rlp::BounceSkeleton sk;
};

struct rlp_sde_path {
  rlp::DiscretePath path;
  bool recorded = false;
};

struct rlp_report {
  rlp::VerifyReport report;
  std::string json;
};

namespace {

thread_local std::string g_last_error;

rlp_status fail(rlp_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs f, translating library exceptions into status codes.
template <typename F>
rlp_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return RLP_OK;
  } catch (const rlp::DomainError& e) {
    return fail(RLP_ERR_DOMAIN, e.what());
  } catch (const rlp::InvariantError& e) {
    return fail(RLP_ERR_INVARIANT, e.what());
  } catch (const rlp::NotReached& e) {
    return fail(RLP_ERR_NOT_REACHED, e.what());
  } catch (const rlp::BudgetExceeded& e) {
    return fail(RLP_ERR_BUDGET, e.what());
  } catch (const rlp::DegenerateEnsemble& e) {
    return fail(RLP_ERR_DEGENERATE, e.what());
  } catch (const rlp::TruncationError& e) {
    return fail(RLP_ERR_TRUNCATION, e.what());
  } catch (const rlp::TruncatedShift& e) {
    return fail(RLP_ERR_TRUNCATED_SHIFT, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(RLP_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(RLP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RLP_ERR_INTERNAL, "unknown error");
  }
}

rlp_status null_status(const char* what) {
  return fail(RLP_ERR_NULL, std::string(what) + " is NULL");
}

rlp::Elasticity elasticity(double c) {
  rlp::Elasticity e = rlp::Elasticity::of(c);
  return e.regime == rlp::Regime::Critical ? rlp::Elasticity::critical() : e;
}

rlp::Stream stream(std::uint64_t seed, const char* command) {
  return rlp::Stream(seed, rlp::task_id(std::string("cli/") + command));
}

// Writes through w to path, or to stdout for NULL / "-".
template <typename W>
void write_to(const char* path, W&& w) {
  if (!path || std::string(path) == "-") {
    w(std::cout);
    std::cout.flush();
    if (!std::cout) throw std::ios_base::failure("writing to stdout failed");
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::ios_base::failure(std::string("cannot open ") + path + " for writing");
  w(os);
  os.flush();
  if (!os) throw std::ios_base::failure(std::string("writing ") + path + " failed");
}

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return rlp::fmt17(x);
}

}  // namespace

extern "C" {

const char* rlp_version(void) { return "0.1.0"; }

const char* rlp_status_string(rlp_status s) {
  switch (s) {
    case RLP_OK: return "ok";
    case RLP_ERR_DOMAIN: return "domain error";
    case RLP_ERR_INVARIANT: return "invariant violated";
    case RLP_ERR_NOT_REACHED: return "level not reached";
    case RLP_ERR_BUDGET: return "budget exceeded";
    case RLP_ERR_DEGENERATE: return "degenerate ensemble";
    case RLP_ERR_TRUNCATION: return "truncation error";
    case RLP_ERR_TRUNCATED_SHIFT: return "truncated shift";
    case RLP_ERR_IO: return "i/o error";
    case RLP_ERR_NULL: return "null argument";
    case RLP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* rlp_last_error(void) { return g_last_error.c_str(); }

double rlp_critical_elasticity(void) { return rlp::critical_elasticity(); }

rlp_status rlp_step_density(double c, double w, double* out) {
  if (!out) return null_status("out");
  return guarded([&] { *out = rlp::step_density(w, elasticity(c)); });
}

rlp_status rlp_step_cdf(double c, double w, double* out) {
  if (!out) return null_status("out");
  return guarded([&] { *out = rlp::step_cdf(w, elasticity(c)); });
}

rlp_status rlp_step_quantile(double c, double p, double* out) {
  if (!out) return null_status("out");
  return guarded([&] { *out = rlp::step_quantile(p, elasticity(c)); });
}

rlp_status rlp_arch_write_csv(uint64_t seed, double c, uint64_t n, const char* path) {
  return guarded([&] {
    const rlp::Elasticity e = elasticity(c);
    rlp::Stream rng = stream(seed, "arch");
    write_to(path, [&](std::ostream& os) {
      os << "duration,log_step\n";
      for (uint64_t i = 0; i < n; ++i) {
        const rlp::ArchSample a = rlp::sample_arch(rng, e);
        os << rlp::fmt17(a.duration) << ',' << rlp::fmt17(a.log_step) << '\n';
      }
    });
  });
}

// Skeleton -------------------------------------------------------------------

rlp_status rlp_skeleton_new(uint64_t seed, double c, double u0, uint64_t n, rlp_skeleton** out) {
  if (!out) return null_status("out");
  *out = nullptr;
  return guarded([&] {
    if (!(u0 > 0.0) || !std::isfinite(u0)) throw rlp::DomainError("u0 must be positive");
    rlp::Stream rng = stream(seed, "skeleton");
    auto h = std::make_unique<rlp_skeleton>();
    h->sk = rlp::simulate_skeleton(rng, elasticity(c), u0, n);
    *out = h.release();
  });
}

void rlp_skeleton_free(rlp_skeleton* sk) { delete sk; }

rlp_status rlp_skeleton_size(const rlp_skeleton* sk, uint64_t* out) {
  if (!sk) return null_status("skeleton");
  if (!out) return null_status("out");
  *out = sk->sk.size();
  return RLP_OK;
}

rlp_status rlp_skeleton_accumulation(const rlp_skeleton* sk, rlp_accumulation* out) {
  if (!sk) return null_status("skeleton");
  if (!out) return null_status("out");
  return guarded([&] {
    const rlp::AccumulationReport r = rlp::accumulation_diagnostics(sk->sk);
    out->n = r.n;
    out->log_zeta_n = r.log_zeta_n;
    out->tail_ratio = r.tail_ratio;
    out->log_growth = r.log_growth;
    out->verdict = r.verdict == rlp::Verdict::Convergent  ? RLP_CONVERGENT
                   : r.verdict == rlp::Verdict::Divergent ? RLP_DIVERGENT
                                                          : RLP_INCONCLUSIVE;
  });
}

rlp_status rlp_skeleton_write_csv(const rlp_skeleton* sk, const char* path) {
  if (!sk) return null_status("skeleton");
  return guarded([&] { write_to(path, [&](std::ostream& os) { rlp::write_skeleton_csv(os, sk->sk); }); });
}

const char* rlp_verdict_string(rlp_verdict v) {
  switch (v) {
    case RLP_CONVERGENT: return "Convergent";
    case RLP_DIVERGENT: return "Divergent";
    case RLP_INCONCLUSIVE: return "Inconclusive";
  }
  return "unknown";
}

// SDE ------------------------------------------------------------------------

rlp_sde_options rlp_sde_default_options(void) {
  rlp_sde_options o;
  o.x0 = 0.0;
  o.u0 = 1.0;
  o.dt = 1e-4;
  o.t_max = 10.0;
  o.max_bounces = 0;
  o.record_path = 0;
  return o;
}

rlp_status rlp_sde_new(uint64_t seed, double c, const rlp_sde_options* opt, rlp_sde_path** out) {
  if (!opt) return null_status("options");
  if (!out) return null_status("out");
  *out = nullptr;
  return guarded([&] {
    rlp::IntegrateOptions io;
    io.max_bounces = opt->max_bounces;
    io.record_path = opt->record_path != 0;
    rlp::Stream rng = stream(seed, "sde");
    auto h = std::make_unique<rlp_sde_path>();
    h->path = rlp::integrate(rng, elasticity(c), opt->x0, opt->u0, opt->dt, opt->t_max, io);
    h->recorded = io.record_path;
    *out = h.release();
  });
}

void rlp_sde_free(rlp_sde_path* p) { delete p; }

rlp_status rlp_sde_bounce_count(const rlp_sde_path* p, uint64_t* out) {
  if (!p) return null_status("path");
  if (!out) return null_status("out");
  *out = p->path.bounce_events.size();
  return RLP_OK;
}

rlp_status rlp_sde_accumulated(const rlp_sde_path* p, int* out) {
  if (!p) return null_status("path");
  if (!out) return null_status("out");
  *out = p->path.accumulation_reached ? 1 : 0;
  return RLP_OK;
}

rlp_status rlp_sde_write_bounces(const rlp_sde_path* p, const char* path) {
  if (!p) return null_status("path");
  return guarded([&] { write_to(path, [&](std::ostream& os) { rlp::write_bounce_csv(os, p->path); }); });
}

rlp_status rlp_sde_write_path(const rlp_sde_path* p, const char* path) {
  if (!p) return null_status("path");
  if (!p->recorded) return fail(RLP_ERR_DOMAIN, "path was integrated without record_path");
  return guarded([&] { write_to(path, [&](std::ostream& os) { rlp::write_path_csv(os, p->path); }); });
}

// Renewal --------------------------------------------------------------------

rlp_renewal_options rlp_renewal_default_options(void) {
  rlp_renewal_options o;
  o.ladder_pool = 100000;
  o.m_samples = 1000;
  o.h_paths = 10000;
  o.h_xmax = 24.0;
  o.h_step = 0.1;
  o.check_size = 10000;
  return o;
}

rlp_status rlp_renewal_write_json(uint64_t seed, double c, const rlp_renewal_options* opt,
                                  const char* path) {
  if (!opt) return null_status("options");
  return guarded([&] {
    using nlohmann::ordered_json;
    const rlp::Elasticity e = elasticity(c);
    if (!(opt->h_step > 0.0) || !(opt->h_xmax >= opt->h_step)) {
      throw rlp::DomainError("renewal: need 0 < h_step <= h_xmax");
    }
    if (opt->check_size < 100) throw rlp::DomainError("renewal: check_size must be >= 100");
    rlp::Stream rng = stream(seed, "renewal");
    const rlp::LangevinStep law(e);
    ordered_json j;
    j["schema"] = 1;
    j["seed"] = seed;
    j["c"] = c;
    j["regime"] = rlp::to_string(e.regime);
    j["options"] = {{"ladder_pool", opt->ladder_pool}, {"m_samples", opt->m_samples},
                    {"h_paths", opt->h_paths},         {"h_xmax", opt->h_xmax},
                    {"h_step", opt->h_step},           {"check_size", opt->check_size}};
    std::unique_ptr<rlp::RenewalFunction> h;
    std::unique_ptr<rlp::OvershootLaw> m;
    if (e.regime != rlp::Regime::Supercritical) {
      std::vector<double> grid;
      const auto knots = std::size_t(std::llround(opt->h_xmax / opt->h_step));
      for (std::size_t k = 0; k <= knots; ++k) grid.push_back(double(k) * opt->h_step);
      h = std::make_unique<rlp::RenewalFunction>(
          rlp::renewal_function_h(rng, law, grid, opt->h_paths));
      ordered_json x = ordered_json::array(), v = ordered_json::array(), se = ordered_json::array();
      for (std::size_t k = 0; k < h->grid.size(); ++k) {
        x.push_back(h->grid[k]);
        v.push_back(h->values[k]);
        se.push_back(h->se[k]);
      }
      j["h"] = {{"x", x}, {"h", v}, {"se", se}, {"tail_slope", number(h->tail_slope)},
                {"censored_epochs", h->censored_epochs}};
    }
    if (e.regime != rlp::Regime::Subcritical) {
      m = std::make_unique<rlp::OvershootLaw>(rlp::ladder_height_pool(rng, law, opt->ladder_pool));
      ordered_json sample = ordered_json::array();
      for (uint64_t i = 0; i < opt->m_samples; ++i) sample.push_back(rlp::sample_overshoot_m(rng, *m));
      j["m"] = {{"mu_H", m->mu_H().mean},
                {"mu_H_se", m->mu_H().se},
                {"censored_fraction", m->pool().censored_fraction()},
                {"sample", sample}};
    }
    ordered_json checks = ordered_json::object();
    if (e.regime == rlp::Regime::Supercritical) {
      // P0(S_n > 0 for all n >= 1) = mu / mu_H.
      const rlp::EscapeLevel esc =
          rlp::choose_escape_level(rng, law, {5, 10, 15, 20, 30, 40}, 100000);
      std::uint64_t stay = 0;
      for (uint64_t i = 0; i < opt->check_size; ++i) {
        double s = 0.0;
        for (;;) {
          s += law.sample(rng);
          if (s <= 0.0) break;
          if (s > esc.level) {
            ++stay;
            break;
          }
        }
      }
      checks["no_return_probability"] = double(stay) / double(opt->check_size);
      checks["mu_over_mu_H"] = e.mu / m->mu_H().mean;
    } else if (e.regime == rlp::Regime::Critical) {
      ordered_json harm = ordered_json::array();
      for (double x : {1.0, 2.0, 4.0}) {
        const rlp::HbarEstimate hb = rlp::hbar(rng, law, *h, x, 10 * opt->check_size);
        harm.push_back({{"x", x}, {"h", (*h)(x)}, {"hbar", hb.value}, {"hbar_se", hb.se}});
      }
      checks["harmonicity"] = harm;
      const rlp::DualityReport d =
          rlp::duality_check(rng, law, *h, *m, opt->check_size, opt->check_size);
      checks["duality_ks"] = d.ks;
      const rlp::NuSampler nu(law, *h, m->mu_H().mean);
      checks["nu_mass"] = nu.mass();
    }
    j["checks"] = checks;
    const std::string text = j.dump(2) + "\n";
    write_to(path, [&](std::ostream& os) { os << text; });
  });
}

// Entrance -------------------------------------------------------------------

rlp_status rlp_entrance_write_csv(uint64_t seed, double c, double v, uint64_t n, uint64_t K,
                                  uint64_t N, rlp_entrance_mode mode, const char* path) {
  return guarded([&] {
    const rlp::Elasticity e = elasticity(c);
    if (e.regime == rlp::Regime::Subcritical) {
      throw rlp::DomainError("entrance: c must be at least the critical value");
    }
    if (K < 1) throw rlp::DomainError("entrance: K must be at least 1");
    rlp::Stream rng = stream(seed, "entrance");
    std::unique_ptr<rlp::SupercriticalContext> sc;
    std::unique_ptr<rlp::CriticalContext> cc;
    rlp::EntranceContext ctx;
    ctx.K = K;
    ctx.N = N;
    if (e.regime == rlp::Regime::Critical) {
      cc = std::make_unique<rlp::CriticalContext>(rlp::make_critical_context(rng));
      ctx.critical = cc.get();
    } else {
      sc = std::make_unique<rlp::SupercriticalContext>(rlp::make_supercritical_context(rng, e));
      ctx.super = sc.get();
    }
    const rlp::EntranceMode m =
        mode == RLP_ENTRANCE_FORWARD_ONLY ? rlp::EntranceMode::ForwardOnly : rlp::EntranceMode::Backward;
    std::vector<rlp::EntranceSample> out;
    out.reserve(n);
    for (uint64_t i = 0; i < n; ++i) out.push_back(rlp::sample_entrance(rng, e, ctx, v, m));
    write_to(path, [&](std::ostream& os) { rlp::write_entrance_csv(os, out); });
  });
}

// Verify ---------------------------------------------------------------------

rlp_verify_options rlp_verify_default_options(void) {
  rlp_verify_options o;
  o.seed = 1;
  o.c = 0.5;
  o.quick = 0;
  o.threads = 0;
  o.only = nullptr;
  o.only_count = 0;
  return o;
}

rlp_status rlp_verify_run(const rlp_verify_options* opt, rlp_report** out) {
  if (!opt) return null_status("options");
  if (!out) return null_status("out");
  *out = nullptr;
  if (opt->only_count && !opt->only) return null_status("only");
  return guarded([&] {
    rlp::VerifyConfig cfg;
    cfg.seed = opt->seed;
    cfg.c = opt->c;
    cfg.quick = opt->quick != 0;
    cfg.threads = opt->threads;
    cfg.only.assign(opt->only, opt->only + opt->only_count);
    auto r = std::make_unique<rlp_report>();
    r->report = rlp::run_verify(cfg);
    r->json = r->report.to_json();
    *out = r.release();
  });
}

void rlp_report_free(rlp_report* r) { delete r; }

const char* rlp_report_json(const rlp_report* r) { return r ? r->json.c_str() : nullptr; }

size_t rlp_report_check_count(const rlp_report* r) { return r ? r->report.checks.size() : 0; }

rlp_status rlp_report_check(const rlp_report* r, size_t i, rlp_check_info* out) {
  if (!r) return null_status("report");
  if (!out) return null_status("out");
  if (i >= r->report.checks.size()) return fail(RLP_ERR_DOMAIN, "check index out of range");
  const rlp::CheckResult& c = r->report.checks[i];
  out->id = c.id;
  out->anchor = c.anchor.c_str();
  out->comparison = c.comparison.c_str();
  out->statistic = c.statistic;
  out->threshold = c.threshold;
  out->pass = c.pass ? 1 : 0;
  out->error = c.error.c_str();
  return RLP_OK;
}

int rlp_report_all_pass(const rlp_report* r) { return r && r->report.all_pass() ? 1 : 0; }

rlp_status rlp_report_write(const rlp_report* r, const char* path) {
  if (!r) return null_status("report");
  return guarded([&] { write_to(path, [&](std::ostream& os) { os << r->json; }); });
}

}  // extern "C"
