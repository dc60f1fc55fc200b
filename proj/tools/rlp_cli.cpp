#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlp/rlp.h"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Accepts a positive number or "critical".
double parse_c(const std::string& s) {
  if (s == "critical" || s == "crit") return rlp_critical_elasticity();
  std::size_t used = 0;
  double c = 0.0;
  try {
    c = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(c) || !(c > 0.0)) {
    throw UsageError("--c must be a positive number or 'critical', got '" + s + "'");
  }
  return c;
}

void check(rlp_status s) {
  if (s == RLP_OK) return;
  const std::string msg = std::string(rlp_status_string(s)) + ": " + rlp_last_error();
  if (s == RLP_ERR_DOMAIN) throw UsageError(msg);
  throw RunError(msg);
}

struct Common {
  std::uint64_t seed = 1;
  std::string c;
  std::string out;
  std::string format;
};

void add_common(CLI::App* cmd, Common& o, const std::string& c_default,
                const std::vector<std::string>& formats) {
  o.c = c_default;
  o.format = formats.front();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--c", o.c, "Elasticity coefficient, or 'critical'")->capture_default_str();
  cmd->add_option("--out,-o", o.out,
                  "Output file ('-' for stdout); default $RLP_OUTPUT_DIR/<command>.<format> "
                  "when the variable is set, else stdout");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
}

// Explicit --out, else the default directory from the environment, else stdout.
std::string output_path(const Common& o, const std::string& command) {
  if (!o.out.empty()) return o.out;
  if (const char* dir = std::getenv("RLP_OUTPUT_DIR"); dir && *dir) {
    std::string d(dir);
    if (d.back() != '/') d += '/';
    return d + command + "." + o.format;
  }
  return "-";
}

const char* path_arg(const std::string& p) { return p == "-" ? nullptr : p.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflected Langevin process: exact arch sampling, bounce skeletons, "
               "Euler oracle, renewal quantities, entrance law and acceptance checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rlp_version()));

  // arch
  Common arch_o;
  std::uint64_t arch_n = 1000;
  auto* arch = app.add_subcommand("arch", "Normalized arches as CSV (duration, log_step)");
  add_common(arch, arch_o, "1", {"csv"});
  arch->add_option("--n", arch_n, "Number of arches")->capture_default_str();

  // skeleton
  Common sk_o;
  std::uint64_t sk_n = 2000;
  double sk_u0 = 1.0;
  std::string sk_report;
  auto* skel = app.add_subcommand(
      "skeleton", "Bounce skeleton CSV (n, zeta_n, S_n) and accumulation report");
  add_common(skel, sk_o, "0.5", {"csv", "json"});
  skel->add_option("--n", sk_n, "Number of arches")->capture_default_str();
  skel->add_option("--u0", sk_u0, "Initial outgoing speed")->capture_default_str();
  skel->add_option("--report", sk_report,
                   "Write the accumulation report as JSON here (csv format; default stderr text)");

  // sde
  Common sde_o;
  rlp_sde_options sde_opt = rlp_sde_default_options();
  std::string sde_path_out;
  auto* sde = app.add_subcommand("sde", "Euler oracle bounce events as CSV (t, v_in, v_out)");
  add_common(sde, sde_o, "1", {"csv"});
  sde->add_option("--x0", sde_opt.x0, "Initial position")->capture_default_str();
  sde->add_option("--u0", sde_opt.u0, "Initial velocity")->capture_default_str();
  sde->add_option("--dt", sde_opt.dt, "Step size")->capture_default_str();
  sde->add_option("--t-max", sde_opt.t_max, "Time horizon")->capture_default_str();
  sde->add_option("--max-bounces", sde_opt.max_bounces, "Stop after this many bounces (0: never)")
      ->capture_default_str();
  sde->add_option("--path-out", sde_path_out, "Also write the (t, X, V) grid path as CSV here");

  // renewal
  Common ren_o;
  rlp_renewal_options ren_opt = rlp_renewal_default_options();
  auto* ren = app.add_subcommand(
      "renewal", "Renewal function table, m sample and identity checks as JSON");
  add_common(ren, ren_o, "critical", {"json"});
  ren->add_option("--ladder-pool", ren_opt.ladder_pool, "Ladder heights behind m")
      ->capture_default_str();
  ren->add_option("--m-samples", ren_opt.m_samples, "Draws from m to emit")->capture_default_str();
  ren->add_option("--h-paths", ren_opt.h_paths, "Descending ladder paths behind h")
      ->capture_default_str();
  ren->add_option("--h-xmax", ren_opt.h_xmax, "Upper end of the h grid")->capture_default_str();
  ren->add_option("--h-step", ren_opt.h_step, "Spacing of the h grid")->capture_default_str();
  ren->add_option("--check-size", ren_opt.check_size, "Sample size of the identity checks")
      ->capture_default_str();

  // entrance
  Common ent_o;
  double ent_v = 1.0;
  std::uint64_t ent_n = 100, ent_K = 1000, ent_N = 64;
  std::string ent_mode = "backward";
  auto* ent = app.add_subcommand(
      "entrance", "Entrance-law samples as CSV (v, Y, tau_v, tau_tail_bound)");
  add_common(ent, ent_o, "0.5", {"csv"});
  ent->add_option("--v", ent_v, "Speed level")->capture_default_str();
  ent->add_option("--n", ent_n, "Number of samples")->capture_default_str();
  ent->add_option("--K", ent_K, "Back depth of the stationary window")->capture_default_str();
  ent->add_option("--N", ent_N, "Forward arches of the stationary window")->capture_default_str();
  ent->add_option("--mode", ent_mode, "Sampler mode")
      ->check(CLI::IsMember({"backward", "forward-only"}))
      ->capture_default_str();

  // verify
  Common ver_o;
  bool ver_quick = false;
  unsigned ver_threads = 0;
  std::vector<int> ver_only;
  auto* ver = app.add_subcommand("verify", "Run the acceptance checks and write a JSON report");
  add_common(ver, ver_o, "0.5", {"json"});
  ver->add_flag("--quick", ver_quick, "Sample sizes / 10 and tolerances x 2");
  ver->add_option("--threads", ver_threads, "Worker threads (0: all cores)")->capture_default_str();
  ver->add_option("--only", ver_only, "Run only these check ids")->check(CLI::Range(1, 15));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (arch->parsed()) {
      const double c = parse_c(arch_o.c);
      check(rlp_arch_write_csv(arch_o.seed, c, arch_n, path_arg(output_path(arch_o, "arch"))));
      return 0;
    }
    if (skel->parsed()) {
      const double c = parse_c(sk_o.c);
      rlp_skeleton* sk = nullptr;
      check(rlp_skeleton_new(sk_o.seed, c, sk_u0, sk_n, &sk));
      std::unique_ptr<rlp_skeleton, void (*)(rlp_skeleton*)> hold(sk, rlp_skeleton_free);
      rlp_accumulation acc{};
      check(rlp_skeleton_accumulation(sk, &acc));
      nlohmann::ordered_json rep;
      rep["schema"] = 1;
      rep["seed"] = sk_o.seed;
      rep["c"] = c;
      rep["n"] = acc.n;
      rep["log_zeta_n"] = acc.log_zeta_n;
      rep["tail_ratio"] = acc.tail_ratio;
      rep["log_growth"] = acc.log_growth;
      rep["verdict"] = rlp_verdict_string(acc.verdict);
      const std::string out = output_path(sk_o, "skeleton");
      if (sk_o.format == "json") {
        const std::string text = rep.dump(2) + "\n";
        if (out == "-") {
          std::cout << text;
        } else {
          std::ofstream os(out);
          if (!(os << text)) throw RunError("cannot write " + out);
        }
        return 0;
      }
      check(rlp_skeleton_write_csv(sk, path_arg(out)));
      if (!sk_report.empty()) {
        std::ofstream os(sk_report);
        if (!(os << rep.dump(2) << "\n")) throw RunError("cannot write " + sk_report);
      } else {
        std::cerr << "verdict " << rlp_verdict_string(acc.verdict) << "  n " << acc.n
                  << "  tail_ratio " << acc.tail_ratio << "  log_growth " << acc.log_growth
                  << "\n";
      }
      return 0;
    }
    if (sde->parsed()) {
      const double c = parse_c(sde_o.c);
      sde_opt.record_path = sde_path_out.empty() ? 0 : 1;
      rlp_sde_path* p = nullptr;
      check(rlp_sde_new(sde_o.seed, c, &sde_opt, &p));
      std::unique_ptr<rlp_sde_path, void (*)(rlp_sde_path*)> hold(p, rlp_sde_free);
      check(rlp_sde_write_bounces(p, path_arg(output_path(sde_o, "sde"))));
      if (!sde_path_out.empty()) check(rlp_sde_write_path(p, path_arg(sde_path_out)));
      int acc = 0;
      check(rlp_sde_accumulated(p, &acc));
      if (acc) std::cerr << "integration stopped: state reached (0, 0)\n";
      return 0;
    }
    if (ren->parsed()) {
      const double c = parse_c(ren_o.c);
      check(rlp_renewal_write_json(ren_o.seed, c, &ren_opt, path_arg(output_path(ren_o, "renewal"))));
      return 0;
    }
    if (ent->parsed()) {
      const double c = parse_c(ent_o.c);
      const rlp_entrance_mode mode =
          ent_mode == "backward" ? RLP_ENTRANCE_BACKWARD : RLP_ENTRANCE_FORWARD_ONLY;
      check(rlp_entrance_write_csv(ent_o.seed, c, ent_v, ent_n, ent_K, ent_N, mode,
                                   path_arg(output_path(ent_o, "entrance"))));
      return 0;
    }
    if (ver->parsed()) {
      rlp_verify_options opt = rlp_verify_default_options();
      opt.seed = ver_o.seed;
      opt.c = parse_c(ver_o.c);
      opt.quick = ver_quick ? 1 : 0;
      opt.threads = ver_threads;
      opt.only = ver_only.empty() ? nullptr : ver_only.data();
      opt.only_count = ver_only.size();
      rlp_report* rep = nullptr;
      check(rlp_verify_run(&opt, &rep));
      std::unique_ptr<rlp_report, void (*)(rlp_report*)> hold(rep, rlp_report_free);
      check(rlp_report_write(rep, path_arg(output_path(ver_o, "verify"))));
      const std::size_t n = rlp_report_check_count(rep);
      for (std::size_t i = 0; i < n; ++i) {
        rlp_check_info ci{};
        check(rlp_report_check(rep, i, &ci));
        if (ci.pass) continue;
        std::cerr << "check " << ci.id << " failed (" << ci.anchor << "): statistic "
                  << ci.statistic << ", required " << ci.comparison << ' ' << ci.threshold;
        if (*ci.error) std::cerr << ", error: " << ci.error;
        std::cerr << "\n";
      }
      return rlp_report_all_pass(rep) ? 0 : kExitFail;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
