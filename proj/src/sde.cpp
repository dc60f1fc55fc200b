#include "rlp/sde.hpp"

#include <cmath>

#include "rlp/error.hpp"
#include "rlp/format.hpp"

namespace rlp {

namespace {

constexpr double kStarvation = 1e-12;

// One reflected Euler state advanced by externally supplied increments.
struct EulerState {
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
  double c = 1.0;
  bool starved = false;

  // Advances by one step of length h with velocity increment dv. Returns
  // true and fills ev when a bounce happened inside the step.
  bool step(double h, double dv, BounceEvent& ev) {
    const double v_new = v + dv;
    const double x_new = x + v_new * h;
    bool bounced = false;
    if (x_new < 0.0 || (x_new == 0.0 && v_new < 0.0)) {
      const double theta = x > 0.0 ? x / (x - x_new) : 0.0;
      ev = {t + theta * h, v_new, -c * v_new};
      v = -c * v_new;
      x = v * (1.0 - theta) * h;
      bounced = true;
    } else {
      x = x_new;
      v = v_new;
    }
    t += h;
    if (std::abs(x) < kStarvation && std::abs(v) < kStarvation) starved = true;
    return bounced;
  }
};

void check_args(double x0, double u0, double dt, double t_max) {
  if (!(x0 >= 0.0) || !std::isfinite(x0) || !std::isfinite(u0)) {
    throw DomainError("integrate: need finite x0 >= 0 and finite u0");
  }
  if (x0 == 0.0 && u0 == 0.0) throw DomainError("integrate: (x0, u0) = (0, 0)");
  if (!(dt > 0.0) || !(t_max > 0.0) || dt >= t_max) {
    throw DomainError("integrate: need 0 < dt < t_max");
  }
}

}  // namespace

DiscretePath integrate(Stream& rng, const Elasticity& e, double x0, double u0,
                       double dt, double t_max, const IntegrateOptions& opt) {
  check_args(x0, u0, dt, t_max);
  DiscretePath path;
  path.dt = dt;
  EulerState s{0.0, x0, u0, e.c};
  const double sd = std::sqrt(dt) * opt.noise_scale;
  auto record = [&] {
    if (!opt.record_path) return;
    path.times.push_back(s.t);
    path.positions.push_back(s.x);
    path.velocities.push_back(s.v);
  };
  record();
  const auto steps = static_cast<std::uint64_t>(std::ceil(t_max / dt));
  BounceEvent ev{};
  for (std::uint64_t k = 0; k < steps; ++k) {
    const double dv = opt.noise_scale == 0.0 ? 0.0 : sd * rng.normal();
    if (s.step(dt, dv, ev)) {
      path.bounce_events.push_back(ev);
    }
    record();
    if (s.starved) {
      path.accumulation_reached = true;
      break;
    }
    if (opt.max_bounces && path.bounce_events.size() >= opt.max_bounces) break;
  }
  path.t_end = s.t;
  return path;
}

std::optional<FirstArch> extract_first_arch(const DiscretePath& path) {
  if (path.bounce_events.empty()) return std::nullopt;
  const auto& ev = path.bounce_events.front();
  return FirstArch{ev.time, ev.v_out};
}

std::vector<std::optional<FirstArch>> first_arch_coupled(
    Stream& rng, const Elasticity& e, double x0, double u0, double dt_fine,
    const std::vector<int>& factors, double t_max) {
  check_args(x0, u0, dt_fine, t_max);
  const std::size_t L = factors.size();
  std::vector<EulerState> st(L, EulerState{0.0, x0, u0, e.c});
  std::vector<double> acc(L, 0.0);
  std::vector<std::optional<FirstArch>> out(L);
  std::vector<bool> done(L, false);
  std::size_t remaining = L;
  for (int f : factors) {
    if (f < 1) throw DomainError("first_arch_coupled: factors must be >= 1");
  }
  const double sd = std::sqrt(dt_fine);
  const auto steps = static_cast<std::uint64_t>(std::ceil(t_max / dt_fine));
  BounceEvent ev{};
  for (std::uint64_t k = 1; k <= steps && remaining > 0; ++k) {
    const double dv = sd * rng.normal();
    for (std::size_t l = 0; l < L; ++l) {
      if (done[l]) continue;
      acc[l] += dv;
      if (k % std::uint64_t(factors[l]) != 0) continue;
      const bool b = st[l].step(dt_fine * factors[l], acc[l], ev);
      acc[l] = 0.0;
      if (b) {
        out[l] = FirstArch{ev.time, ev.v_out};
      }
      if (b || st[l].starved) {
        done[l] = true;
        --remaining;
      }
    }
  }
  return out;
}

void write_bounce_csv(std::ostream& os, const DiscretePath& path) {
  os << "t,v_in,v_out\n";
  for (const auto& ev : path.bounce_events) {
    os << fmt17(ev.time) << ',' << fmt17(ev.v_in) << ',' << fmt17(ev.v_out) << '\n';
  }
}

void write_path_csv(std::ostream& os, const DiscretePath& path) {
  os << "t,X,V\n";
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    os << fmt17(path.times[i]) << ',' << fmt17(path.positions[i]) << ','
       << fmt17(path.velocities[i]) << '\n';
  }
}

}  // namespace rlp
