#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "rlp/archlaw.hpp"
#include "rlp/random.hpp"

namespace rlp {

struct BounceEvent {
  double time;
  double v_in;   ///< negative
  double v_out;  ///< -c * v_in
};

/// Euler discretization of the reflected Langevin equation.
struct DiscretePath {
  double dt = 0.0;
  double t_end = 0.0;
  /// Set when the state came within 1e-12 of (0, 0): the discretization can
  /// no longer resolve bounces and integration stopped.
  bool accumulation_reached = false;
  std::vector<BounceEvent> bounce_events;
  /// Grid samples (t, X, V); filled only when recording was requested.
  std::vector<double> times;
  std::vector<double> positions;
  std::vector<double> velocities;
};

struct IntegrateOptions {
  /// Multiplier of the Gaussian increments; 0 gives the deterministic limit.
  double noise_scale = 1.0;
  /// Stop after this many bounces (0 = never).
  std::size_t max_bounces = 0;
  bool record_path = false;
};

/// Semi-implicit Euler: V += sqrt(dt) Z, X += V dt. A sign change of X is
/// located by linear interpolation inside the step; X is reset to 0 there,
/// V becomes -c V, and the rest of the step is integrated ballistically.
DiscretePath integrate(Stream& rng, const Elasticity& e, double x0, double u0,
                       double dt, double t_max, const IntegrateOptions& opt = {});

struct FirstArch {
  double zeta1;
  double v1;
};

/// First bounce of a path, or nullopt when there was none before t_max.
std::optional<FirstArch> extract_first_arch(const DiscretePath& path);

/// First-bounce data for several step sizes driven by one Brownian path:
/// level k uses dt_fine * factors[k] and aggregates the fine increments.
/// Entries are nullopt for levels without a bounce before t_max.
std::vector<std::optional<FirstArch>> first_arch_coupled(
    Stream& rng, const Elasticity& e, double x0, double u0, double dt_fine,
    const std::vector<int>& factors, double t_max);

void write_bounce_csv(std::ostream& os, const DiscretePath& path);
void write_path_csv(std::ostream& os, const DiscretePath& path);

}  // namespace rlp
