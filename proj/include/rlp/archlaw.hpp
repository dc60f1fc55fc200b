#pragma once

#include <cstdint>

#include "rlp/random.hpp"

namespace rlp {

/// pi / sqrt(3): mean log-velocity step of a perfectly elastic bounce.
inline constexpr double kPiOverSqrt3 = 1.8137993642342178;

/// The critical elasticity coefficient exp(-pi/sqrt(3)).
double critical_elasticity();

enum class Regime { Subcritical, Critical, Supercritical };

const char* to_string(Regime r);

/// Velocity restitution coefficient of the boundary, with the drift of the
/// log-velocity walk it induces.
struct Elasticity {
  double c = 1.0;
  double log_c = 0.0;
  /// Drift of the log-velocity walk, log_c + pi/sqrt(3).
  double mu = kPiOverSqrt3;
  Regime regime = Regime::Supercritical;

  /// Relative tolerance for classifying c as critical.
  static constexpr double kCriticalTolerance = 1e-12;

  /// Throws DomainError unless c is finite and positive.
  static Elasticity of(double c);
  /// Exactly critical: log_c = -pi/sqrt(3), mu = 0.
  static Elasticity critical();
};

Regime classify_regime(const Elasticity& e);

/// One normalized arch: its duration when started at unit speed, and the
/// log of the ratio of outgoing speeds across it.
struct ArchSample {
  double duration;
  double log_step;
};

// Step law of the log-velocity walk -------------------------------------------

double step_density(double w, const Elasticity& e);
double step_cdf(double w, const Elasticity& e);
/// 1 - step_cdf, accurate in the upper tail.
double step_survival(double w, const Elasticity& e);
double step_quantile(double p, const Elasticity& e);
/// Inverse-CDF draw from the cached quantile table.
double sample_step(Stream& rng, const Elasticity& e);

// Arch durations --------------------------------------------------------------

/// Integral of exp(-3t/2) / sqrt(pi t) over [0, x].
double inner_integral(double x);

/// Joint density of (first return time, returning speed / c) for an arch
/// leaving the origin at unit speed. Independent of c.
double joint_density(double s, double u);

/// Density of the arch duration s given start speed u and returning speed
/// c*v (so the outgoing speed after the bounce is c*v).
double conditional_duration_density(double s, double u, double v);

struct RejectionStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  double acceptance_rate() const {
    return proposals == 0 ? 0.0 : double(accepted) / double(proposals);
  }
};

/// Safety factor applied to the rejection envelope.
inline constexpr double kEnvelopeSafety = 1.05;

/// Inverse-gamma(3/2, 2(v^2 - uv + u^2)) envelope scaled to dominate
/// conditional_duration_density.
double duration_envelope(double s, double u, double v);

double sample_duration_given_velocities(Stream& rng, double u, double v,
                                        RejectionStats* stats = nullptr);

ArchSample sample_arch(Stream& rng, const Elasticity& e);

/// Constant c' in P(duration > t) ~ c' t^{-1/4}.
double duration_tail_constant();

/// Upper bound on P(duration > t a^2 | speeds <= a).
double conditional_tail_bound(double t);

}  // namespace rlp
