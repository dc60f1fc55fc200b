#include "rlp/archlaw.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "rlp/error.hpp"

namespace rlp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDensityScale = 3.0 / (2.0 * kPi);

// The centred step z = w - ln c satisfies z = logit(Q) / 3 with
// Q ~ Beta(5/6, 1/6), so its CDF is a regularized incomplete beta.
constexpr double kBetaA = 5.0 / 6.0;
constexpr double kBetaB = 1.0 / 6.0;

double centred_density(double z) {
  if (z > 0.0) {
    return kDensityScale * std::exp(-0.5 * z) / (1.0 + std::exp(-3.0 * z));
  }
  return kDensityScale * std::exp(2.5 * z) / (1.0 + std::exp(3.0 * z));
}

double centred_cdf(double z) {
  if (z <= 0.0) {
    const double q = 1.0 / (1.0 + std::exp(-3.0 * z));
    return boost::math::ibeta(kBetaA, kBetaB, q);
  }
  const double r = 1.0 / (1.0 + std::exp(3.0 * z));
  return 1.0 - boost::math::ibeta(kBetaB, kBetaA, r);
}

double centred_survival(double z) {
  if (z <= 0.0) {
    return 1.0 - centred_cdf(z);
  }
  const double r = 1.0 / (1.0 + std::exp(3.0 * z));
  return boost::math::ibeta(kBetaB, kBetaA, r);
}

// Exact quantile through the inverse incomplete beta; used to build knots.
double centred_quantile_exact(double p) {
  if (p <= 0.5) {
    const double q = boost::math::ibeta_inv(kBetaA, kBetaB, p);
    return std::log(q / (1.0 - q)) / 3.0;
  }
  const double r = boost::math::ibeta_inv(kBetaB, kBetaA, 1.0 - p);
  return std::log((1.0 - r) / r) / 3.0;
}

// Leading-order tail inversions:
//   F(z)   ~ (3 / 5pi) e^{5z/2}   as z -> -inf
//   1-F(z) ~ (3 / pi)  e^{-z/2}   as z -> +inf
double left_tail_quantile(double p) {
  return 0.4 * std::log(p * 5.0 * kPi / 3.0);
}
double right_tail_quantile(double tail) {
  return -2.0 * std::log(tail * kPi / 3.0);
}

// Cubic Hermite interpolant on uniform knots in a parameter t, stored as
// per-interval polynomial coefficients.
class HermiteTable {
 public:
  HermiteTable() = default;

  template <typename Value, typename Slope>
  HermiteTable(double t0, double t1, int knots, Value value, Slope slope)
      : t0_(t0), inv_h_((knots - 1) / (t1 - t0)), cells_(knots - 1) {
    const double h = (t1 - t0) / (knots - 1);
    std::vector<double> z(knots), d(knots);
    for (int i = 0; i < knots; ++i) {
      const double t = t0 + i * h;
      z[i] = value(t);
      d[i] = slope(t, z[i]) * h;
    }
    for (int i = 0; i + 1 < knots; ++i) {
      cells_[i] = {z[i], d[i], 3 * (z[i + 1] - z[i]) - 2 * d[i] - d[i + 1],
                   2 * (z[i] - z[i + 1]) + d[i] + d[i + 1]};
    }
  }

  double operator()(double t) const {
    const double pos = (t - t0_) * inv_h_;
    std::size_t i = pos <= 0.0 ? 0 : static_cast<std::size_t>(pos);
    if (i >= cells_.size()) i = cells_.size() - 1;
    const double s = pos - double(i);
    const Cell& c = cells_[i];
    return c.a + s * (c.b + s * (c.c + s * c.d));
  }

 private:
  struct Cell {
    double a, b, c, d;
  };
  double t0_ = 0.0;
  double inv_h_ = 1.0;
  std::vector<Cell> cells_;
};

// Quantile table for the centred step. The bulk uses 4096 knots uniform in
// probability; the tails use knots uniform in log-probability down to 1e-8,
// and the leading-order exponential inversion beyond that.
class QuantileTable {
 public:
  static constexpr int kBulkKnots = 4096;
  static constexpr int kTailKnots = 512;
  static constexpr double kLow = 0.02;
  static constexpr double kHigh = 0.98;
  static constexpr double kTailCut = 1e-8;

  QuantileTable() {
    bulk_ = HermiteTable(
        kLow, kHigh, kBulkKnots, [](double p) { return centred_quantile_exact(p); },
        [](double, double z) { return 1.0 / centred_density(z); });
    left_ = HermiteTable(
        std::log(kTailCut), std::log(kLow), kTailKnots,
        [](double t) { return centred_quantile_exact(std::exp(t)); },
        [](double t, double z) { return std::exp(t) / centred_density(z); });
    right_ = HermiteTable(
        std::log(kTailCut), std::log(1.0 - kHigh), kTailKnots,
        [](double t) { return centred_quantile_exact(1.0 - std::exp(t)); },
        [](double t, double z) { return -std::exp(t) / centred_density(z); });
  }

  double operator()(double p) const {
    if (p >= kLow && p <= kHigh) return bulk_(p);
    if (p < kLow) {
      if (p < kTailCut) return left_tail_quantile(p);
      return left_(std::log(p));
    }
    const double tail = 1.0 - p;
    if (tail < kTailCut) return right_tail_quantile(tail);
    return right_(std::log(tail));
  }

  static const QuantileTable& instance() {
    static const QuantileTable table;
    return table;
  }

 private:
  HermiteTable bulk_;
  HermiteTable left_;
  HermiteTable right_;
};

void require_finite(double w, const char* what) {
  if (!std::isfinite(w)) throw DomainError(what);
}

// I(x) * sqrt(pi) / (2 sqrt(x)); equals 1 at x = 0 and decreases.
double envelope_ratio(double x) {
  if (x < 1e-6) return 1.0 - 0.5 * x + 0.225 * x * x;
  return inner_integral(x) * std::sqrt(kPi) / (2.0 * std::sqrt(x));
}

}  // namespace

double critical_elasticity() { return std::exp(-kPiOverSqrt3); }

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Subcritical:
      return "subcritical";
    case Regime::Critical:
      return "critical";
    case Regime::Supercritical:
      return "supercritical";
  }
  return "unknown";
}

Elasticity Elasticity::of(double c) {
  if (!std::isfinite(c) || c <= 0.0) {
    throw DomainError("elasticity coefficient must be finite and positive");
  }
  Elasticity e;
  e.c = c;
  e.log_c = std::log(c);
  e.mu = e.log_c + kPiOverSqrt3;
  e.regime = classify_regime(e);
  return e;
}

Elasticity Elasticity::critical() {
  Elasticity e;
  e.c = critical_elasticity();
  e.log_c = -kPiOverSqrt3;
  e.mu = 0.0;
  e.regime = Regime::Critical;
  return e;
}

Regime classify_regime(const Elasticity& e) {
  const double cc = critical_elasticity();
  if (std::abs(e.c - cc) <= Elasticity::kCriticalTolerance * cc) {
    return Regime::Critical;
  }
  return e.c < cc ? Regime::Subcritical : Regime::Supercritical;
}

double step_density(double w, const Elasticity& e) {
  require_finite(w, "step_density: w must be finite");
  return centred_density(w - e.log_c);
}

double step_cdf(double w, const Elasticity& e) {
  if (std::isnan(w)) throw DomainError("step_cdf: w is NaN");
  if (w == -std::numeric_limits<double>::infinity()) return 0.0;
  if (w == std::numeric_limits<double>::infinity()) return 1.0;
  return centred_cdf(w - e.log_c);
}

double step_survival(double w, const Elasticity& e) {
  if (std::isnan(w)) throw DomainError("step_survival: w is NaN");
  if (w == -std::numeric_limits<double>::infinity()) return 1.0;
  if (w == std::numeric_limits<double>::infinity()) return 0.0;
  return centred_survival(w - e.log_c);
}

double step_quantile(double p, const Elasticity& e) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("step_quantile: p must lie in (0, 1)");
  }
  double z = QuantileTable::instance()(p);
  // Two Newton steps against the incomplete-beta CDF.
  for (int it = 0; it < 2; ++it) {
    const double f = centred_density(z);
    if (!(f > 0.0)) break;
    if (p <= 0.5) {
      z -= (centred_cdf(z) - p) / f;
    } else {
      z += (centred_survival(z) - (1.0 - p)) / f;
    }
  }
  return z + e.log_c;
}

double sample_step(Stream& rng, const Elasticity& e) {
  return QuantileTable::instance()(rng.uniform()) + e.log_c;
}

double inner_integral(double x) {
  if (std::isnan(x) || x < 0.0) {
    throw DomainError("inner_integral: x must be nonnegative");
  }
  if (x < 1e-6) {
    const double r = std::sqrt(x);
    return (2.0 * r - x * r + 0.45 * x * x * r) / std::sqrt(kPi);
  }
  return std::sqrt(2.0 / 3.0) * std::erf(std::sqrt(1.5 * x));
}

double joint_density(double s, double u) {
  if (!(s > 0.0) || !(u > 0.0)) {
    throw DomainError("joint_density: s and u must be positive");
  }
  if (std::isinf(s) || std::isinf(u)) return 0.0;
  const double expo = -2.0 * (u * u - u + 1.0) / s;
  if (expo < -700.0) return 0.0;  // s * s underflows before the exponential
  return 3.0 * u / (kPi * std::sqrt(2.0) * s * s) * std::exp(expo) *
         inner_integral(4.0 * u / s);
}

double conditional_duration_density(double s, double u, double v) {
  if (!(s > 0.0) || !(u > 0.0) || !(v > 0.0)) {
    throw DomainError(
        "conditional_duration_density: arguments must be positive");
  }
  if (std::isinf(s)) return 0.0;
  const double expo = -2.0 * (v * v - u * v + u * u) / s;
  if (expo < -700.0) return 0.0;
  return std::sqrt(2.0) * (u * u * u + v * v * v) /
         (s * s * std::sqrt(u * v)) * std::exp(expo) *
         inner_integral(4.0 * u * v / s);
}

double duration_envelope(double s, double u, double v) {
  if (!(s > 0.0) || !(u > 0.0) || !(v > 0.0)) {
    throw DomainError("duration_envelope: arguments must be positive");
  }
  const double b = 2.0 * (v * v - u * v + u * u);
  const double k = 4.0 * std::sqrt(2.0) * (u * u * u + v * v * v) / std::sqrt(kPi);
  return kEnvelopeSafety * k * std::pow(s, -2.5) * std::exp(-b / s);
}

double sample_duration_given_velocities(Stream& rng, double u, double v,
                                        RejectionStats* stats) {
  if (!(u > 0.0) || !(v > 0.0) || !std::isfinite(u) || !std::isfinite(v)) {
    throw DomainError("sample_duration_given_velocities: u, v must be positive");
  }
  const double b = 2.0 * (v * v - u * v + u * u);
  const double uv4 = 4.0 * u * v;
  for (;;) {
    const double s = b / rng.gamma_three_halves();
    const double ratio = envelope_ratio(uv4 / s);
    if (ratio > 1.0 + 1e-12) {
      throw InvariantError("duration envelope does not dominate the density");
    }
    if (stats) ++stats->proposals;
    if (rng.uniform() * kEnvelopeSafety < ratio) {
      if (stats) ++stats->accepted;
      return s;
    }
  }
}

ArchSample sample_arch(Stream& rng, const Elasticity& e) {
  const double log_step = sample_step(rng, e);
  const double v = std::exp(log_step - e.log_c);
  return {sample_duration_given_velocities(rng, 1.0, v), log_step};
}

double duration_tail_constant() {
  return 3.0 * std::tgamma(0.25) / (std::pow(2.0, 0.75) * std::pow(kPi, 1.5));
}

double conditional_tail_bound(double t) {
  if (!(t > 0.0)) throw DomainError("conditional_tail_bound: t must be positive");
  return 16.0 * std::sqrt(2.0) / (3.0 * std::sqrt(kPi)) * std::pow(t, -1.5);
}

}  // namespace rlp
