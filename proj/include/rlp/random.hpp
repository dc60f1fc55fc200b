#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace rlp {

/// Stable 64-bit FNV-1a hash, used to turn task names into stream ids.
constexpr std::uint64_t task_id(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// An independent random stream.
///
/// Streams are derived from (master seed, task id, run index) by feeding the
/// six 32-bit halves of those words, in that order, to std::seed_seq and
/// seeding a 64-bit Mersenne twister with the result. The derivation does
/// not depend on how work is scheduled, so a run is reproducible from its
/// three coordinates alone.
class Stream {
 public:
  using engine_type = std::mt19937_64;

  Stream(std::uint64_t master_seed, std::uint64_t task, std::uint64_t run = 0)
      : engine_(make_engine(master_seed, task, run)) {}

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return normal_(engine_); }

  double exponential() { return -std::log(uniform()); }

  /// Gamma(3/2, 1) as Exp(1) + N(0,1)^2 / 2.
  double gamma_three_halves() {
    const double z = normal();
    return exponential() + 0.5 * z * z;
  }

  double gamma(double shape) {
    std::gamma_distribution<double> g(shape, 1.0);
    return g(engine_);
  }

  /// Uniform index in [0, n).
  std::uint64_t index(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  engine_type& engine() { return engine_; }

 private:
  static engine_type make_engine(std::uint64_t seed, std::uint64_t task,
                                 std::uint64_t run) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(task),
                      static_cast<std::uint32_t>(task >> 32),
                      static_cast<std::uint32_t>(run),
                      static_cast<std::uint32_t>(run >> 32)};
    return engine_type(seq);
  }

  engine_type engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rlp
