#pragma once

#include "fidreg/stats.hpp"

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>

namespace fidreg {

/// Anything that can feed the fiducial samplers. Production code uses
/// RngStream; tests substitute pinned sources.
template <class R>
concept RandomSource = requires(R& r, double df) {
  { r.next_uniform() } -> std::convertible_to<double>;
  { r.next_normal() } -> std::convertible_to<double>;
  { r.next_chi_squared(df) } -> std::convertible_to<double>;
};

/// Deterministic random stream: xoshiro256++ seeded from (seed, stream_id)
/// via splitmix64. The generator and every distribution below are implemented
/// here rather than taken from <random>, so identical (seed, stream_id)
/// reproduce identical sequences bit-for-bit on any platform. Each stream is
/// single-consumer; concurrent draws need distinct stream ids.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    // Fold the stream id into the splitmix state so streams with the same
    // seed are decorrelated.
    std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1));
    for (auto& s : state_) s = splitmix64(x);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on the open interval (0, 1): 53-bit mantissa, offset half a ulp
  /// so 0 and 1 are never returned (the normal inverse CDF needs that).
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via the inverse CDF; one uniform consumed per draw.
  double next_normal() { return normal_quantile(next_uniform()); }

  /// Gamma(shape, scale) by Marsaglia-Tsang squeeze; shape < 1 handled by the
  /// usual boost from shape + 1.
  double next_gamma(double shape, double scale) {
    if (shape <= 0.0 || scale <= 0.0)
      throw std::invalid_argument("next_gamma: shape and scale must be positive");
    if (shape < 1.0) {
      double u = next_uniform();
      return next_gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = next_normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_uniform();
      if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v * scale;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
  }

  double next_chi_squared(double df) { return next_gamma(0.5 * df, 2.0); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::array<std::uint64_t, 4> state_;
};

static_assert(RandomSource<RngStream>);

}  // namespace fidreg
