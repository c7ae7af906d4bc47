#pragma once

#include <array>
#include <cstdint>

#include "ultralevy/numeric.hpp"

namespace ultralevy {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Which random quantity of a jump a stream feeds.
enum class StreamField : std::uint32_t {
  timing = 0,      // waiting time and shell choice
  moved_digit = 1, // the digit forced to change
  fresh_digits = 2, // all deeper digits
  marginal = 3      // direct draws of the state at a fixed time
};

/**
 * A sequence of 64-bit words addressed by (seed, path, event, field). Distinct
 * addresses give independent streams, so paths and events can be generated in any
 * order or in parallel with identical results.
 */
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t path, std::uint64_t event, StreamField field);

  // UniformRandomBitGenerator, so standard distributions can draw from a stream.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double next_unit();
  /// Uniform on (0, 1].
  double next_open_unit();
  /// Exact uniform integer in [0, bound), bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound);
  /// Exact uniform integer in [0, bound), bound >= 1, by rejection on whole bit blocks.
  Natural uniform_below(const Natural& bound);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t path_;
  std::uint32_t event_lo_;
  std::uint32_t event_hi_field_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned used_ = 4;
};

}  // namespace ultralevy
