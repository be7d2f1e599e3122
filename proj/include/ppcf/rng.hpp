#pragma once

#include <cstdint>

namespace ppcf {

/// Counter-based generator: draw number k of stream (seed, start) is a pure
/// function of (seed, start + k), so any run's stream can be built directly.
class RngStream {
 public:
  static constexpr std::uint64_t kStreamSpacing = std::uint64_t{1} << 40;

  RngStream(std::uint64_t seed, std::uint64_t counter) : seed_(seed), counter_(counter) {}
  /// Stream of run `i`: counters start at i * 2^40.
  static RngStream for_run(std::uint64_t seed, std::uint64_t i) { return {seed, i * kStreamSpacing}; }

  /// 53-bit float in [0, 1). Advances the counter by one.
  double uniform();
  std::uint64_t next_u64();

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace ppcf
