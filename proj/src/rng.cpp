#include "ppcf/rng.hpp"

namespace ppcf {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t RngStream::next_u64() {
  std::uint64_t key = mix(seed_ + 0x9E3779B97F4A7C15ULL);
  return mix(key ^ mix(counter_++ * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL));
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

}  // namespace ppcf
