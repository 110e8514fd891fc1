#pragma once

#include <array>
#include <cstdint>

namespace nonrecip {

/// Philox4x32-10 counter-based generator. Same (key, counter) gives the same
/// block on every platform.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Standard normal sample from one Philox block, via Box-Muller.
double philox_normal(std::uint64_t seed, std::uint64_t step, std::uint64_t stream);

/// Uniform double in (0, 1] built from two 32-bit words.
double words_to_unit(std::uint32_t hi, std::uint32_t lo);

/// Sequential stream on top of Philox, for drawing random test instances.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  double uniform();  // (0, 1]
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::uint32_t next_u32();
  int integer(int lo, int hi);  // inclusive

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
};

/// Deterministic sub-seed for case or trajectory `index` of a run.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace nonrecip
