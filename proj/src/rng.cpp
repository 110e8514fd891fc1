#include "nonrecip/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nonrecip {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

std::array<std::uint32_t, 4> block_for(std::uint64_t seed, std::uint64_t step, std::uint64_t stream) {
  std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
                                   static_cast<std::uint32_t>(stream),
                                   static_cast<std::uint32_t>(stream >> 32)};
  std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return philox4x32(ctr, key);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

double words_to_unit(std::uint32_t hi, std::uint32_t lo) {
  // 53 random bits, shifted off zero
  std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

double philox_normal(std::uint64_t seed, std::uint64_t step, std::uint64_t stream) {
  auto b = block_for(seed, step, stream);
  double u1 = words_to_unit(b[0], b[1]);
  double u2 = words_to_unit(b[2], b[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void PhiloxStream::refill() {
  block_ = block_for(seed_, counter_++, stream_);
  used_ = 0;
}

std::uint32_t PhiloxStream::next_u32() {
  if (used_ >= 4) refill();
  return block_[used_++];
}

double PhiloxStream::uniform() {
  std::uint32_t hi = next_u32();
  std::uint32_t lo = next_u32();
  return words_to_unit(hi, lo);
}

double PhiloxStream::normal() {
  double u1 = uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int PhiloxStream::integer(int lo, int hi) {
  auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(std::min<std::uint64_t>(span - 1, static_cast<std::uint64_t>(uniform() * span)));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  auto b = block_for(seed, index, 0x5eedULL);
  return (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
}

}  // namespace nonrecip
