#pragma once

#include <cmath>
#include <cstdint>

namespace ran {

// SplitMix64 step. Also used to derive independent per-position seeds for the
// branching trees, so two simulations sharing a seed label the same tree
// position with the same randomness regardless of expansion order.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
  return splitmix64(s);
}

// Bounded draw by multiply-shift: one 64-bit generator output per call, no
// rejection loop. Bias is below 2^-32 for any bound that fits in 32 bits.
inline std::uint32_t bounded(std::uint64_t r, std::uint32_t bound) {
  return static_cast<std::uint32_t>(
      (static_cast<unsigned __int128>(r) * bound) >> 64);
}

// Uniform double in (0,1): 53 random bits centered in their bucket, so the
// result is never exactly 0 or 1.
inline double to_unit(std::uint64_t r) {
  return (static_cast<double>(r >> 11) + 0.5) * 0x1.0p-53;
}

// Exponential(1) from one draw. Hand-rolled so streams are identical across
// standard libraries; strictly positive by construction of to_unit.
inline double exp1(std::uint64_t r) { return -std::log(to_unit(r)); }

}  // namespace ran
