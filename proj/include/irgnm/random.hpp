#pragma once

#include <cmath>
#include <cstdint>

namespace irgnm {

// Counter-based random source. Every draw is a pure function of
// (seed, stream, position): the 64-bit state is the SplitMix64 finalizer
// applied to an affine combination of the inputs, so entry i of stream n
// can be regenerated without replaying anything that came before it.
// Streams are used for observation indices (1-based) and for independent
// purposes such as prior sampling, which pass disjoint stream ids.

namespace detail {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t raw(std::uint64_t seed, std::uint64_t stream, std::uint64_t i) {
  const std::uint64_t base = mix64(seed + kGolden * (stream + 1));
  return mix64(base + kGolden * (i + 1));
}

}  // namespace detail

// Uniform on the open interval (0,1): the top 53 bits, centered half a ulp
// away from both endpoints so downstream logarithms stay finite.
inline double uniform_open01(std::uint64_t seed, std::uint64_t stream, std::uint64_t i) {
  return (static_cast<double>(detail::raw(seed, stream, i) >> 11) + 0.5) * 0x1p-53;
}

// Standard normal via the Box-Muller transform; entry i consumes the
// uniforms at positions 2i and 2i+1 of the underlying stream.
inline double normal_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t i) {
  const double u1 = uniform_open01(seed, stream, 2 * i);
  const double u2 = uniform_open01(seed, stream, 2 * i + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace irgnm
