#pragma once

#include <cstdint>
#include <random>

namespace rankgap {

// Every stochastic operation takes a caller-owned generator; outputs are a
// pure function of (inputs, generator state).
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace rankgap
