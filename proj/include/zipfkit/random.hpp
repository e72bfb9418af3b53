#pragma once

#include <cstdint>
#include <random>

namespace zipfkit {

using Engine = std::mt19937_64;

// Mixes a base seed with a stream index (replicate, block, series, ...) so
// that every independent task gets its own engine regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
  return Engine(derive_seed(seed, stream));
}

// Uniform on the open interval (0, 1).
inline double open_uniform(Engine& eng) {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

// Inverse-transform Pareto draw: x_min * u^(-1/alpha).
double pareto_draw(Engine& eng, double alpha, double x_min);

}  // namespace zipfkit
