#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace zipfkit {

// Distances between the empirical distribution of an ascending sample and a
// continuous reference CDF.

template <class Cdf>
double ks_distance(std::span<const double> sorted, Cdf&& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max(d, std::max(std::abs(above), std::abs(below)));
  }
  return d;
}

// Computational form of n * integral (F_n - F)^2 dF.
template <class Cdf>
double cvm_distance(std::span<const double> sorted, Cdf&& cdf) {
  const double n = static_cast<double>(sorted.size());
  double w2 = 1.0 / (12.0 * n);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double r = cdf(sorted[i]) - (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n);
    w2 += r * r;
  }
  return w2;
}

}  // namespace zipfkit
