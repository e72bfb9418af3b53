#pragma once

#include <cstddef>

namespace zipfkit {

// Scheduling for the Monte Carlo kernels. Both paths run the same per-index
// body and must produce identical results; `serial` is the reference.
enum class Exec { serial, parallel };

// Calls body(i) for i in [0, n). The body must not throw and must only write
// to slots owned by index i.
template <class Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
  if (exec == Exec::parallel) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      body(static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      body(i);
    }
  }
}

}  // namespace zipfkit
