#pragma once

#include <cstddef>
#include <exception>
#include <limits>

namespace gtflux {

/// Execution policy for data-parallel kernels. `serial` is the reference
/// path; `parallel` distributes the same per-index work over OpenMP threads
/// and must produce bitwise identical results.
enum class Exec { serial, parallel };

template <class Fn>
void serial_for(std::ptrdiff_t n, Fn&& fn) {
  for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
}

// Exceptions cannot leave an OpenMP region; the one raised at the lowest
// index is rethrown after the loop, matching what the serial path reports.
template <class Fn>
void omp_for(std::ptrdiff_t n, Fn&& fn) {
  std::exception_ptr error;
  std::ptrdiff_t error_index = std::numeric_limits<std::ptrdiff_t>::max();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(gtflux_omp_for_error)
      if (i < error_index) {
        error_index = i;
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

template <class Fn>
void for_each_index(Exec exec, std::ptrdiff_t n, Fn&& fn) {
  if (exec == Exec::parallel)
    omp_for(n, fn);
  else
    serial_for(n, fn);
}

int max_threads();

}  // namespace gtflux
