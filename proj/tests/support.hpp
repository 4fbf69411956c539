#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "gtflux/euler.hpp"
#include "gtflux/mesh.hpp"

namespace testing_support {

using namespace gtflux;

inline State random_state(std::mt19937_64& rng, const GasModel& gas, double rho_lo = 0.1,
                          double rho_hi = 5.0, double v_max = 3.0, double p_lo = 0.1, double p_hi = 10.0) {
  std::uniform_real_distribution<double> r(rho_lo, rho_hi), v(-v_max, v_max), p(p_lo, p_hi);
  return to_conserved({r(rng), v(rng), p(rng)}, gas);
}

inline std::vector<State> random_field(std::mt19937_64& rng, std::size_t n, const GasModel& gas) {
  std::vector<State> out(n);
  for (auto& s : out) s = random_state(rng, gas);
  return out;
}

/// Smooth periodic field on [0, 1].
inline std::vector<State> smooth_field(std::size_t n, const GasModel& gas) {
  std::vector<State> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = (k + 0.5) / static_cast<double>(n);
    out[k] = to_conserved({1.0 + 0.3 * std::sin(2 * M_PI * x), 0.5 + 0.2 * std::cos(2 * M_PI * x),
                           1.0 + 0.2 * std::sin(4 * M_PI * x)},
                          gas);
  }
  return out;
}

inline bool bitwise_equal(const std::vector<State>& a, const std::vector<State>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

}  // namespace testing_support
