#include "gtflux/mesh.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gtflux {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

PaddedField::PaddedField(std::span<const State> cells, int ghosts, BoundaryKind bc)
    : data_(cells.size() + 2 * static_cast<std::size_t>(ghosts)),
      n_(cells.size()),
      ghosts_(ghosts),
      bc_(bc) {
  if (cells.empty()) throw std::invalid_argument("PaddedField: empty field");
  if (bc == BoundaryKind::periodic && static_cast<std::size_t>(ghosts) > cells.size())
    throw std::invalid_argument("PaddedField: halo wider than periodic field");
  std::copy(cells.begin(), cells.end(), data_.begin() + ghosts);
  fill_ghosts();
}

void PaddedField::fill_ghosts() {
  const long n = static_cast<long>(n_);
  for (long g = 1; g <= ghosts_; ++g) {
    if (bc_ == BoundaryKind::periodic) {
      cell(-g) = cell(n - g);
      cell(n - 1 + g) = cell(g - 1);
    } else {
      cell(-g) = cell(0);
      cell(n - 1 + g) = cell(n - 1);
    }
  }
}

double max_signal_speed(std::span<const State> states, const GasModel& gas) {
  double c = 0.0;
  for (const auto& u : states) c = std::max(c, max_wave_speed(u, gas));
  return c;
}

double compute_dt(const FieldSnapshot& field, double cfl_factor, const GasModel& gas) {
  if (field.states.empty()) throw std::invalid_argument("compute_dt: empty field");
  if (!(cfl_factor > 0.0 && cfl_factor < 0.5))
    throw std::invalid_argument("compute_dt: cfl factor must lie in (0, 0.5)");
  return cfl_factor * field.grid.dx() / max_signal_speed(field.states, gas);
}

long first_inadmissible(std::span<const State> states, const GasModel& gas) {
  for (std::size_t k = 0; k < states.size(); ++k)
    if (!is_admissible(states[k], gas)) return static_cast<long>(k);
  return -1;
}

FieldSnapshot conservative_step(const FieldSnapshot& field, std::span<const Flux> fluxes,
                                double dt, const GasModel& gas) {
  const std::size_t n = field.states.size();
  if (fluxes.size() != n + 1)
    throw std::invalid_argument("conservative_step: need n_cells + 1 interface fluxes");
  const double lambda = dt / field.grid.dx();
  FieldSnapshot out{field.grid, field.time + dt, field.states};
  for (std::size_t k = 0; k < n; ++k) out.states[k] -= lambda * (fluxes[k + 1] - fluxes[k]);
  if (const long bad = first_inadmissible(out.states, gas); bad >= 0)
    throw PositivityError("conservative_step produced an inadmissible state", bad);
  return out;
}

}  // namespace gtflux
