#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "gtflux/euler.hpp"
#include "gtflux/parallel.hpp"

namespace gtflux {

struct Grid1D {
  std::size_t n_cells{0};
  double x_min{0.0};
  double x_max{1.0};

  Grid1D() = default;
  Grid1D(std::size_t n, double lo, double hi) : n_cells(n), x_min(lo), x_max(hi) {
    if (n == 0 || !(hi > lo)) throw std::invalid_argument("Grid1D: need n > 0 and x_max > x_min");
  }

  double dx() const { return (x_max - x_min) / static_cast<double>(n_cells); }
  double center(std::size_t k) const { return x_min + (static_cast<double>(k) + 0.5) * dx(); }
  double interface_position(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
  double length() const { return x_max - x_min; }
};

struct FieldSnapshot {
  Grid1D grid;
  double time{0.0};
  std::vector<State> states;
};

enum class BoundaryKind { periodic, extrapolation };

/// Cell states with `ghosts` halo cells on each side. Cell k (physical cells
/// are 0..n-1) lives at data[k + ghosts].
class PaddedField {
 public:
  PaddedField() = default;
  PaddedField(std::span<const State> cells, int ghosts, BoundaryKind bc);

  std::size_t n_cells() const { return n_; }
  int ghosts() const { return ghosts_; }
  BoundaryKind boundary() const { return bc_; }

  const State& cell(long k) const { return data_[static_cast<std::size_t>(k + ghosts_)]; }
  State& cell(long k) { return data_[static_cast<std::size_t>(k + ghosts_)]; }

  /// `count` consecutive states starting at cell `first` (may reach into the halo).
  std::span<const State> window(long first, std::size_t count) const {
    return {data_.data() + first + ghosts_, count};
  }
  std::span<const State> interior() const { return {data_.data() + ghosts_, n_}; }

  void fill_ghosts();

 private:
  std::vector<State> data_;
  std::size_t n_{0};
  int ghosts_{0};
  BoundaryKind bc_{BoundaryKind::periodic};
};

/// dt = cfl * dx / max_k max_wave_speed(u_k).
double compute_dt(const FieldSnapshot& field, double cfl_factor, const GasModel& gas);
double max_signal_speed(std::span<const State> states, const GasModel& gas);

/// u_k <- u_k - dt/dx (F_{k+1/2} - F_{k-1/2}); `interface_fluxes` has n+1 entries,
/// entry i sits between cells i-1 and i.
FieldSnapshot conservative_step(const FieldSnapshot& field, std::span<const Flux> interface_fluxes,
                                double dt, const GasModel& gas);

/// Index of the first inadmissible cell, or -1.
long first_inadmissible(std::span<const State> states, const GasModel& gas);

}  // namespace gtflux
