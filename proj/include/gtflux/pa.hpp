#pragma once

#include <span>
#include <vector>

#include "gtflux/mesh.hpp"
#include "gtflux/solver.hpp"

namespace gtflux {

/// Polynomial annihilation operator of order m on m + 1 points.
struct PAOperator {
  std::vector<double> points;
  std::vector<double> coeffs;  ///< c_j, scaled by 1/length^m
  double q{0.0};               ///< sum of c_j over points x_j >= xi
  double xi{0.0};

  int order() const { return static_cast<int>(points.size()) - 1; }
};

/// Solves sum_j c_j x_j^l = d^m/dx^m x^l at xi for l = 0..m.
/// Throws std::invalid_argument for unsorted/duplicate points or xi outside
/// the stencil, and std::domain_error when q vanishes.
PAOperator annihilation_coefficients(std::span<const double> points, double xi);

/// L_m[s](xi) = (1/q) sum_j c_j s_j.
double pa_jump(const PAOperator& op, std::span<const double> samples);

struct PAParams {
  int order{4};        ///< operator order m, at most 2 * half_width - 1
  int half_width{4};   ///< cells per side in the sensing window
  double c1{10.0};
};

/// Order-m operator on cell centers (in units of dx) around an interface at 0,
/// using (m + 1) / 2 cells on the left and the rest on the right.
PAOperator interface_operator(int order);

/// Cell-offset range [first, first + order + 1) relative to the cell right of the interface.
int interface_stencil_first(int order);

/// Per-interface alpha (n + 1 values) from componentwise PA sensing on the
/// conserved variables, followed by sup-mollification with max(1 - |j|/3, 0).
/// `u` must carry at least params.half_width ghosts.
std::vector<double> pa_alpha_field(const PaddedField& u, double domain_measure,
                                   const PAParams& params = {}, Exec exec = Exec::serial);

/// Unmollified per-interface values of pa_alpha_field.
std::vector<double> pa_alpha_raw(const PaddedField& u, double domain_measure,
                                 const PAParams& params = {}, Exec exec = Exec::serial);

/// Mollification kernel samples at offsets -2..2: 1/3, 2/3, 1, 2/3, 1/3.
std::vector<double> pa_mollifier_kernel();

Limiter pa_limiter(const PAParams& params = {});

}  // namespace gtflux
