#include "gtflux/pa.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gtflux/limiters.hpp"

namespace gtflux {

PAOperator annihilation_coefficients(std::span<const double> points, double xi) {
  const int m = static_cast<int>(points.size()) - 1;
  if (m < 1) throw std::invalid_argument("annihilation_coefficients: need at least two points");
  for (int j = 0; j < m; ++j)
    if (!(points[static_cast<std::size_t>(j)] < points[static_cast<std::size_t>(j + 1)]))
      throw std::invalid_argument("annihilation_coefficients: points must be strictly increasing");
  const double lo = points.front();
  const double span = points.back() - lo;
  if (!(xi >= lo && xi <= points.back()))
    throw std::invalid_argument("annihilation_coefficients: xi outside the stencil");

  // Work in t = (x - lo) / span; d^m/dx^m = span^-m d^m/dt^m.
  Eigen::MatrixXd v(m + 1, m + 1);
  for (int l = 0; l <= m; ++l)
    for (int j = 0; j <= m; ++j)
      v(l, j) = std::pow((points[static_cast<std::size_t>(j)] - lo) / span, l);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
  rhs(m) = std::tgamma(m + 1.0);
  const Eigen::VectorXd c = v.fullPivLu().solve(rhs);

  PAOperator op;
  op.points.assign(points.begin(), points.end());
  op.xi = xi;
  op.coeffs.resize(static_cast<std::size_t>(m + 1));
  const double scale = std::pow(span, -m);
  double abs_sum = 0.0;
  for (int j = 0; j <= m; ++j) {
    op.coeffs[static_cast<std::size_t>(j)] = c(j) * scale;
    abs_sum += std::abs(c(j) * scale);
    if (points[static_cast<std::size_t>(j)] >= xi) op.q += c(j) * scale;
  }
  if (!std::isfinite(op.q) || std::abs(op.q) <= 1e-14 * abs_sum)
    throw std::domain_error("annihilation_coefficients: degenerate stencil (q_m = 0)");
  return op;
}

double pa_jump(const PAOperator& op, std::span<const double> samples) {
  if (samples.size() != op.coeffs.size()) throw std::invalid_argument("pa_jump: sample count mismatch");
  double sum = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) sum += op.coeffs[j] * samples[j];
  return sum / op.q;
}

int interface_stencil_first(int order) { return -(order + 1) / 2; }

PAOperator interface_operator(int order) {
  if (order < 1) throw std::invalid_argument("interface_operator: order must be positive");
  std::vector<double> pts(static_cast<std::size_t>(order + 1));
  const int first = interface_stencil_first(order);
  for (int j = 0; j <= order; ++j) pts[static_cast<std::size_t>(j)] = first + j + 0.5;
  return annihilation_coefficients(pts, 0.0);
}

std::vector<double> pa_mollifier_kernel() { return {1.0 / 3.0, 2.0 / 3.0, 1.0, 2.0 / 3.0, 1.0 / 3.0}; }

std::vector<double> pa_alpha_raw(const PaddedField& u, double domain_measure, const PAParams& params,
                                 Exec exec) {
  const int p = params.half_width;
  if (p < 1 || params.order < 1 || params.order > 2 * p - 1)
    throw std::invalid_argument("pa_alpha_field: need 1 <= order <= 2 * half_width - 1");
  if (u.ghosts() < p) throw std::invalid_argument("pa_alpha_field: halo narrower than half_width");
  const long n = static_cast<long>(u.n_cells());
  if (n < 2 * p) throw std::invalid_argument("pa_alpha_field: field shorter than the sensing window");

  const PAOperator op = interface_operator(params.order);
  const int first = interface_stencil_first(params.order);

  // c2 per component: discrete L1 norm of the current field.
  Vec3 c2{};
  for (long k = 0; k < n; ++k)
    for (int c = 0; c < 3; ++c) c2[c] += std::abs(u.cell(k)[c]);
  c2 = (domain_measure / static_cast<double>(n)) * c2;

  std::vector<double> alpha(static_cast<std::size_t>(n + 1));
  for_each_index(exec, n + 1, [&](std::ptrdiff_t i) {
    double best = 0.0;
    std::vector<double> samples(op.coeffs.size());
    for (int c = 0; c < 3; ++c) {
      double lo = u.cell(i - p)[c], hi = lo;
      for (long k = i - p; k < i + p; ++k) {
        lo = std::min(lo, u.cell(k)[c]);
        hi = std::max(hi, u.cell(k)[c]);
      }
      if (lo == hi) continue;  // constant window: L vanishes exactly
      for (std::size_t j = 0; j < samples.size(); ++j) samples[j] = u.cell(i + first + static_cast<long>(j))[c];
      const double l = pa_jump(op, samples);
      // The idealized step (hi left, lo right) has jump lo - hi for any stencil.
      const double z = lo - hi;
      const double denom = std::abs(z) + c2[c];
      if (denom > 0.0) best = std::max(best, params.c1 * std::abs(l) / denom);
    }
    alpha[static_cast<std::size_t>(i)] = std::clamp(best, 0.0, 1.0);
  });
  return alpha;
}

std::vector<double> pa_alpha_field(const PaddedField& u, double domain_measure, const PAParams& params,
                                   Exec exec) {
  const auto raw = pa_alpha_raw(u, domain_measure, params, exec);
  const auto kernel = pa_mollifier_kernel();
  const std::size_t n = u.n_cells();
  if (u.boundary() == BoundaryKind::periodic) {
    // Interfaces 0 and n coincide.
    std::span<const double> ring(raw.data(), n);
    auto out = sup_mollify(ring, kernel, true);
    out.push_back(out.front());
    return out;
  }
  return sup_mollify(raw, kernel, false);
}

Limiter pa_limiter(const PAParams& params) {
  Limiter lim;
  lim.name = "pa";
  lim.half_width = params.half_width;
  lim.alpha = [params](const StepContext& ctx) {
    return pa_alpha_field(ctx.u, ctx.grid.length(), params, ctx.exec);
  };
  return lim;
}

}  // namespace gtflux
