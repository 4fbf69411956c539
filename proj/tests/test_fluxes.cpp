#include <doctest.h>

#include <array>

#include "gtflux/fluxes.hpp"
#include "support.hpp"

using namespace gtflux;
using doctest::Approx;

namespace {
const GasModel kGas{1.4};

void check_vec(const Vec3& a, const Vec3& b, double tol) {
  for (std::size_t c = 0; c < 3; ++c) CHECK(std::abs(a[c] - b[c]) <= tol * std::max(1.0, std::abs(b[c])));
}
}  // namespace

TEST_CASE("fluxes are consistent") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const State u = testing_support::random_state(rng, kGas);
    const Flux f = physical_flux(u, kGas);
    check_vec(llf_flux(u, u, kGas), f, 1e-14);
    check_vec(ec_flux2(u, u, kGas), f, 1e-12);
    const std::array<State, 4> w{u, u, u, u};
    check_vec(ec_flux4(w, kGas), f, 1e-12);
    CHECK(llf_entropy_flux(u, u, kGas) == Approx(entropy_pair(u, kGas).F));
    CHECK(ec2_entropy_flux(u, u, kGas) == Approx(entropy_pair(u, kGas).F).epsilon(1e-10));
  }
}

TEST_CASE("ec2 satisfies the entropy conservation condition") {
  // (w_r - w_l) . h = psi_r - psi_l
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    const State a = testing_support::random_state(rng, kGas), b = testing_support::random_state(rng, kGas);
    const Flux h = ec_flux2(a, b, kGas);
    const double lhs = dot(entropy_variables(b, kGas) - entropy_variables(a, kGas), h);
    const double rhs = entropy_potential(b, kGas) - entropy_potential(a, kGas);
    CHECK(std::abs(lhs - rhs) <= 1e-11 * (1 + std::abs(rhs) + norm2(h)));
  }
}

TEST_CASE("ec2 is symmetric") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const State a = testing_support::random_state(rng, kGas), b = testing_support::random_state(rng, kGas);
    check_vec(ec_flux2(a, b, kGas), ec_flux2(b, a, kGas), 1e-14);
  }
}

TEST_CASE("ec entropy fluxes are the consistent H = wbar.h - psibar") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const State a = testing_support::random_state(rng, kGas), b = testing_support::random_state(rng, kGas);
    const Vec3 wbar = 0.5 * (entropy_variables(a, kGas) + entropy_variables(b, kGas));
    const double psibar = 0.5 * (entropy_potential(a, kGas) + entropy_potential(b, kGas));
    CHECK(ec2_entropy_flux(a, b, kGas) == Approx(dot(wbar, ec_flux2(a, b, kGas)) - psibar).epsilon(1e-12));
  }
}

TEST_CASE("ec4 combines two-point fluxes with weights 4/3 and -1/6") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    std::array<State, 4> w;
    for (auto& s : w) s = testing_support::random_state(rng, kGas);
    const Flux expected = (4.0 / 3.0) * ec_flux2(w[1], w[2], kGas) -
                          (1.0 / 6.0) * (ec_flux2(w[0], w[2], kGas) + ec_flux2(w[1], w[3], kGas));
    check_vec(ec_flux4(w, kGas), expected, 1e-13);
    const double he = (4.0 / 3.0) * ec2_entropy_flux(w[1], w[2], kGas) -
                      (1.0 / 6.0) * (ec2_entropy_flux(w[0], w[2], kGas) + ec2_entropy_flux(w[1], w[3], kGas));
    CHECK(ec4_entropy_flux(w, kGas) == Approx(he).epsilon(1e-13));
  }
}

TEST_CASE("ec4 conserves entropy semi-discretely on a periodic field") {
  // sum_k w_k . (h_{k+1/2} - h_{k-1/2}) = 0 for the entropy conservative scheme.
  std::mt19937_64 rng(6);
  const std::size_t n = 16;
  auto cells = testing_support::random_field(rng, n, kGas);
  for (BaseFlux kind : {BaseFlux::ec2, BaseFlux::ec4}) {
    const int hw = stencil_half_width(kind);
    PaddedField u(cells, hw, BoundaryKind::periodic);
    std::vector<Flux> f(n + 1);
    for (long i = 0; i <= static_cast<long>(n); ++i)
      f[static_cast<std::size_t>(i)] = numerical_flux(kind, u.window(i - hw, static_cast<std::size_t>(2 * hw)), kGas);
    double sum = 0, scale = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double t = dot(entropy_variables(cells[k], kGas), f[k + 1] - f[k]);
      sum += t;
      scale += std::abs(t);
    }
    CHECK(std::abs(sum) <= 1e-12 * scale);
  }
}

TEST_CASE("ec4 is fourth order on smooth data") {
  // Flux difference approximates f(u)_x; error ratio under halving ~ 16.
  const auto smooth = [](double x) {
    return to_conserved({1.0 + 0.2 * std::sin(2 * M_PI * x), 0.3, 1.0 + 0.1 * std::cos(2 * M_PI * x)}, kGas);
  };
  const auto flux_x = [&](double x) {
    const double h = 1e-5;
    return (1.0 / (2 * h)) * (physical_flux(smooth(x + h), kGas) - physical_flux(smooth(x - h), kGas));
  };
  double prev = 0;
  for (int n : {32, 64, 128}) {
    const double dx = 1.0 / n;
    std::array<State, 6> c;
    for (int j = 0; j < 6; ++j) c[static_cast<std::size_t>(j)] = smooth(0.3 + (j - 2.5) * dx);
    const Flux fr = ec_flux4(std::span<const State, 4>(c.data() + 1, 4), kGas);
    const Flux fl = ec_flux4(std::span<const State, 4>(c.data(), 4), kGas);
    const double err = std::abs(((1.0 / dx) * (fr - fl) - flux_x(0.3 - 0.5 * dx)).rho);
    if (prev > 0) CHECK(std::log2(prev / err) > 3.5);
    prev = err;
  }
}

TEST_CASE("llf is entropy stable for random pairs") {
  // w_r - w_l dotted with the LLF flux dissipates: (w_r - w_l).g - (psi_r - psi_l) <= 0.
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const State a = testing_support::random_state(rng, kGas), b = testing_support::random_state(rng, kGas);
    const double d = dot(entropy_variables(b, kGas) - entropy_variables(a, kGas), llf_flux(a, b, kGas)) -
                     (entropy_potential(b, kGas) - entropy_potential(a, kGas));
    CHECK(d <= 1e-10);
  }
}

TEST_CASE("gt flux blend") {
  const Flux g{1, 2, 3}, h{3, 2, 1};
  CHECK(gt_flux(0.0, g, h) == h);
  CHECK(gt_flux(1.0, g, h) == g);
  const Flux m = gt_flux(0.25, g, h);
  CHECK(m.rho == Approx(2.5));
  CHECK(m.energy == Approx(1.5));
  CHECK_THROWS_AS(gt_flux(1.5, g, h), std::invalid_argument);
  CHECK_THROWS_AS(gt_flux(-0.1, g, h), std::invalid_argument);
}

TEST_CASE("numerical flux window checks") {
  const State u{1, 0, 2.5};
  const std::array<State, 2> two{u, u};
  CHECK_THROWS_AS(numerical_flux(BaseFlux::ec4, two, kGas), std::invalid_argument);
  CHECK_NOTHROW(numerical_flux(BaseFlux::llf, two, kGas));
}

TEST_CASE("log mean") {
  CHECK(log_mean(2.0, 2.0) == Approx(2.0));
  CHECK(log_mean(1.0, std::exp(1.0)) == Approx(std::exp(1.0) - 1.0));
  CHECK(log_mean(1.0, 1.0 + 1e-9) == Approx(1.0 + 5e-10).epsilon(1e-14));
  CHECK(log_mean(3.0, 5.0) == Approx(log_mean(5.0, 3.0)));
}
