#include "gtflux/fluxes.hpp"

#include <algorithm>
#include <stdexcept>

namespace gtflux {

const char* to_string(BaseFlux kind) {
  switch (kind) {
    case BaseFlux::llf: return "llf";
    case BaseFlux::ec2: return "ec2";
    case BaseFlux::ec4: return "ec4";
  }
  return "?";
}

double log_mean(double a, double b) {
  // u = ((a - b) / (a + b))^2; series of artanh for small u.
  const double u = (a * (a - 2.0 * b) + b * b) / (a * (a + 2.0 * b) + b * b);
  if (u < 1e-4) return (a + b) * 52.5 / (105.0 + u * (35.0 + u * (21.0 + u * 15.0)));
  return (a - b) / std::log(a / b);
}

Flux llf_flux(const State& ul, const State& ur, const GasModel& gas) {
  const double c = std::max(max_wave_speed(ul, gas), max_wave_speed(ur, gas));
  return 0.5 * (physical_flux(ul, gas) + physical_flux(ur, gas)) - 0.5 * c * (ur - ul);
}

double llf_entropy_flux(const State& ul, const State& ur, const GasModel& gas) {
  const double c = std::max(max_wave_speed(ul, gas), max_wave_speed(ur, gas));
  const auto el = entropy_pair(ul, gas);
  const auto er = entropy_pair(ur, gas);
  return 0.5 * (el.F + er.F) - 0.5 * c * (er.U - el.U);
}

Flux ec_flux2(const State& ul, const State& ur, const GasModel& gas) {
  const double pl = pressure(ul, gas);
  const double pr = pressure(ur, gas);
  if (!(ul.rho > kAdmissibilityFloor) || !(ur.rho > kAdmissibilityFloor) ||
      !(pl > kAdmissibilityFloor) || !(pr > kAdmissibilityFloor))
    throw DomainError("ec_flux2: inadmissible state");

  const double vl = ul.mom / ul.rho;
  const double vr = ur.mom / ur.rho;
  const double betal = 0.5 * ul.rho / pl;
  const double betar = 0.5 * ur.rho / pr;

  const double rho_ln = log_mean(ul.rho, ur.rho);
  const double beta_ln = log_mean(betal, betar);
  const double v_avg = 0.5 * (vl + vr);
  const double v2_avg = 0.5 * (vl * vl + vr * vr);
  const double p_hat = 0.5 * (ul.rho + ur.rho) / (betal + betar);

  const double f_rho = rho_ln * v_avg;
  const double f_mom = p_hat + v_avg * f_rho;
  const double f_energy =
      (1.0 / (2.0 * (gas.gamma - 1.0) * beta_ln) - 0.5 * v2_avg) * f_rho + v_avg * f_mom;
  return {f_rho, f_mom, f_energy};
}

double ec2_entropy_flux(const State& ul, const State& ur, const GasModel& gas) {
  const Vec3 w_avg = 0.5 * (entropy_variables(ul, gas) + entropy_variables(ur, gas));
  const double psi_avg = 0.5 * (entropy_potential(ul, gas) + entropy_potential(ur, gas));
  return dot(w_avg, ec_flux2(ul, ur, gas)) - psi_avg;
}

Flux ec_flux4(std::span<const State, 4> u, const GasModel& gas) {
  return (4.0 / 3.0) * ec_flux2(u[1], u[2], gas) -
         (1.0 / 6.0) * (ec_flux2(u[0], u[2], gas) + ec_flux2(u[1], u[3], gas));
}

double ec4_entropy_flux(std::span<const State, 4> u, const GasModel& gas) {
  return (4.0 / 3.0) * ec2_entropy_flux(u[1], u[2], gas) -
         (1.0 / 6.0) * (ec2_entropy_flux(u[0], u[2], gas) + ec2_entropy_flux(u[1], u[3], gas));
}

Flux gt_flux(double alpha, const Flux& g, const Flux& h) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("gt_flux: alpha outside [0, 1]");
  return alpha * g + (1.0 - alpha) * h;
}

namespace {

void check_window(BaseFlux kind, std::span<const State> window) {
  if (window.size() != static_cast<std::size_t>(2 * stencil_half_width(kind)))
    throw std::invalid_argument(std::string("window size mismatch for ") + to_string(kind));
}

}  // namespace

Flux numerical_flux(BaseFlux kind, std::span<const State> window, const GasModel& gas) {
  check_window(kind, window);
  switch (kind) {
    case BaseFlux::llf: return llf_flux(window[0], window[1], gas);
    case BaseFlux::ec2: return ec_flux2(window[0], window[1], gas);
    case BaseFlux::ec4: return ec_flux4(window.first<4>(), gas);
  }
  throw std::invalid_argument("unknown flux kind");
}

double numerical_entropy_flux(BaseFlux kind, std::span<const State> window, const GasModel& gas) {
  check_window(kind, window);
  switch (kind) {
    case BaseFlux::llf: return llf_entropy_flux(window[0], window[1], gas);
    case BaseFlux::ec2: return ec2_entropy_flux(window[0], window[1], gas);
    case BaseFlux::ec4: return ec4_entropy_flux(window.first<4>(), gas);
  }
  throw std::invalid_argument("unknown flux kind");
}

}  // namespace gtflux
