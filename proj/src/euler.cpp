#include "gtflux/euler.hpp"

#include <algorithm>

namespace gtflux {

namespace {

void require_density(const State& u) {
  if (!(u.rho > 0.0)) throw DomainError("non-positive density");
}

void require_admissible(const State& u, double p) {
  if (!(u.rho > kAdmissibilityFloor)) throw DomainError("inadmissible density");
  if (!(p > kAdmissibilityFloor)) throw DomainError("inadmissible pressure");
}

}  // namespace

double pressure(const State& u, const GasModel& gas) {
  require_density(u);
  return (gas.gamma - 1.0) * (u.energy - 0.5 * u.mom * u.mom / u.rho);
}

Flux physical_flux(const State& u, const GasModel& gas) {
  const double p = pressure(u, gas);
  const double v = u.mom / u.rho;
  return {u.mom, u.mom * v + p, v * (u.energy + p)};
}

EntropyPairValue entropy_pair(const State& u, const GasModel& gas) {
  const double p = pressure(u, gas);
  require_admissible(u, p);
  const double s = std::log(p) - gas.gamma * std::log(u.rho);
  return {-u.rho * s, -u.mom * s};
}

Vec3 entropy_variables(const State& u, const GasModel& gas) {
  const double p = pressure(u, gas);
  require_admissible(u, p);
  const double g = gas.gamma;
  const double s = std::log(p) - g * std::log(u.rho);
  const double v = u.mom / u.rho;
  const double beta = (g - 1.0) * u.rho / p;
  return {g - s - 0.5 * beta * v * v, beta * v, -beta};
}

double entropy_potential(const State& u, const GasModel& gas) {
  // For this pair psi = (gamma - 1) * rho * v; evaluated from the definition
  // to stay tied to w and F.
  const Vec3 w = entropy_variables(u, gas);
  const Flux f = physical_flux(u, gas);
  return dot(w, f) - entropy_pair(u, gas).F;
}

double max_wave_speed(const State& u, const GasModel& gas) {
  const double p = pressure(u, gas);
  require_admissible(u, p);
  return std::abs(u.mom / u.rho) + std::sqrt(gas.gamma * p / u.rho);
}

bool is_admissible(const State& u, const GasModel& gas) noexcept {
  if (!(u.rho > kAdmissibilityFloor) || !std::isfinite(u.rho)) return false;
  const double p = (gas.gamma - 1.0) * (u.energy - 0.5 * u.mom * u.mom / u.rho);
  return p > kAdmissibilityFloor && std::isfinite(p) && std::isfinite(u.mom);
}

State to_conserved(const Primitive& w, const GasModel& gas) {
  return {w.rho, w.rho * w.v, w.p / (gas.gamma - 1.0) + 0.5 * w.rho * w.v * w.v};
}

Primitive to_primitive(const State& u, const GasModel& gas) {
  return {u.rho, u.mom / u.rho, pressure(u, gas)};
}

}  // namespace gtflux
