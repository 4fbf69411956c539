#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace gtflux {

/// Triple of conserved quantities (rho, rho*v, E). Used for cell states and
/// for interface fluxes (mass, momentum, energy rates).
struct Vec3 {
  double rho{0.0};
  double mom{0.0};
  double energy{0.0};

  constexpr double operator[](std::size_t i) const {
    return i == 0 ? rho : (i == 1 ? mom : energy);
  }
  constexpr double& operator[](std::size_t i) {
    return i == 0 ? rho : (i == 1 ? mom : energy);
  }

  constexpr Vec3& operator+=(const Vec3& o) {
    rho += o.rho;
    mom += o.mom;
    energy += o.energy;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    rho -= o.rho;
    mom -= o.mom;
    energy -= o.energy;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    rho *= s;
    mom *= s;
    energy *= s;
    return *this;
  }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.rho, -a.mom, -a.energy}; }

constexpr double dot(const Vec3& a, const Vec3& b) {
  return a.rho * b.rho + a.mom * b.mom + a.energy * b.energy;
}
inline double norm2(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double max_abs(const Vec3& a) {
  return std::max({std::abs(a.rho), std::abs(a.mom), std::abs(a.energy)});
}

using State = Vec3;
using Flux = Vec3;

/// Primitive description of a state.
struct Primitive {
  double rho{0.0};
  double v{0.0};
  double p{0.0};
};

struct GasModel {
  double gamma{1.4};

  explicit GasModel(double g = 1.4) : gamma(g) {
    if (!(g > 1.0)) throw std::invalid_argument("GasModel: gamma must exceed 1");
  }
};

struct EntropyPairValue {
  double U{0.0};  ///< entropy density -rho*S
  double F{0.0};  ///< entropy flux -rho*v*S
};

/// Raised by physics routines when fed a state outside the admissible set.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A cell state left the admissible set during a time step.
class PositivityError : public std::runtime_error {
 public:
  PositivityError(const std::string& what, long cell)
      : std::runtime_error(what + " (cell " + std::to_string(cell) + ")"), cell_(cell) {}
  long cell() const noexcept { return cell_; }

 private:
  long cell_;
};

/// Half-cell state was inadmissible for the dissipative flux: CFL too large.
class CflError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Density or pressure at or below this value counts as inadmissible.
inline constexpr double kAdmissibilityFloor = 1e-12;

double pressure(const State& u, const GasModel& gas);
Flux physical_flux(const State& u, const GasModel& gas);
EntropyPairValue entropy_pair(const State& u, const GasModel& gas);
Vec3 entropy_variables(const State& u, const GasModel& gas);
double max_wave_speed(const State& u, const GasModel& gas);

/// Entropy flux potential psi = w.f - F.
double entropy_potential(const State& u, const GasModel& gas);

/// True when rho and p both exceed kAdmissibilityFloor (no exceptions).
bool is_admissible(const State& u, const GasModel& gas) noexcept;

State to_conserved(const Primitive& w, const GasModel& gas);
Primitive to_primitive(const State& u, const GasModel& gas);

}  // namespace gtflux
