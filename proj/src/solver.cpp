#include "gtflux/solver.hpp"

#include <algorithm>
#include <cmath>

namespace gtflux {

Limiter constant_limiter(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("constant_limiter: alpha outside [0, 1]");
  Limiter lim;
  lim.name = "constant";
  lim.half_width = 0;
  lim.alpha = [alpha](const StepContext& ctx) {
    return std::vector<double>(ctx.u.n_cells() + 1, alpha);
  };
  return lim;
}

int scheme_ghosts(const SchemeConfig& scheme) {
  const int flux_ghosts =
      std::max(required_ghosts(scheme.g_flux), required_ghosts(scheme.h_flux));
  return std::max(flux_ghosts, scheme.limiter.half_width) + 1;
}

namespace {

std::vector<double> evaluate_alpha(const Limiter& limiter, const StepContext& ctx, BoundaryKind bc) {
  if (!limiter.alpha) throw std::invalid_argument("scheme has no alpha strategy");
  std::vector<double> alpha = limiter.alpha(ctx);
  const std::size_t n = ctx.u.n_cells();
  if (alpha.size() != n + 1) throw std::logic_error("alpha strategy returned wrong size");
  for (double a : alpha)
    if (!(a >= 0.0 && a <= 1.0)) throw std::logic_error("alpha strategy returned a value outside [0, 1]");
  // Interfaces 0 and n coincide on a periodic grid; different values would break conservation.
  if (bc == BoundaryKind::periodic && alpha.front() != alpha.back())
    throw std::logic_error("alpha strategy returned different values for the periodic interface");
  if (bc == BoundaryKind::extrapolation) {
    // Interfaces whose limiter window leaves the domain use the dissipative flux.
    const std::size_t hw = static_cast<std::size_t>(std::max(limiter.half_width, 1));
    for (std::size_t i = 0; i <= n; ++i)
      if (i < hw || i + hw > n) alpha[i] = 1.0;
  }
  return alpha;
}

struct Blend {
  std::vector<Flux> flux;
  std::vector<double> entropy;
};

Blend blend(const std::vector<double>& alpha, const InterfaceFluxes& g, const InterfaceFluxes& h,
            bool with_entropy) {
  Blend b;
  b.flux.resize(alpha.size());
  if (with_entropy) b.entropy.resize(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    b.flux[i] = gt_flux(alpha[i], g.flux[i], h.flux[i]);
    if (with_entropy) b.entropy[i] = alpha[i] * g.entropy[i] + (1.0 - alpha[i]) * h.entropy[i];
  }
  return b;
}

void fill_record(StepRecord& rec, const FieldSnapshot& field, double dt,
                 const std::vector<double>& alpha, const InterfaceFluxes& g,
                 const InterfaceFluxes& h, const std::vector<Flux>& flux,
                 const std::vector<double>& entropy) {
  rec.time = field.time;
  rec.dt = dt;
  rec.interfaces.resize(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    auto& r = rec.interfaces[i];
    r.g = g.flux[i];
    r.h = h.flux[i];
    r.alpha = alpha[i];
    r.flux = flux[i];
    r.G = g.entropy[i];
    r.H = h.entropy[i];
    r.entropy_flux = entropy[i];
  }
}

FieldSnapshot step_per_step_alpha(const FieldSnapshot& field, const RunConfig& config, double dt,
                                  const GasModel& gas, StepRecord* record) {
  const auto& scheme = config.scheme;
  const bool with_entropy = record != nullptr || scheme.limiter.needs_entropy_fluxes;
  const PaddedField u(field.states, scheme_ghosts(scheme), config.bc);
  const double lambda = dt / field.grid.dx();

  const InterfaceFluxes g =
      rk_quadrature_flux(scheme.g_flux, scheme.g_quad, u, lambda, gas, config.exec, with_entropy);
  const InterfaceFluxes h =
      rk_quadrature_flux(scheme.h_flux, scheme.h_quad, u, lambda, gas, config.exec, with_entropy);
  const StepContext ctx{field.grid, u, g, h, dt, gas, config.exec};
  const std::vector<double> alpha = evaluate_alpha(scheme.limiter, ctx, config.bc);
  const Blend b = blend(alpha, g, h, with_entropy);

  FieldSnapshot next = conservative_step(field, b.flux, dt, gas);
  if (record) fill_record(*record, field, dt, alpha, g, h, b.flux, b.entropy);
  return next;
}

FieldSnapshot step_per_substage_alpha(const FieldSnapshot& field, const RunConfig& config, double dt,
                                      const GasModel& gas, StepRecord* record) {
  const auto& scheme = config.scheme;
  if (scheme.g_quad != scheme.h_quad)
    throw std::invalid_argument("per-substage alpha needs the same quadrature for g and h");
  const bool with_entropy = record != nullptr || scheme.limiter.needs_entropy_fluxes;
  const double lambda = dt / field.grid.dx();
  const auto weights = quadrature_weights(scheme.g_quad);
  const std::size_t n_if = field.states.size() + 1;

  std::vector<Flux> acc_flux(n_if);
  std::vector<double> acc_entropy(with_entropy ? n_if : 0, 0.0);

  const PaddedField u0(field.states, scheme_ghosts(scheme), config.bc);
  PaddedField stage = u0;
  for (std::size_t s = 0; s < weights.size(); ++s) {
    const InterfaceFluxes g = interface_fluxes(scheme.g_flux, stage, gas, config.exec, with_entropy);
    const InterfaceFluxes h = interface_fluxes(scheme.h_flux, stage, gas, config.exec, with_entropy);
    const StepContext ctx{field.grid, stage, g, h, dt, gas, config.exec};
    const std::vector<double> alpha = evaluate_alpha(scheme.limiter, ctx, config.bc);
    const Blend b = blend(alpha, g, h, with_entropy);

    for (std::size_t i = 0; i < n_if; ++i) {
      acc_flux[i] += weights[s] * b.flux[i];
      if (with_entropy) acc_entropy[i] += weights[s] * b.entropy[i];
    }
    if (record && s == 0) fill_record(*record, field, dt, alpha, g, h, b.flux, b.entropy);

    if (s + 1 == weights.size()) break;
    PaddedField euler = forward_euler_stage(stage, b.flux, lambda, gas, config.exec);
    if (scheme.g_quad == TimeQuadrature::ssprk33 && s == 1)
      stage = combine_stages(0.75, u0, 0.25, euler, gas, config.exec);
    else
      stage = std::move(euler);
  }

  FieldSnapshot next = conservative_step(field, acc_flux, dt, gas);
  if (record) {
    for (std::size_t i = 0; i < n_if; ++i) {
      record->interfaces[i].flux = acc_flux[i];
      record->interfaces[i].entropy_flux = acc_entropy[i];
    }
  }
  return next;
}

}  // namespace

FieldSnapshot advance_step(const FieldSnapshot& field, const RunConfig& config, double dt,
                           const GasModel& gas, StepRecord* record) {
  if (config.scheme.alpha_per_substage) return step_per_substage_alpha(field, config, dt, gas, record);
  return step_per_step_alpha(field, config, dt, gas, record);
}

Trajectory advance(const RunConfig& config, const FieldSnapshot& initial, const GasModel& gas) {
  if (!(config.t_end >= initial.time)) throw std::invalid_argument("advance: t_end before initial time");
  if (const long bad = first_inadmissible(initial.states, gas); bad >= 0)
    throw PositivityError("initial condition inadmissible", bad);

  Trajectory traj;
  traj.snapshots.push_back(initial);
  FieldSnapshot current = initial;

  while (current.time < config.t_end) {
    if (traj.step_count >= config.max_steps)
      throw StepBudgetError("step budget exhausted before t_end");
    double dt = compute_dt(current, config.cfl, gas);
    bool last = current.time + dt >= config.t_end;
    if (last) dt = config.t_end - current.time;

    StepRecord rec;
    FieldSnapshot next;
    // A stage whose wave speed outgrew the step breaks the half-CFL bound; retry with half the step.
    for (int attempt = 0;; ++attempt) {
      try {
        next = advance_step(current, config, dt, gas, config.record ? &rec : nullptr);
        break;
      } catch (const CflError&) {
        if (attempt >= config.max_rejections) throw;
        dt *= 0.5;
        last = false;
        ++traj.rejected_steps;
        rec = StepRecord{};
      }
    }
    next.time = last ? config.t_end : current.time + dt;
    ++traj.step_count;

    if (config.record) {
      traj.steps.push_back(std::move(rec));
      traj.snapshots.push_back(next);
    }
    current = std::move(next);
  }
  if (!config.record && traj.step_count > 0) traj.snapshots.push_back(current);
  return traj;
}

}  // namespace gtflux
