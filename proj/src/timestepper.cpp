#include "sqg/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqg/errors.hpp"

namespace sqg {

void IntegratorConfig::validate() const {
  if (!(courant > 0.0 && courant <= 1.0)) throw ConfigError("integrator.courant must be in (0, 1]");
  if (!(dt_max > 0.0)) throw ConfigError("integrator.dt_max must be positive");
  if (dt_fixed && !(*dt_fixed > 0.0)) throw ConfigError("integrator.dt_fixed must be positive");
  if (!(callback_interval > 0.0)) throw ConfigError("integrator.callback_interval must be positive");
}

namespace timestepper {

namespace {

State axpy(const State& base, double h, const SpectralField& k) {
  State out = base;
  for (std::size_t s = 0; s < out.theta_tilde.coeffs.size(); ++s) out.theta_tilde.coeffs[s] += h * k.coeffs[s];
  return out;
}

SpectralField stage(const State& s, int index, double t0) {
  try {
    SpectralField k = model::rhs(s);
    require_finite(k, "RK stage");
    return k;
  } catch (const NumericalOverflowError& e) {
    throw NumericalOverflowError("RK4 stage " + std::to_string(index) + " at t=" + std::to_string(t0) + ": " + e.what(),
                                 t0, index, t0);
  }
}

}  // namespace

double max_speed(const State& state) {
  const Velocity v = model::velocity(model::recover_theta(state));
  const PhysicalField v1 = spectral::inverse(v.first);
  const PhysicalField v2 = spectral::inverse(v.second);
  double vmax = 0.0;
  for (std::size_t s = 0; s < v1.values.size(); ++s) {
    vmax = std::max(vmax, std::hypot(v1.values[s], v2.values[s]));
  }
  return vmax;
}

double cfl_dt(const State& state, const IntegratorConfig& cfg) {
  constexpr double kSpeedFloor = 1e-12;
  const double vmax = std::max(max_speed(state), kSpeedFloor);
  return std::min(cfg.dt_max, cfg.courant * state.theta_tilde.grid->dx() / vmax);
}

State rk4_step(const State& state, double dt) {
  const double t0 = state.t;
  const SpectralField k1 = stage(state, 1, t0);
  const SpectralField k2 = stage(axpy(state, 0.5 * dt, k1), 2, t0);
  const SpectralField k3 = stage(axpy(state, 0.5 * dt, k2), 3, t0);
  const SpectralField k4 = stage(axpy(state, dt, k3), 4, t0);

  State out = state;
  const double w = dt / 6.0;
  for (std::size_t s = 0; s < out.theta_tilde.coeffs.size(); ++s) {
    out.theta_tilde.coeffs[s] += w * (k1.coeffs[s] + 2.0 * k2.coeffs[s] + 2.0 * k3.coeffs[s] + k4.coeffs[s]);
  }
  out.t = t0 + dt;
  return out;
}

State integrate(const State& state, const IntegratorConfig& cfg, const StepCallback& callback) {
  cfg.validate();
  if (cfg.t_end < state.t) throw ConfigError("t_end precedes the initial time");

  const double t0 = state.t;
  // Relative slack for deciding that an output time has been reached.
  const double eps = 1e-12 * std::max(1.0, std::abs(cfg.t_end));
  long next_index = 0;
  auto output_time = [&](long m) { return std::min(t0 + static_cast<double>(m) * cfg.callback_interval, cfg.t_end); };
  auto emit_due = [&](const State& s) {
    while (next_index >= 0 && t0 + static_cast<double>(next_index) * cfg.callback_interval <= s.t + eps) {
      if (callback) callback(s.t, s);
      ++next_index;
      if (t0 + static_cast<double>(next_index) * cfg.callback_interval > cfg.t_end + eps) next_index = -1;
    }
  };

  State current = state;
  double last_good = current.t;
  emit_due(current);

  while (current.t < cfg.t_end - eps) {
    double dt = cfg.dt_fixed ? *cfg.dt_fixed : cfl_dt(current, cfg);
    double target = cfg.t_end;
    if (next_index >= 0) target = std::min(target, output_time(next_index));
    bool land = false;
    if (current.t + dt >= target - eps) {
      dt = target - current.t;
      land = true;
    }
    try {
      current = rk4_step(current, dt);
    } catch (const NumericalOverflowError& e) {
      throw NumericalOverflowError(e.what(), e.t(), e.stage(), last_good);
    }
    if (land) current.t = target;
    if (next_index >= 0 && current.t >= output_time(next_index) - eps) {
      emit_due(current);
      last_good = current.t;
    }
  }
  return current;
}

}  // namespace timestepper
}  // namespace sqg
