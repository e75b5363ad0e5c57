#pragma once

#include <functional>
#include <optional>

#include "sqg/model.hpp"

namespace sqg {

struct IntegratorConfig {
  double courant = 0.5;
  double dt_max = 1e-2;
  std::optional<double> dt_fixed;
  double t_end = 0.0;
  double callback_interval = 0.1;

  void validate() const;
};

/// Receives an immutable snapshot at every scheduled output time.
using StepCallback = std::function<void(double t, const State& snapshot)>;

namespace timestepper {

/// Largest velocity magnitude over the physical grid.
double max_speed(const State& state);

/// min(dt_max, courant * dx / max(|v|_inf, 1e-12)).
double cfl_dt(const State& state, const IntegratorConfig& cfg);

/// One classical RK4 step. Throws NumericalOverflowError carrying the stage
/// index and the start time of the step if any stage is non-finite.
State rk4_step(const State& state, double dt);

/// Integrates from state.t to cfg.t_end. The callback fires at state.t and
/// at state.t + m * callback_interval for every m with that time <= t_end;
/// steps are shortened to land on those times and on t_end exactly.
/// On overflow the error is rethrown with last_good_t set to the most recent
/// callback time.
State integrate(const State& state, const IntegratorConfig& cfg, const StepCallback& callback = {});

}  // namespace timestepper
}  // namespace sqg
