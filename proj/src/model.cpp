#include "sqg/model.hpp"

#include <cmath>
#include <string>

#include "sqg/errors.hpp"

namespace sqg {

void ModelParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ConfigError("alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
}

State make_state(const PhysicalField& theta0, const ModelParams& params, double t) {
  params.validate();
  return State{spectral::helmholtz_apply(spectral::forward(theta0), params.alpha), t, params};
}

namespace model {

SpectralField recover_theta(const State& state) {
  return spectral::helmholtz_inverse(state.theta_tilde, state.params.alpha);
}

Velocity velocity(const SpectralField& theta) {
  // inv_frac_laplacian_half already drops the zero mode.
  return spectral::perp_gradient(spectral::inv_frac_laplacian_half(theta));
}

SpectralField nonlinear_divergence(const SpectralField& theta, const Velocity& v) {
  const PhysicalField th = spectral::inverse(theta);
  PhysicalField f1 = spectral::inverse(v.first);
  PhysicalField f2 = spectral::inverse(v.second);
  for (std::size_t s = 0; s < th.values.size(); ++s) {
    f1.values[s] *= th.values[s];
    f2.values[s] *= th.values[s];
    if (!std::isfinite(f1.values[s]) || !std::isfinite(f2.values[s])) {
      throw NumericalOverflowError("non-finite flux v*theta in nonlinear term");
    }
  }
  return spectral::dealias(spectral::divergence(spectral::forward(f1), spectral::forward(f2)));
}

SpectralField rhs(const State& state) {
  SpectralField theta = recover_theta(state);
  Velocity v = velocity(theta);
  if (state.params.dealias_nonlinearity) {
    theta = spectral::dealias(theta);
    v.first = spectral::dealias(v.first);
    v.second = spectral::dealias(v.second);
  }
  SpectralField out = nonlinear_divergence(theta, v);
  out *= -1.0;
  out.coeffs[0] = Complex{};
  return out;
}

}  // namespace model
}  // namespace sqg
