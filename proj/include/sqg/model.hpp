#pragma once

// Right-hand side of the inviscid alpha-regularised SQG system
//
//   d/dt theta_tilde + div(v theta) = 0,
//   (1 - alpha^2 Lap) theta = theta_tilde,
//   (-Lap)^{1/2} psi = theta,   v = grad_perp psi,
//
// written as the functional ODE d/dt theta_tilde = F(theta_tilde).
// alpha = 0 recovers the unregularised SQG equations.

#include <utility>

#include "sqg/spectral.hpp"

namespace sqg {

struct ModelParams {
  double alpha = 0.0;
  bool dealias_nonlinearity = true;

  /// Throws ConfigError unless 0 <= alpha <= 1.
  void validate() const;
};

struct State {
  SpectralField theta_tilde;
  double t = 0.0;
  ModelParams params;
};

/// Builds the prognostic state from physical initial data theta0.
State make_state(const PhysicalField& theta0, const ModelParams& params, double t = 0.0);

using Velocity = std::pair<SpectralField, SpectralField>;

namespace model {

SpectralField recover_theta(const State& state);

/// Velocity of the mean-free part of theta; the zero mode never contributes.
Velocity velocity(const SpectralField& theta);

/// Pseudo-spectral div(v theta), dealiased. Inputs are expected to be
/// band-limited to the dealias mask. Throws NumericalOverflowError if the
/// physical-space products are not finite.
SpectralField nonlinear_divergence(const SpectralField& theta, const Velocity& v);

SpectralField rhs(const State& state);

}  // namespace model
}  // namespace sqg
