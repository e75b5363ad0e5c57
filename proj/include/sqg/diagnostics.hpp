#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sqg/model.hpp"

namespace sqg {

struct DiagnosticsRecord {
  double t = 0.0;
  double energy_modified = 0.0;
  double l2 = 0.0;
  double grad_l2 = 0.0;
  double linf_max = 0.0;
  double linf_min = 0.0;
  double blowup_indicator = 0.0;
  double blowup_indicator_sq = 0.0;
  double mean = 0.0;
};

struct MaxPrincipleReport {
  double max_linf = 0.0;
  /// max_t |theta(t)|_inf - |theta0|_inf; positive means the bound was exceeded.
  double violation = 0.0;
  /// Most negative grid value seen. Only meaningful when positivity_checked.
  double min_value = 0.0;
  bool positivity_checked = false;
};

namespace diagnostics {

/// int (theta^2 + alpha^2 |grad theta|^2) dx.
double modified_energy(const SpectralField& theta, double alpha);

/// alpha * |grad theta|_L2. Throws ConfigError for alpha <= 0.
double blowup_indicator(const SpectralField& theta, double alpha);
/// alpha^2 * |grad theta|_L2^2. Throws ConfigError for alpha <= 0.
double blowup_indicator_sq(const SpectralField& theta, double alpha);

/// sqrt(|f|_L2^2 + |grad f|_L2^2), the H^1 norm used for all a-priori bounds.
double h1_norm(const SpectralField& f);

/// Full record for one state. Indicators are reported as 0 when alpha = 0.
DiagnosticsRecord record(const State& state);

/// theta0_min is the smallest initial value; positivity is checked when it
/// is non-negative.
MaxPrincipleReport max_principle_report(const std::vector<DiagnosticsRecord>& series, double theta0_linf,
                                        double theta0_min = -1.0);

/// |a-b|_L2^2 + alpha^2 |grad(a-b)|_L2^2. Both fields must share a grid size.
double convergence_metric(const SpectralField& theta_a, const SpectralField& theta_b, double alpha);

/// Zero-padded embedding into an n_target grid. Throws ConfigError when
/// n_target is smaller than the source size or odd.
SpectralField spectral_pad(const SpectralField& f, int n_target);

/// Sup norm evaluated on a refined grid (source spacing divided by refine).
double fine_linf(const SpectralField& f, int refine = 8);

/// Shell sums E_m over m - 1/2 <= |k| < m + 1/2 for m = 1..n/2.
std::vector<std::pair<int, double>> energy_spectrum(const SpectralField& theta);

std::string csv_header();
/// 17 significant digits, columns in DiagnosticsRecord order.
std::string csv_row(const DiagnosticsRecord& r);

}  // namespace diagnostics
}  // namespace sqg
