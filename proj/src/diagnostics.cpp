#include "sqg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "sqg/errors.hpp"

namespace sqg::diagnostics {

double modified_energy(const SpectralField& theta, double alpha) {
  const Grid& g = *theta.grid;
  const double a2 = alpha * alpha;
  double acc = 0.0;
  for (std::size_t s = 0; s < g.size(); ++s) acc += (1.0 + a2 * g.k2_phys(s)) * std::norm(theta.coeffs[s]);
  return acc;
}

double blowup_indicator(const SpectralField& theta, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("blow-up indicator needs alpha > 0");
  return alpha * std::sqrt(spectral::grad_l2_norm_sq(theta));
}

double blowup_indicator_sq(const SpectralField& theta, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("blow-up indicator needs alpha > 0");
  return alpha * alpha * spectral::grad_l2_norm_sq(theta);
}

double h1_norm(const SpectralField& f) {
  return std::sqrt(spectral::l2_norm_sq(f) + spectral::grad_l2_norm_sq(f));
}

DiagnosticsRecord record(const State& state) {
  const double alpha = state.params.alpha;
  const SpectralField theta = model::recover_theta(state);
  const PhysicalField phys = spectral::inverse(theta);

  DiagnosticsRecord r;
  r.t = state.t;
  const double l2sq = spectral::l2_norm_sq(theta);
  const double gradsq = spectral::grad_l2_norm_sq(theta);
  r.energy_modified = l2sq + alpha * alpha * gradsq;
  r.l2 = std::sqrt(l2sq);
  r.grad_l2 = std::sqrt(gradsq);
  const auto [lo, hi] = std::minmax_element(phys.values.begin(), phys.values.end());
  r.linf_min = *lo;
  r.linf_max = *hi;
  r.blowup_indicator = alpha * r.grad_l2;
  r.blowup_indicator_sq = alpha * alpha * gradsq;
  r.mean = theta.coeffs[0].real();
  return r;
}

MaxPrincipleReport max_principle_report(const std::vector<DiagnosticsRecord>& series, double theta0_linf,
                                        double theta0_min) {
  if (series.empty()) throw ConfigError("max_principle_report needs a non-empty series");
  MaxPrincipleReport rep;
  rep.min_value = std::numeric_limits<double>::infinity();
  for (const auto& r : series) {
    rep.max_linf = std::max({rep.max_linf, std::abs(r.linf_max), std::abs(r.linf_min)});
    rep.min_value = std::min(rep.min_value, r.linf_min);
  }
  rep.violation = std::max(0.0, rep.max_linf - theta0_linf);
  rep.positivity_checked = theta0_min >= 0.0;
  return rep;
}

double convergence_metric(const SpectralField& theta_a, const SpectralField& theta_b, double alpha) {
  if (theta_a.grid->n() != theta_b.grid->n()) {
    throw ConfigError("convergence_metric: grid mismatch (" + std::to_string(theta_a.grid->n()) + " vs " +
                      std::to_string(theta_b.grid->n()) + "); pad the coarser field first");
  }
  SpectralField diff = theta_a;
  for (std::size_t s = 0; s < diff.coeffs.size(); ++s) diff.coeffs[s] -= theta_b.coeffs[s];
  return modified_energy(diff, alpha);
}

SpectralField spectral_pad(const SpectralField& f, int n_target) {
  const int n = f.grid->n();
  if (n_target < n) throw ConfigError("spectral_pad cannot downsample");
  if (n_target == n) return f;
  SpectralField out(make_grid(n_target));
  const Grid& src = *f.grid;
  for (std::size_t s = 0; s < src.size(); ++s) {
    const int k1 = src.k1(s);
    const int k2 = src.k2(s);
    // The source Nyquist line maps to +-n/2 on the finer grid; split it
    // between both images so the embedding stays real.
    const bool ny1 = k1 == -n / 2;
    const bool ny2 = k2 == -n / 2;
    const double w = (ny1 ? 0.5 : 1.0) * (ny2 ? 0.5 : 1.0);
    for (int s1 : {1, -1}) {
      if (!ny1 && s1 == -1) continue;
      for (int s2 : {1, -1}) {
        if (!ny2 && s2 == -1) continue;
        out.at(s1 * k1, s2 * k2) += w * f.coeffs[s];
      }
    }
  }
  return out;
}

double fine_linf(const SpectralField& f, int refine) {
  const PhysicalField phys = spectral::inverse(spectral_pad(f, f.grid->n() * refine));
  double m = 0.0;
  for (double v : phys.values) m = std::max(m, std::abs(v));
  return m;
}

std::vector<std::pair<int, double>> energy_spectrum(const SpectralField& theta) {
  const Grid& g = *theta.grid;
  const int shells = g.n() / 2;
  std::vector<std::pair<int, double>> out;
  out.reserve(shells);
  for (int m = 1; m <= shells; ++m) out.emplace_back(m, 0.0);
  for (std::size_t s = 0; s < g.size(); ++s) {
    const double k = std::hypot(static_cast<double>(g.k1(s)), static_cast<double>(g.k2(s)));
    // Shell m covers [m - 1/2, m + 1/2).
    const int m = static_cast<int>(std::floor(k + 0.5));
    if (m >= 1 && m <= shells) out[m - 1].second += std::norm(theta.coeffs[s]);
  }
  return out;
}

std::string csv_header() {
  return "t,energy_modified,l2,grad_l2,linf_max,linf_min,blowup_indicator,blowup_indicator_sq,mean";
}

std::string csv_row(const DiagnosticsRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.t, r.energy_modified, r.l2,
                r.grad_l2, r.linf_max, r.linf_min, r.blowup_indicator, r.blowup_indicator_sq, r.mean);
  return buf;
}

}  // namespace sqg::diagnostics
