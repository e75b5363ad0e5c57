#pragma once

// Ensembles of regularised runs over a decreasing alpha sequence, and the
// extrapolation of the blow-up indicator alpha |grad theta^alpha| to alpha -> 0.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqg/diagnostics.hpp"
#include "sqg/initial_conditions.hpp"

namespace sqg {

struct SweepConfig {
  std::vector<double> alphas = default_alphas();
  /// Lower bound on the grid size chosen by resolution_for.
  int n_min = 8;
  double t_end = 0.0;
  std::vector<double> sample_times;
  IcSpec base_ic;
  int parallelism = 1;
  double courant = 0.5;
  double dt_max = 1e-2;
  /// Verdict threshold; defaults to 0.05 |theta0|_H1 when unset.
  std::optional<double> threshold;

  /// alpha_j = alpha0 * 2^-j, j = 0..levels-1.
  static std::vector<double> default_alphas(double alpha0 = 0.1, int levels = 6);
  void validate() const;
};

/// True for even n >= 8 of the form 2^a 5^b 7^c. Multiples of 3 are left out
/// because floor(n/3) = n/3 there and the 2/3-rule mask would alias.
bool supported_size(int n);

/// Smallest supported n with n >= max(n_min, ceil(4 / alpha)).
int resolution_for(double alpha, int n_min = 8);

struct RunSeries {
  double alpha = 0.0;
  int n = 0;
  /// One record per completed sample time, in sample_times order.
  std::vector<DiagnosticsRecord> records;
  bool truncated = false;
  double truncated_at = 0.0;
  std::string error;
};

struct LiminfEstimate {
  double t = 0.0;
  double epsilon_hat = 0.0;
  double fit_residual = 0.0;
  double slope = 0.0;
  int levels = 0;
};

enum class Verdict { NoBlowupEvidence, BlowupIndicated, Inconclusive };

std::string to_string(Verdict v);

struct SweepResult {
  SweepConfig config;
  std::vector<RunSeries> runs;  // same order as config.alphas
  std::vector<LiminfEstimate> liminf_estimates;
  double theta0_h1 = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  double eps_sup = 0.0;
  std::string code_version;
  double wall_clock_seconds = 0.0;
};

namespace sweep {

/// Affine least-squares fit B ~ c0 + c1 alpha over the (up to) four smallest
/// alphas. epsilon_hat = max(c0, 0); fit_residual is the RMS misfit.
/// Throws InsufficientDataError with fewer than three points.
LiminfEstimate fit_liminf(std::span<const double> alphas, std::span<const double> indicator);

/// Fit at sample time t using every run that completed it.
LiminfEstimate estimate_liminf(const SweepResult& result, double t);

struct VerdictOutcome {
  Verdict verdict = Verdict::Inconclusive;
  double eps_sup = 0.0;
};

VerdictOutcome blowup_verdict(const SweepResult& result, double threshold);

SweepResult run_sweep(const SweepConfig& cfg);

/// sweep.json plus one alpha_<value>.csv per run.
void write_result(const SweepResult& result, const std::string& dir);

/// Shortest round-trip decimal form, used in file names and echoes.
std::string format_alpha(double alpha);

}  // namespace sweep
}  // namespace sqg
