#include "sqg/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <thread>

#include "json.hpp"

#include "sqg/errors.hpp"
#include "sqg/timestepper.hpp"
#include "sqg/version.hpp"

namespace sqg {

std::vector<double> SweepConfig::default_alphas(double alpha0, int levels) {
  std::vector<double> out;
  for (int j = 0; j < levels; ++j) out.push_back(std::ldexp(alpha0, -j));
  return out;
}

void SweepConfig::validate() const {
  if (alphas.empty()) throw ConfigError("sweep needs at least one alpha");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0 && alphas[i] <= 1.0)) throw ConfigError("sweep alphas must lie in (0, 1]");
    if (i > 0 && !(alphas[i] < alphas[i - 1])) throw ConfigError("sweep alphas must be strictly decreasing");
  }
  if (sample_times.empty()) throw ConfigError("sweep needs at least one sample time");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < 0.0 || sample_times[i] > t_end) {
      throw ConfigError("sweep sample times must lie in [0, t_end]");
    }
    if (i > 0 && !(sample_times[i] > sample_times[i - 1])) {
      throw ConfigError("sweep sample times must be strictly increasing");
    }
  }
  if (parallelism < 1) throw ConfigError("sweep parallelism must be >= 1");
  if (n_min < 8 || n_min % 2 != 0) throw ConfigError("sweep n_min must be even and >= 8");
  if (threshold && !(*threshold > 0.0)) throw ConfigError("sweep threshold must be positive");
  IntegratorConfig probe;
  probe.courant = courant;
  probe.dt_max = dt_max;
  probe.validate();
}

bool supported_size(int n) {
  if (n < 8 || n % 2 != 0) return false;
  for (int p : {2, 5, 7}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

int resolution_for(double alpha, int n_min) {
  if (!(alpha > 0.0)) throw ConfigError("resolution rule needs alpha > 0");
  const double need = std::ceil(4.0 / alpha - 1e-9);
  if (need > 65536.0) throw ConfigError("alpha too small for any supported grid");
  int n = std::max(n_min, static_cast<int>(need));
  while (!supported_size(n)) ++n;
  return n;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::NoBlowupEvidence:
      return "NO_BLOWUP_EVIDENCE";
    case Verdict::BlowupIndicated:
      return "BLOWUP_INDICATED";
    case Verdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

namespace sweep {

std::string format_alpha(double alpha) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, alpha);
  return std::string(buf, res.ptr);
}

LiminfEstimate fit_liminf(std::span<const double> alphas, std::span<const double> indicator) {
  if (alphas.size() != indicator.size()) throw ConfigError("fit_liminf: size mismatch");
  if (alphas.size() < 3) {
    throw InsufficientDataError("liminf estimate needs at least 3 alpha levels, have " + std::to_string(alphas.size()));
  }
  std::vector<std::size_t> order(alphas.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return alphas[a] < alphas[b]; });
  const std::size_t m = std::min<std::size_t>(4, order.size());

  double mean_a = 0.0;
  double mean_b = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mean_a += alphas[order[i]];
    mean_b += indicator[order[i]];
  }
  mean_a /= static_cast<double>(m);
  mean_b /= static_cast<double>(m);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double da = alphas[order[i]] - mean_a;
    sxx += da * da;
    sxy += da * (indicator[order[i]] - mean_b);
  }
  if (alphas[order.front()] == alphas[order[m - 1]]) {
    throw InsufficientDataError("liminf estimate needs distinct alpha values");
  }
  const double c1 = sxy / sxx;
  const double c0 = mean_b - c1 * mean_a;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = c0 + c1 * alphas[order[i]] - indicator[order[i]];
    ss += r * r;
  }

  LiminfEstimate est;
  est.epsilon_hat = std::max(c0, 0.0);
  est.fit_residual = std::sqrt(ss / static_cast<double>(m));
  est.slope = c1;
  est.levels = static_cast<int>(m);
  return est;
}

LiminfEstimate estimate_liminf(const SweepResult& result, double t) {
  const auto& times = result.config.sample_times;
  const auto it = std::find(times.begin(), times.end(), t);
  if (it == times.end()) throw ConfigError("estimate_liminf: " + format_alpha(t) + " is not a sample time");
  const auto idx = static_cast<std::size_t>(it - times.begin());
  std::vector<double> a;
  std::vector<double> b;
  for (const auto& run : result.runs) {
    if (run.records.size() > idx) {
      a.push_back(run.alpha);
      b.push_back(run.records[idx].blowup_indicator);
    }
  }
  LiminfEstimate est = fit_liminf(a, b);
  est.t = t;
  return est;
}

VerdictOutcome blowup_verdict(const SweepResult& result, double threshold) {
  VerdictOutcome out;
  if (result.liminf_estimates.empty()) return out;
  const auto best = std::max_element(result.liminf_estimates.begin(), result.liminf_estimates.end(),
                                     [](const auto& a, const auto& b) { return a.epsilon_hat < b.epsilon_hat; });
  out.eps_sup = best->epsilon_hat;
  if (out.eps_sup > threshold && best->fit_residual < out.eps_sup / 3.0) {
    out.verdict = Verdict::BlowupIndicated;
  } else if (out.eps_sup < threshold / 10.0) {
    out.verdict = Verdict::NoBlowupEvidence;
  } else {
    out.verdict = Verdict::Inconclusive;
  }
  return out;
}

namespace {

RunSeries run_one(const SweepConfig& cfg, double alpha) {
  RunSeries run;
  run.alpha = alpha;
  run.n = resolution_for(alpha, cfg.n_min);
  if (run.n * alpha < 4.0) throw ConfigError("resolution rule violated for alpha " + format_alpha(alpha));

  ModelParams params;
  params.alpha = alpha;
  State state = make_state(make_initial_condition(cfg.base_ic, make_grid(run.n)), params);

  IntegratorConfig icfg;
  icfg.courant = cfg.courant;
  icfg.dt_max = cfg.dt_max;
  icfg.callback_interval = std::max(1.0, cfg.t_end);
  try {
    for (double ts : cfg.sample_times) {
      if (ts > state.t) {
        icfg.t_end = ts;
        state = timestepper::integrate(state, icfg);
      }
      run.records.push_back(diagnostics::record(state));
    }
    if (cfg.t_end > state.t) {
      icfg.t_end = cfg.t_end;
      state = timestepper::integrate(state, icfg);
    }
  } catch (const NumericalOverflowError& e) {
    run.truncated = true;
    run.truncated_at = e.t();
    run.error = e.what();
  }
  return run;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();

  SweepResult result;
  result.config = cfg;
  result.code_version = kVersion;
  result.runs.resize(cfg.alphas.size());

  {
    const GridPtr g = make_grid(resolution_for(cfg.alphas.front(), cfg.n_min));
    result.theta0_h1 = diagnostics::h1_norm(spectral::forward(make_initial_condition(cfg.base_ic, g)));
  }
  result.threshold = cfg.threshold.value_or(0.05 * result.theta0_h1);

  // Workers claim alpha indices; each run owns its state and writes only to
  // its own slot, so the outcome does not depend on scheduling.
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(cfg.alphas.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.alphas.size(); i = next++) {
      try {
        result.runs[i] = run_one(cfg, cfg.alphas[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int workers = std::min<int>(cfg.parallelism, static_cast<int>(cfg.alphas.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  for (double t : cfg.sample_times) {
    try {
      result.liminf_estimates.push_back(estimate_liminf(result, t));
    } catch (const InsufficientDataError&) {
      // Fewer than three runs reached t; nothing to extrapolate.
    }
  }
  const auto v = blowup_verdict(result, result.threshold);
  result.verdict = v.verdict;
  result.eps_sup = v.eps_sup;
  result.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

void write_result(const SweepResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto& cfg = result.config;

  nlohmann::json j;
  j["config"] = {
      {"alphas", cfg.alphas},
      {"n_min", cfg.n_min},
      {"t_end", cfg.t_end},
      {"sample_times", cfg.sample_times},
      {"ic", {{"name", cfg.base_ic.name}, {"params", cfg.base_ic.params}}},
      {"parallelism", cfg.parallelism},
      {"courant", cfg.courant},
      {"dt_max", cfg.dt_max},
  };
  if (cfg.base_ic.seed) j["config"]["ic"]["seed"] = *cfg.base_ic.seed;
  j["runs"] = nlohmann::json::array();
  for (const auto& run : result.runs) {
    nlohmann::json r = {{"alpha", run.alpha},
                        {"n", run.n},
                        {"file", "alpha_" + format_alpha(run.alpha) + ".csv"},
                        {"completed_samples", run.records.size()},
                        {"truncated", run.truncated}};
    if (run.truncated) {
      r["truncated_at"] = run.truncated_at;
      r["error"] = run.error;
    }
    j["runs"].push_back(r);
  }
  j["liminf_estimates"] = nlohmann::json::array();
  for (const auto& e : result.liminf_estimates) {
    j["liminf_estimates"].push_back({{"t", e.t},
                                     {"epsilon_hat", e.epsilon_hat},
                                     {"fit_residual", e.fit_residual},
                                     {"slope", e.slope},
                                     {"levels", e.levels}});
  }
  j["theta0_h1"] = result.theta0_h1;
  j["threshold"] = result.threshold;
  j["verdict"] = to_string(result.verdict);
  j["eps_sup"] = result.eps_sup;
  j["metadata"] = {{"code_version", result.code_version},
                   {"random_generator", random_generator_id()},
                   {"wall_clock_seconds", result.wall_clock_seconds}};

  std::ofstream js(fs::path(dir) / "sweep.json", std::ios::trunc);
  if (!js) throw ConfigError("cannot write sweep.json in '" + dir + "'");
  js << j.dump(2) << "\n";

  for (const auto& run : result.runs) {
    std::ofstream csv(fs::path(dir) / ("alpha_" + format_alpha(run.alpha) + ".csv"), std::ios::trunc);
    if (!csv) throw ConfigError("cannot write run CSV in '" + dir + "'");
    csv << diagnostics::csv_header() << "\n";
    for (const auto& r : run.records) csv << diagnostics::csv_row(r) << "\n";
  }
}

}  // namespace sweep
}  // namespace sqg
