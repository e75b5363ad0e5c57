#include "sqg/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "sqg/diagnostics.hpp"
#include "sqg/errors.hpp"
#include "sqg/snapshot.hpp"
#include "sqg/version.hpp"

namespace sqg {

namespace {

namespace fs = std::filesystem;

const std::set<std::string> kIcKeys{"ic.name", "ic.seed", "ic.k1", "ic.k2", "ic.k0", "ic.snapshot"};

IcSpec parse_ic(const KeyValueConfig& kv) {
  IcSpec ic;
  ic.name = kv.get_string("ic.name", "zero");
  for (const char* key : {"k1", "k2", "k0"}) {
    const std::string full = std::string("ic.") + key;
    if (kv.has(full)) ic.params[key] = kv.get_double(full);
  }
  if (kv.has("ic.seed")) {
    const long long seed = kv.get_int("ic.seed");
    if (seed < 0) throw ConfigError("ic.seed must be non-negative");
    ic.seed = static_cast<std::uint64_t>(seed);
  }
  bool known = false;
  for (const auto& name : ic_names()) known = known || name == ic.name;
  if (!known && !kv.has("ic.snapshot")) {
    throw ConfigError("unknown initial condition '" + ic.name + "' for key 'ic.name'");
  }
  return ic;
}

int checked_grid_size(long long n, const char* key) {
  if (n < 8 || n % 2 != 0 || n > 65534) {
    throw ConfigError(std::string("key '") + key + "': grid size must be even, >= 8 and <= 65534");
  }
  return static_cast<int>(n);
}

}  // namespace

RunConfig parse_run_config(const KeyValueConfig& kv) {
  std::set<std::string> known = kIcKeys;
  known.insert({"alpha", "n", "integrator.courant", "integrator.dt_max", "integrator.dt_fixed", "integrator.t_end",
                "integrator.callback_interval", "output_dir", "snapshot_interval"});
  kv.reject_unknown(known);

  RunConfig rc;
  if (kv.has("ic.snapshot")) rc.ic_snapshot = kv.get_string("ic.snapshot");
  rc.ic = parse_ic(kv);
  rc.alpha = kv.get_optional_double("alpha");
  if (rc.alpha) ModelParams{*rc.alpha, true}.validate();
  if (kv.has("n")) rc.n = checked_grid_size(kv.get_int("n"), "n");
  if (!rc.n && !rc.ic_snapshot) throw ConfigError("missing required key 'n'");
  rc.integrator.courant = kv.get_double("integrator.courant", rc.integrator.courant);
  rc.integrator.dt_max = kv.get_double("integrator.dt_max", rc.integrator.dt_max);
  rc.integrator.dt_fixed = kv.get_optional_double("integrator.dt_fixed");
  rc.integrator.t_end = kv.get_double("integrator.t_end");
  rc.integrator.callback_interval = kv.get_double("integrator.callback_interval", rc.integrator.callback_interval);
  rc.integrator.validate();
  rc.output_dir = kv.get_string("output_dir", ".");
  rc.snapshot_interval = kv.get_optional_double("snapshot_interval");
  if (rc.snapshot_interval && !(*rc.snapshot_interval > 0.0)) throw ConfigError("snapshot_interval must be positive");
  return rc;
}

SweepConfig parse_sweep_config(const KeyValueConfig& kv) {
  std::set<std::string> known = kIcKeys;
  known.insert({"sweep.alphas", "sweep.alpha0", "sweep.levels", "sweep.n_min", "sweep.t_end", "sweep.sample_times",
                "sweep.parallelism", "sweep.threshold", "integrator.courant", "integrator.dt_max", "output_dir"});
  kv.reject_unknown(known);
  if (kv.has("ic.snapshot")) throw ConfigError("sweeps build their initial data from ic.name, not ic.snapshot");

  SweepConfig sc;
  if (kv.has("sweep.alphas")) {
    if (kv.has("sweep.alpha0") || kv.has("sweep.levels")) {
      throw ConfigError("give either sweep.alphas or sweep.alpha0/sweep.levels, not both");
    }
    sc.alphas = kv.get_double_list("sweep.alphas");
  } else {
    const long long levels = kv.get_int("sweep.levels", 6);
    if (levels < 1 || levels > 30) throw ConfigError("sweep.levels must be in [1, 30]");
    sc.alphas = SweepConfig::default_alphas(kv.get_double("sweep.alpha0", 0.1), static_cast<int>(levels));
  }
  sc.n_min = checked_grid_size(kv.get_int("sweep.n_min", 8), "sweep.n_min");
  sc.t_end = kv.get_double("sweep.t_end");
  sc.sample_times = kv.get_double_list("sweep.sample_times");
  const long long par = kv.get_int("sweep.parallelism", 1);
  if (par < 1 || par > 1024) throw ConfigError("sweep.parallelism must be in [1, 1024]");
  sc.parallelism = static_cast<int>(par);
  sc.threshold = kv.get_optional_double("sweep.threshold");
  sc.base_ic = parse_ic(kv);
  sc.courant = kv.get_double("integrator.courant", sc.courant);
  sc.dt_max = kv.get_double("integrator.dt_max", sc.dt_max);
  sc.validate();
  return sc;
}

std::string sweep_output_dir(const KeyValueConfig& kv) { return kv.get_string("output_dir", "."); }

namespace cli {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_plot_script(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << body;
}

std::string series_script(const std::string& png, const std::string& ylabel,
                          const std::string& plot_spec) {
  return "# gnuplot script\n"
         "set datafile separator ','\n"
         "set terminal pngcairo size 900,600\n"
         "set output '" + png + "'\n"
         "set xlabel 't'\n"
         "set ylabel '" + ylabel + "'\n"
         "set grid\n"
         "plot " + plot_spec + "\n";
}

void plot_run_csv(const fs::path& csv, const fs::path& out, const std::string& tag) {
  const std::string f = fs::absolute(csv).string();
  write_plot_script(out / ("energy" + tag + ".gp"),
                    series_script("energy" + tag + ".png", "E(t)",
                                  "'" + f + "' every ::1 using 1:2 with lines title 'modified energy'"));
  write_plot_script(out / ("linf" + tag + ".gp"),
                    series_script("linf" + tag + ".png", "theta",
                                  "'" + f + "' every ::1 using 1:5 with lines title 'max theta', '" + f +
                                      "' every ::1 using 1:6 with lines title 'min theta'"));
}

}  // namespace

int run_command(const std::string& config_path) {
  const RunConfig rc = parse_run_config(KeyValueConfig::load(config_path));

  ModelParams params;
  State state = [&] {
    if (rc.ic_snapshot) {
      const Snapshot snap = read_snapshot(*rc.ic_snapshot);
      if (rc.n && static_cast<std::uint32_t>(*rc.n) != snap.n) {
        throw ConfigError("key 'n' does not match the grid size of " + *rc.ic_snapshot);
      }
      PhysicalField theta0(make_grid(static_cast<int>(snap.n)));
      theta0.values = snap.theta;
      params.alpha = rc.alpha.value_or(snap.alpha);
      return make_state(theta0, params, snap.t);
    }
    params.alpha = rc.alpha.value_or(0.0);
    return make_state(make_initial_condition(rc.ic, make_grid(*rc.n)), params);
  }();
  if (rc.integrator.t_end < state.t) throw ConfigError("integrator.t_end precedes the initial time");

  fs::create_directories(rc.output_dir);
  {
    nlohmann::json meta = {{"code_version", kVersion},
                           {"alpha", params.alpha},
                           {"n", state.theta_tilde.grid->n()},
                           {"ic", {{"name", rc.ic.name}, {"params", rc.ic.params}}},
                           {"random_generator", random_generator_id()}};
    if (rc.ic.seed) meta["ic"]["seed"] = *rc.ic.seed;
    if (rc.ic_snapshot) meta["ic"]["snapshot"] = *rc.ic_snapshot;
    std::ofstream(fs::path(rc.output_dir) / "run.json", std::ios::trunc) << meta.dump(2) << "\n";
  }
  std::ofstream csv(fs::path(rc.output_dir) / "diagnostics.csv", std::ios::trunc);
  if (!csv) throw ConfigError("cannot write diagnostics.csv in '" + rc.output_dir + "'");
  csv << diagnostics::csv_header() << "\n";

  int snap_index = 0;
  double next_snapshot = state.t;
  auto callback = [&](double t, const State& s) {
    csv << diagnostics::csv_row(diagnostics::record(s)) << "\n";
    csv.flush();
    if (rc.snapshot_interval && t >= next_snapshot - 1e-12) {
      char name[32];
      std::snprintf(name, sizeof name, "snap_%06d.snap", snap_index++);
      write_snapshot(s, (fs::path(rc.output_dir) / name).string());
      while (next_snapshot <= t + 1e-12) next_snapshot += *rc.snapshot_interval;
    }
  };

  try {
    timestepper::integrate(state, rc.integrator, callback);
  } catch (const NumericalOverflowError& e) {
    std::cerr << "numerical overflow: truncated at t=" << fmt17(e.t()) << " (last good t=" << fmt17(e.last_good_t())
              << "): " << e.what() << "\n";
    return kExitOverflow;
  }
  return kExitOk;
}

int sweep_command(const std::string& config_path) {
  const KeyValueConfig kv = KeyValueConfig::load(config_path);
  const SweepConfig sc = parse_sweep_config(kv);
  const SweepResult result = sweep::run_sweep(sc);
  sweep::write_result(result, sweep_output_dir(kv));
  std::cout << "VERDICT " << to_string(result.verdict) << " eps_sup=" << fmt17(result.eps_sup) << "\n";
  return kExitOk;
}

int diagnose_command(const std::string& a_path, const std::string& b_path, std::optional<double> alpha) {
  const State a = read_snapshot(a_path).to_state();
  const State b = read_snapshot(b_path).to_state();
  SpectralField ta = model::recover_theta(a);
  SpectralField tb = model::recover_theta(b);
  const int n = std::max(ta.grid->n(), tb.grid->n());
  ta = diagnostics::spectral_pad(ta, n);
  tb = diagnostics::spectral_pad(tb, n);
  const double al = alpha.value_or(a.params.alpha);
  if (!(al >= 0.0)) throw ConfigError("--alpha must be non-negative");

  std::cout << "convergence_metric " << fmt17(diagnostics::convergence_metric(ta, tb, al)) << "\n";
  for (const auto& [label, state] : {std::pair<const char*, const State*>{"a", &a}, {"b", &b}}) {
    const DiagnosticsRecord r = diagnostics::record(*state);
    std::cout << label << " n=" << state->theta_tilde.grid->n() << " alpha=" << fmt17(state->params.alpha)
              << " t=" << fmt17(r.t) << " l2=" << fmt17(r.l2) << " grad_l2=" << fmt17(r.grad_l2)
              << " linf_max=" << fmt17(r.linf_max) << " linf_min=" << fmt17(r.linf_min)
              << " energy_modified=" << fmt17(r.energy_modified) << "\n";
  }
  return kExitOk;
}

int ic_command(const IcSpec& spec, int n, const std::string& out) {
  const PhysicalField f = make_initial_condition(spec, make_grid(n));
  Snapshot snap;
  snap.n = static_cast<std::uint32_t>(n);
  snap.alpha = 0.0;
  snap.t = 0.0;
  snap.theta = f.values;
  write_snapshot(snap, out);
  return kExitOk;
}

int plot_command(const std::string& input, const std::string& out_dir) {
  const fs::path in(input);
  const fs::path out(out_dir);
  fs::create_directories(out);
  if (fs::is_directory(in)) {
    std::ifstream js(in / "sweep.json");
    if (!js) throw ConfigError("'" + input + "' has no sweep.json");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(js);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("cannot parse sweep.json: " + std::string(e.what()));
    }
    const auto times = j.at("config").at("sample_times").get<std::vector<double>>();
    // indicator.dat: alpha followed by B(alpha, t) for each sample time.
    std::ofstream dat(out / "indicator.dat", std::ios::trunc);
    dat << "# alpha";
    for (double t : times) dat << " B(t=" << fmt17(t) << ")";
    dat << "\n";
    for (const auto& run : j.at("runs")) {
      const fs::path csv = in / run.at("file").get<std::string>();
      std::ifstream rows(csv);
      std::string line;
      std::getline(rows, line);
      dat << fmt17(run.at("alpha").get<double>());
      std::size_t k = 0;
      while (std::getline(rows, line) && k < times.size()) {
        std::vector<std::string> cols;
        std::size_t pos = 0;
        while (true) {
          const auto c = line.find(',', pos);
          cols.push_back(line.substr(pos, c - pos));
          if (c == std::string::npos) break;
          pos = c + 1;
        }
        dat << " " << (cols.size() > 6 ? cols[6] : "NaN");
        ++k;
      }
      for (; k < times.size(); ++k) dat << " NaN";
      dat << "\n";
      const std::string tag = "_alpha_" + sweep::format_alpha(run.at("alpha").get<double>());
      plot_run_csv(csv, out, tag);
    }
    std::string spec;
    const std::string datf = fs::absolute(out / "indicator.dat").string();
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (i) spec += ", ";
      spec += "'" + datf + "' using 1:" + std::to_string(i + 2) + " with linespoints title 't=" + fmt17(times[i]) + "'";
    }
    write_plot_script(out / "indicator.gp", "# gnuplot script\n"
                                            "set terminal pngcairo size 900,600\n"
                                            "set output 'indicator.png'\n"
                                            "set xlabel 'alpha'\n"
                                            "set ylabel 'alpha |grad theta|'\n"
                                            "set logscale x\n"
                                            "set grid\n"
                                            "plot " + spec + "\n");
    return kExitOk;
  }
  if (!fs::is_regular_file(in)) throw ConfigError("plot input '" + input + "' does not exist");
  plot_run_csv(in, out, "");
  return kExitOk;
}

int main(int argc, char** argv) {
  CLI::App app{"Inviscid alpha-regularised SQG solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string config;
  auto* run = app.add_subcommand("run", "Integrate a single configuration");
  run->add_option("--config", config, "Config file")->required();
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an alpha sweep and report the blow-up verdict");
  sweep_cmd->add_option("--config", config, "Config file")->required();

  std::string snap_a;
  std::string snap_b;
  std::optional<double> alpha;
  auto* diag = app.add_subcommand("diagnose", "Compare two snapshots");
  diag->add_option("--a", snap_a, "First snapshot")->required();
  diag->add_option("--b", snap_b, "Second snapshot")->required();
  diag->add_option("--alpha", alpha, "Alpha for the error functional (default: alpha of --a)");

  IcSpec spec;
  int n = 0;
  std::optional<std::uint64_t> seed;
  std::optional<int> k1;
  std::optional<int> k2;
  std::optional<double> k0;
  std::string out;
  auto* ic = app.add_subcommand("ic", "Write an initial-condition snapshot");
  ic->add_option("--name", spec.name, "Initial condition name")->required();
  ic->add_option("--n", n, "Grid size")->required();
  ic->add_option("--seed", seed, "Seed for random_smooth");
  ic->add_option("--k1", k1, "single_mode wavenumber along x");
  ic->add_option("--k2", k2, "single_mode wavenumber along y");
  ic->add_option("--k0", k0, "random_smooth spectral width");
  ic->add_option("--out", out, "Output snapshot path")->required();

  std::string input;
  std::string plot_out;
  auto* plot = app.add_subcommand("plot", "Emit gnuplot scripts for a run CSV or sweep directory");
  plot->add_option("--input", input, "diagnostics CSV or sweep directory")->required();
  plot->add_option("--out", plot_out, "Directory for the scripts")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return run_command(config);
    if (*sweep_cmd) return sweep_command(config);
    if (*diag) return diagnose_command(snap_a, snap_b, alpha);
    if (*ic) {
      spec.seed = seed;
      if (k1) spec.params["k1"] = *k1;
      if (k2) spec.params["k2"] = *k2;
      if (k0) spec.params["k0"] = *k0;
      return ic_command(spec, n, out);
    }
    if (*plot) return plot_command(input, plot_out);
  } catch (const NumericalOverflowError& e) {
    std::cerr << "numerical overflow: " << e.what() << "\n";
    return kExitOverflow;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace cli
}  // namespace sqg
