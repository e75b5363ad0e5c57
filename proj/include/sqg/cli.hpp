#pragma once

#include <optional>
#include <string>

#include "sqg/config.hpp"
#include "sqg/initial_conditions.hpp"
#include "sqg/sweep.hpp"
#include "sqg/timestepper.hpp"

namespace sqg {

struct RunConfig {
  IcSpec ic;
  /// When set, the initial theta is read from this snapshot instead of ic.
  std::optional<std::string> ic_snapshot;
  std::optional<double> alpha;  // falls back to the snapshot's alpha, then 0
  std::optional<int> n;         // required unless ic_snapshot is set
  IntegratorConfig integrator;
  std::string output_dir = ".";
  std::optional<double> snapshot_interval;
};

RunConfig parse_run_config(const KeyValueConfig& kv);
SweepConfig parse_sweep_config(const KeyValueConfig& kv);
/// The output directory a sweep config names ("output_dir", default ".").
std::string sweep_output_dir(const KeyValueConfig& kv);

namespace cli {

/// Exit codes of the sqg tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitOverflow = 2;

int run_command(const std::string& config_path);
int sweep_command(const std::string& config_path);
int diagnose_command(const std::string& a, const std::string& b, std::optional<double> alpha);
int ic_command(const IcSpec& spec, int n, const std::string& out);
int plot_command(const std::string& input, const std::string& out_dir);

/// Entry point used by tools/sqg.
int main(int argc, char** argv);

}  // namespace cli
}  // namespace sqg
