// Drives the sqg executable end to end.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

fs::path workdir() {
  static const fs::path dir = [] {
    const auto d = fs::temp_directory_path() / "sqg_test_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Result sqg(const std::string& args) {
  const auto log = workdir() / "stdout.txt";
  const std::string cmd = std::string(SQG_BINARY) + " " + args + " > " + log.string() + " 2> " +
                          (workdir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  r.out.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return r;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const auto p = workdir() / name;
  std::ofstream(p) << text;
  return p;
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) row.push_back(std::stod(c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("zero field pipeline") {
  const auto snap = workdir() / "zero.snap";
  REQUIRE(sqg("ic --name zero --n 16 --out " + snap.string()).code == 0);
  CHECK(fs::file_size(snap) == 2072);

  const auto out = workdir() / "zero_run";
  const auto cfg = write_file("zero.cfg", "ic.snapshot = " + snap.string() +
                                              "\nalpha = 0.1\nintegrator.t_end = 0.5\n"
                                              "integrator.callback_interval = 0.1\noutput_dir = " +
                                              out.string() + "\nsnapshot_interval = 0.25\n");
  REQUIRE(sqg("run --config " + cfg.string()).code == 0);
  const auto rows = read_csv(out / "diagnostics.csv");
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 9);
    CHECK(rows[i][0] == doctest::Approx(0.1 * i));
    for (std::size_t c = 1; c < 9; ++c) CHECK(rows[i][c] == 0.0);
  }
  CHECK(fs::exists(out / "run.json"));
  std::ifstream js(out / "run.json");
  CHECK(nlohmann::json::parse(js).at("alpha") == 0.1);
  CHECK(fs::exists(out / "snap_000000.snap"));
  CHECK(fs::exists(out / "snap_000002.snap"));

  const auto d = sqg("diagnose --a " + snap.string() + " --b " + snap.string());
  CHECK(d.code == 0);
  CHECK(d.out.rfind("convergence_metric 0\n", 0) == 0);

  const auto plots = workdir() / "plots";
  CHECK(sqg("plot --input " + (out / "diagnostics.csv").string() + " --out " + plots.string()).code == 0);
  CHECK(fs::exists(plots / "energy.gp"));
  CHECK(fs::exists(plots / "linf.gp"));
}

TEST_CASE("diagnose compares different resolutions") {
  const auto a = workdir() / "cmt16.snap";
  const auto b = workdir() / "cmt32.snap";
  REQUIRE(sqg("ic --name cmt --n 16 --out " + a.string()).code == 0);
  REQUIRE(sqg("ic --name cmt --n 32 --out " + b.string()).code == 0);
  const auto d = sqg("diagnose --a " + a.string() + " --b " + b.string() + " --alpha 0.1");
  CHECK(d.code == 0);
  std::istringstream in(d.out);
  std::string label;
  double metric = -1.0;
  in >> label >> metric;
  CHECK(label == "convergence_metric");
  CHECK(metric < 1e-25);
}

TEST_CASE("steady sweep verdict") {
  const auto out = workdir() / "sweep";
  const auto cfg = write_file("sweep.cfg",
                              "ic.name = single_mode\nsweep.alphas = 0.4, 0.2, 0.1\nsweep.t_end = 0.1\n"
                              "sweep.sample_times = 0, 0.05, 0.1\noutput_dir = " +
                                  out.string() + "\n");
  const auto r = sqg("sweep --config " + cfg.string());
  REQUIRE(r.code == 0);
  REQUIRE(r.out.rfind("VERDICT NO_BLOWUP_EVIDENCE eps_sup=", 0) == 0);
  CHECK(std::stod(r.out.substr(r.out.find('=') + 1)) <= 1e-10);
  CHECK(fs::exists(out / "sweep.json"));
  CHECK(fs::exists(out / "alpha_0.4.csv"));

  const auto plots = workdir() / "sweep_plots";
  CHECK(sqg("plot --input " + out.string() + " --out " + plots.string()).code == 0);
  CHECK(fs::exists(plots / "indicator.gp"));
  CHECK(fs::exists(plots / "indicator.dat"));
  CHECK(fs::exists(plots / "energy_alpha_0.1.gp"));
}

TEST_CASE("bad inputs exit with status 1") {
  const auto cfg = write_file("bad.cfg", "n = 16\nintegrator.t_end = 1\nthis is not a setting\n");
  CHECK(sqg("run --config " + cfg.string()).code == 1);
  const auto unknown = write_file("unknown.cfg", "n = 16\nintegrator.t_end = 1\nalpah = 0.1\n");
  CHECK(sqg("run --config " + unknown.string()).code == 1);
  CHECK(sqg("run --config /nonexistent.cfg").code == 1);
  CHECK(sqg("ic --name vortex --n 16 --out " + (workdir() / "v.snap").string()).code == 1);
  CHECK(sqg("frobnicate").code == 1);
  CHECK(sqg("").code == 1);

  const auto junk = write_file("junk.snap", "not a snapshot at all, definitely not");
  CHECK(sqg("diagnose --a " + junk.string() + " --b " + junk.string()).code == 1);
}
