#include "sqg/initial_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sqg/errors.hpp"

namespace sqg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double param(const IcSpec& spec, const std::string& key, double fallback) {
  const auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

int integer_param(const IcSpec& spec, const std::string& key, int fallback) {
  const double v = param(spec, key, fallback);
  if (v != std::floor(v) || std::abs(v) > 1e6) {
    throw ConfigError("ic param '" + key + "' must be an integer");
  }
  return static_cast<int>(v);
}

template <class F>
PhysicalField sample(const GridPtr& grid, F f) {
  PhysicalField out(grid);
  const int n = grid->n();
  const double dx = grid->dx();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = f(i * dx, j * dx);
  }
  return out;
}

PhysicalField random_smooth(const IcSpec& spec, const GridPtr& grid) {
  const double k0 = param(spec, "k0", 4.0);
  if (!(k0 > 0.0)) throw ConfigError("ic param 'k0' must be positive");
  // Phases come straight from the engine's 64-bit output so the field does
  // not depend on the standard library's distribution implementation.
  std::mt19937_64 rng(spec.seed.value_or(0));
  const Grid& g = *grid;
  const int cut = g.dealias_cutoff();
  SpectralField f(grid);
  for (int k1 = 0; k1 <= cut; ++k1) {
    for (int k2 = -cut; k2 <= cut; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const double phase = kTwoPi * static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const double amp = std::exp(-(k1 * k1 + k2 * k2) / (k0 * k0));
      const Complex c = std::polar(amp, phase);
      f.at(k1, k2) = c;
      f.at(-k1, -k2) = std::conj(c);
    }
  }
  const double norm = std::sqrt(spectral::l2_norm_sq(f));
  if (norm == 0.0) throw ConfigError("random_smooth: spectrum underflowed, increase k0");
  f *= 1.0 / norm;
  return spectral::inverse(f);
}

}  // namespace

const std::vector<std::string>& ic_names() {
  static const std::vector<std::string> names{"zero", "single_mode", "cmt", "random_smooth", "positive_cell"};
  return names;
}

std::string random_generator_id() { return "std::mt19937_64/top53-uniform-phase"; }

PhysicalField make_initial_condition(const IcSpec& spec, const GridPtr& grid) {
  if (spec.name == "zero") return PhysicalField(grid);
  if (spec.name == "single_mode") {
    const int k1 = integer_param(spec, "k1", 0);
    const int k2 = integer_param(spec, "k2", 1);
    return sample(grid, [k1, k2](double x, double y) { return std::cos(kTwoPi * (k1 * x + k2 * y)); });
  }
  if (spec.name == "cmt") {
    return sample(grid, [](double x, double y) {
      return std::sin(kTwoPi * x) * std::sin(kTwoPi * y) + std::cos(kTwoPi * y);
    });
  }
  if (spec.name == "random_smooth") return random_smooth(spec, grid);
  if (spec.name == "positive_cell") {
    // 2 + cos(2 pi x) cos(2 pi y): nonzero-mean datum for positivity checks.
    return sample(grid, [](double x, double y) { return 2.0 + std::cos(kTwoPi * x) * std::cos(kTwoPi * y); });
  }
  throw ConfigError("unknown initial condition '" + spec.name + "'");
}

}  // namespace sqg
