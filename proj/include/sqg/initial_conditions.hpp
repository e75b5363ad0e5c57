#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sqg/spectral.hpp"

namespace sqg {

/// Initial-condition selection. Recognised params:
///   single_mode: k1, k2 (integers, default 0 and 1)
///   random_smooth: k0 (spectral width, default 4)
///   positive_cell: none; 2 + cos(2 pi x) cos(2 pi y)
struct IcSpec {
  std::string name = "zero";
  std::map<std::string, double> params;
  std::optional<std::uint64_t> seed;
};

/// Names accepted by make_initial_condition.
const std::vector<std::string>& ic_names();

/// Throws ConfigError for unknown names or invalid params.
PhysicalField make_initial_condition(const IcSpec& spec, const GridPtr& grid);

/// Identifies the pseudo-random generator behind "random_smooth" so that
/// outputs can record how a field was produced.
std::string random_generator_id();

}  // namespace sqg
