/// \file config.hpp
/// \brief INI-style configuration files.
///
///     [case]
///     ; uniform | vortex | briowu | riemann | orszag_tang | blast
///     name = vortex
///     mu = 5.38948938512
///
///     [mesh]
///     cells = 20 20
///
///     [discretization]
///     order = 2
///     riemann = hllc
///
///     [time]
///     dt = 1e-4
///     t_end = 0.05
///
/// The case name selects a preset; every other key overrides it. Comments
/// must start a line.
#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "efmhd/cases.hpp"

namespace efmhd {

struct ConvergenceSettings {
  std::vector<int> orders{2, 3};
  std::vector<int> resolutions{20, 25, 33};
};

struct ReferenceSettings {
  int cells = 50000;
  double dt = 0.0;  // 0: scale the preset step with the resolution
  int decimate = 1;
};

struct ConfigFile {
  CaseConfig run;
  ConvergenceSettings convergence;
  ReferenceSettings reference;
};

/// Throws ConfigError on unknown sections or keys and on malformed values.
ConfigFile parse_config(std::istream& in);
ConfigFile load_config(const std::filesystem::path& path);

}  // namespace efmhd
