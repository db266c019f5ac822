#pragma once

#include <string>
#include <vector>

#include "vbkreg/simulate.hpp"

namespace vbkreg {

// A built-in experiment mirroring one table (or table row) of the
// simulation study.
struct BuiltinScenario {
  ScenarioConfig cfg;
  // mse-points style experiments evaluate at fixed t values
  std::vector<double> points;
  // table3 sweeps the sample size
  std::vector<std::size_t> n_sweep;
};

std::vector<std::string> builtin_scenario_names();
BuiltinScenario builtin_scenario(const std::string& name);

}  // namespace vbkreg
