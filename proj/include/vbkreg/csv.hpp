#pragma once

#include <string>

#include "vbkreg/estimators.hpp"

namespace vbkreg {

// Reads a two-column "x,y" CSV (header required). Errors carry the offending
// line number.
Sample load_sample_csv(const std::string& path);

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace vbkreg
