#pragma once

#include <string>

#include "cfc/harness.hpp"

namespace cfc {

// Strict schema: unknown keys and out-of-range values raise InvalidArgument
// whose message starts with the offending field path.
SweepSpec parse_sweep_config(const Json& doc);
SweepSpec load_sweep_config(const std::string& path);

}  // namespace cfc
