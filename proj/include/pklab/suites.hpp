#pragma once

// Named verification suites.  Each suite maps module invariants to check
// records; reports depend only on the config.

#include <string>
#include <vector>

#include "pklab/report.hpp"

namespace pklab {

// Registered suite names in run order, without "all".
const std::vector<std::string>& suite_names();

// Throws ConfigError for unknown suites, invalid parameters, or tolerance
// overrides that no check consulted.  Suite "all" runs every suite
// concurrently and merges the records in registration order.
SuiteReport run_suite(const SuiteConfig& config);

}  // namespace pklab
