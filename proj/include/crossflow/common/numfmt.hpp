#pragma once

#include <string>

namespace crossflow {

// Shortest decimal text that round-trips to the same double. Used by every
// tabular export so CSV and JSON carry identical digits.
std::string format_number(double value);

}  // namespace crossflow
