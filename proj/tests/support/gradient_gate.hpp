#pragma once

#include <map>
#include <string>

#include "bee/random.hpp"

namespace bee::testing {

/// Worst relative error per loss over `points` random parameter draws, against central differences.
std::map<std::string, double> gradient_gate(int points, std::uint64_t seed);

}  // namespace bee::testing
