#pragma once

// Shortest round-trip decimal formatting; all emitted numbers go through
// here so identical inputs give byte-identical outputs.

#include <string>

namespace patchlum {

std::string format_double(double value);

}  // namespace patchlum
