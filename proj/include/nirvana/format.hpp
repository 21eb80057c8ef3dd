#pragma once

#include <string>

namespace nirvana
{

/// Shortest representation that round-trips a double (at most 17 significant
/// digits). Deterministic across runs.
std::string format_number(double x);

} // namespace nirvana
