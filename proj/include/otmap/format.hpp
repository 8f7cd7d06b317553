#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace otmap {

/// Shortest decimal representation that round-trips the double exactly;
/// keeps emitted CSV/JSON byte-stable across runs.
std::string format_double(double v);

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace otmap
