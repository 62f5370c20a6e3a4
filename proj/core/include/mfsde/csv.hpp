#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mfsde/grid.hpp"

namespace mfsde::csv {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

/// `t,value`, one row per grid node.
void write_path(std::ostream& os, const SamplePath& path);
void write_path(const std::string& file, const SamplePath& path);
SamplePath read_path(std::istream& is);
SamplePath read_path(const std::string& file);

/// `t,value` rows for a grid function on [a, b].
void write_grid_function(std::ostream& os, const GridFunction& f);
GridFunction read_grid_function(std::istream& is);

/// `tau,mark`. The header line is followed by one row per jump; rate and
/// horizon are not part of the file and must be supplied on reading.
void write_jumps(std::ostream& os, const JumpTrain& jumps);
void write_jumps(const std::string& file, const JumpTrain& jumps);
JumpTrain read_jumps(std::istream& is, double rate, double horizon);

/// Splits one CSV line on the delimiter (no quoting).
std::vector<std::string> split(const std::string& line, char delimiter = ',');

}  // namespace mfsde::csv
