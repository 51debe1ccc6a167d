#pragma once

#include <iosfwd>
#include <string>

#include "ordpat/geometry.hpp"

namespace ordpat {

// Reads a field CSV with the exact header "x,y,value". Malformed rows raise
// data errors naming the offending line.
PointCloud read_field_csv(std::istream& is, const std::string& name = "input");
PointCloud read_field_csv_file(const std::string& path);

// Writes the matching "x,y,value" CSV with LF endings and full precision.
void write_field_csv(std::ostream& os, const PointCloud& cloud);
void write_field_csv_file(const std::string& path, const PointCloud& cloud);

// %.17g rendering used by all CSV writers.
std::string format_double(double v);

}  // namespace ordpat
