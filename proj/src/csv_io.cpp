#include "ordpat/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ordpat/errors.hpp"

namespace ordpat {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

double parse_number(const std::string& field, const std::string& name,
                    std::size_t line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw_data_error(name + ": line " + std::to_string(line_no) +
                     ": cannot parse number '" + field + "'");
  }
  if (!std::isfinite(v)) {
    throw_data_error(name + ": line " + std::to_string(line_no) +
                     ": non-finite number '" + field + "'");
  }
  return v;
}

}  // namespace

PointCloud read_field_csv(std::istream& is, const std::string& name) {
  std::string line;
  if (!std::getline(is, line)) {
    throw_data_error(name + ": empty input");
  }
  if (strip_cr(line) != "x,y,value") {
    throw_data_error(name + ": line 1: expected header 'x,y,value'");
  }

  PointCloud cloud;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    std::string fields[3];
    int nfields = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        if (nfields >= 3) {
          throw_data_error(name + ": line " + std::to_string(line_no) +
                           ": expected 3 comma-separated fields");
        }
        fields[nfields++] = line.substr(start, i - start);
        start = i + 1;
      }
    }
    if (nfields != 3) {
      throw_data_error(name + ": line " + std::to_string(line_no) +
                       ": expected 3 comma-separated fields");
    }
    cloud.xs.push_back(parse_number(fields[0], name, line_no));
    cloud.ys.push_back(parse_number(fields[1], name, line_no));
    cloud.values.push_back(parse_number(fields[2], name, line_no));
  }
  if (cloud.size() == 0) {
    throw_data_error(name + ": no data rows");
  }
  return cloud;
}

PointCloud read_field_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw_data_error("cannot open '" + path + "'");
  return read_field_csv(is, path);
}

void write_field_csv(std::ostream& os, const PointCloud& cloud) {
  os << "x,y,value\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    os << format_double(cloud.xs[i]) << ',' << format_double(cloud.ys[i])
       << ',' << format_double(cloud.values[i]) << '\n';
  }
}

void write_field_csv_file(const std::string& path, const PointCloud& cloud) {
  std::ofstream os(path);
  if (!os) throw_data_error("cannot open '" + path + "' for writing");
  write_field_csv(os, cloud);
}

}  // namespace ordpat
