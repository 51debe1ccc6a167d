#pragma once

#include <span>
#include <string>
#include <vector>

namespace ordpat {

// Minimal line-plot writer: axes box, tick labels, polylines with a legend.
// Output is deterministic (no timestamps, fixed formatting).
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add_series(std::string name, std::vector<double> xs,
                  std::vector<double> ys);
  // Dashed reference line across the data range (e.g. y = x on a QQ plot).
  void add_identity_line();

  void write_file(const std::string& path) const;

 private:
  std::string title_, x_label_, y_label_;
  struct Series {
    std::string name;
    std::vector<double> xs, ys;
  };
  std::vector<Series> series_;
  bool identity_line_ = false;
};

}  // namespace ordpat
