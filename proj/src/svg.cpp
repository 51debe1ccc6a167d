#include "ordpat/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "ordpat/errors.hpp"

namespace ordpat {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 55;

const char* kPalette[] = {"#1f6fb4", "#d1495b", "#2e8b57", "#8f5fb0",
                          "#c98a1c", "#3aa6a6", "#7a7a7a", "#b05f3c"};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)) {}

void SvgPlot::add_series(std::string name, std::vector<double> xs,
                         std::vector<double> ys) {
  if (xs.size() != ys.size()) {
    throw_data_error("SvgPlot: series length mismatch");
  }
  series_.push_back({std::move(name), std::move(xs), std::move(ys)});
}

void SvgPlot::add_identity_line() { identity_line_ = true; }

void SvgPlot::write_file(const std::string& path) const {
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool first = true;
  for (const auto& s : series_) {
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (first) {
        x_min = x_max = s.xs[i];
        y_min = y_max = s.ys[i];
        first = false;
      } else {
        x_min = std::min(x_min, s.xs[i]);
        x_max = std::max(x_max, s.xs[i]);
        y_min = std::min(y_min, s.ys[i]);
        y_max = std::max(y_max, s.ys[i]);
      }
    }
  }
  if (x_max <= x_min) x_max = x_min + 1;
  if (y_max <= y_min) y_max = y_min + 1;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto px = [&](double x) {
    return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w;
  };
  const auto py = [&](double y) {
    return kMarginTop + plot_h - (y - y_min) / (y_max - y_min) * plot_h;
  };

  std::ofstream os(path);
  if (!os) throw_data_error("SvgPlot: cannot open '" + path + "'");
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
     << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">"
     << title_ << "</text>\n";

  // Axes box and ticks.
  os << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
     << plot_w << "\" height=\"" << plot_h
     << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double fx = x_min + (x_max - x_min) * t / 5.0;
    const double fy = y_min + (y_max - y_min) * t / 5.0;
    os << "<text x=\"" << num(px(fx)) << "\" y=\"" << kMarginTop + plot_h + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"11\">"
       << num(fx) << "</text>\n";
    os << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << num(py(fy) + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"11\">"
       << num(fy) << "</text>\n";
    os << "<line x1=\"" << num(px(fx)) << "\" y1=\"" << kMarginTop + plot_h
       << "\" x2=\"" << num(px(fx)) << "\" y2=\"" << kMarginTop + plot_h + 4
       << "\" stroke=\"#333\"/>\n";
    os << "<line x1=\"" << kMarginLeft - 4 << "\" y1=\"" << num(py(fy))
       << "\" x2=\"" << kMarginLeft << "\" y2=\"" << num(py(fy))
       << "\" stroke=\"#333\"/>\n";
  }
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\">"
     << x_label_ << "</text>\n";
  os << "<text x=\"18\" y=\"" << kHeight / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\" transform=\"rotate(-90 18 "
     << kHeight / 2 << ")\">" << y_label_ << "</text>\n";

  if (identity_line_) {
    const double lo = std::max(x_min, y_min);
    const double hi = std::min(x_max, y_max);
    if (hi > lo) {
      os << "<line x1=\"" << num(px(lo)) << "\" y1=\"" << num(py(lo))
         << "\" x2=\"" << num(px(hi)) << "\" y2=\"" << num(py(hi))
         << "\" stroke=\"#999\" stroke-dasharray=\"5,4\"/>\n";
    }
  }

  for (std::size_t k = 0; k < series_.size(); ++k) {
    const auto& s = series_[k];
    const char* color = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.6\" points=\"";
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      os << num(px(s.xs[i])) << ',' << num(py(s.ys[i]));
      if (i + 1 < s.xs.size()) os << ' ';
    }
    os << "\"/>\n";
    const double ly = kMarginTop + 16.0 + 16.0 * static_cast<double>(k);
    os << "<line x1=\"" << kMarginLeft + 10 << "\" y1=\"" << num(ly - 4)
       << "\" x2=\"" << kMarginLeft + 34 << "\" y2=\"" << num(ly - 4)
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kMarginLeft + 40 << "\" y=\"" << num(ly)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.name
       << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace ordpat
