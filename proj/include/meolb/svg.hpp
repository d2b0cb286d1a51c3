#pragma once

#include <string>
#include <vector>

namespace meolb::svg {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

/// Shaded x-interval, e.g. a rain window.
struct Band {
  double x0 = 0.0;
  double x1 = 0.0;
  std::string label;
};

struct Panel {
  std::string title;
  std::vector<Series> series;
  std::vector<Band> bands;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Panel> panels;  // stacked vertically, shared x range
  double width = 960.0;
  double panel_height = 180.0;
};

struct HistogramSet {
  std::string label;
  std::string color;
  std::vector<double> values;
};

struct HistogramChart {
  std::string title;
  std::string x_label;
  double bin_width = 1.0;
  std::vector<HistogramSet> sets;  // overlaid; mean line and ±1 std span drawn per set
  double width = 720.0;
  double height = 360.0;
};

/// "Nice" tick positions covering [lo, hi] with roughly `target` intervals.
std::vector<double> nice_ticks(double lo, double hi, int target = 5);

std::string render(const LineChart& chart);
std::string render(const HistogramChart& chart);

/// Escapes &, <, >, " for text nodes and attributes.
std::string escape(const std::string& text);

}  // namespace meolb::svg
