#include "meolb/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace meolb::svg {

namespace {

constexpr double kLeft = 70.0;
constexpr double kRight = 175.0;  // room for the legend
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr double kPanelGap = 36.0;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!std::isfinite(lo)) lo = hi = 0.0;
    if (hi - lo < 1e-12) {
      const double pad = std::max(1.0, std::abs(lo) * 0.05);
      lo -= pad;
      hi += pad;
    }
  }
};

/// Maps data coordinates into a plot rectangle.
struct Frame {
  double x0, y0, w, h;
  Range xr, yr;
  double px(double x) const { return x0 + (x - xr.lo) / (xr.hi - xr.lo) * w; }
  double py(double y) const { return y0 + h - (y - yr.lo) / (yr.hi - yr.lo) * h; }
};

std::string num(double v) { return fmt::format("{:.2f}", v); }

std::string tick_label(double v) {
  if (v == 0.0) return "0";
  const double a = std::abs(v);
  if (a >= 1e9) return fmt::format("{:g}G", v / 1e9);
  if (a >= 1e6) return fmt::format("{:g}M", v / 1e6);
  if (a >= 1e4) return fmt::format("{:g}k", v / 1e3);
  return fmt::format("{:g}", v);
}

std::string header(double width, double height) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
      num(width), num(height));
}

void axes(std::string& out, const Frame& f, bool x_labels) {
  for (double t : nice_ticks(f.yr.lo, f.yr.hi)) {
    if (t < f.yr.lo - 1e-9 || t > f.yr.hi + 1e-9) continue;
    const double y = f.py(t);
    out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#e0e0e0\"/>\n", num(f.x0), num(y),
                       num(f.x0 + f.w), num(y));
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", num(f.x0 - 6), num(y + 4),
                       tick_label(t));
  }
  for (double t : nice_ticks(f.xr.lo, f.xr.hi, 8)) {
    if (t < f.xr.lo - 1e-9 || t > f.xr.hi + 1e-9) continue;
    const double x = f.px(t);
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#999\"/>\n", num(x),
                       num(f.y0 + f.h), num(f.y0 + f.h + 4));
    if (x_labels) {
      out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(x), num(f.y0 + f.h + 16),
                         tick_label(t));
    }
  }
  out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n",
                     num(f.x0), num(f.y0), num(f.w), num(f.h));
}

void legend(std::string& out, double x, double y, const std::vector<std::pair<std::string, std::string>>& items,
            bool dashed_second = false) {
  for (std::size_t n = 0; n < items.size(); ++n) {
    const double yy = y + 16.0 * static_cast<double>(n);
    out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"{}/>\n", num(x),
                       num(yy), num(x + 18), num(yy), items[n].second,
                       dashed_second && n == 1 ? " stroke-dasharray=\"4 3\"" : "");
    out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(x + 24), num(yy + 4), escape(items[n].first));
  }
}

}  // namespace

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
  std::vector<double> ticks;
  if (!(hi > lo) || target < 1) return ticks;
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  const double first = std::ceil(lo / step - 1e-9);
  for (double k = first; k * step <= hi + step * 1e-9; k += 1.0) ticks.push_back(k * step == 0.0 ? 0.0 : k * step);
  return ticks;
}

std::string render(const LineChart& chart) {
  const std::size_t panels = std::max<std::size_t>(1, chart.panels.size());
  const double height = kTop + kBottom + static_cast<double>(panels) * chart.panel_height +
                        static_cast<double>(panels - 1) * kPanelGap;
  std::string out = header(chart.width, height);
  out += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     num(chart.width / 2), escape(chart.title));

  Range xr;
  for (const Panel& p : chart.panels) {
    for (const Series& s : p.series) {
      for (double x : s.x) xr.add(x);
    }
  }
  xr.settle();

  for (std::size_t n = 0; n < chart.panels.size(); ++n) {
    const Panel& p = chart.panels[n];
    Frame f{kLeft, kTop + static_cast<double>(n) * (chart.panel_height + kPanelGap),
            chart.width - kLeft - kRight, chart.panel_height, xr, {}};
    for (const Series& s : p.series) {
      for (double y : s.y) f.yr.add(y);
    }
    f.yr.settle();
    const double pad = 0.05 * (f.yr.hi - f.yr.lo);
    f.yr.lo -= pad;
    f.yr.hi += pad;

    for (const Band& b : p.bands) {
      const double a = std::clamp(f.px(b.x0), f.x0, f.x0 + f.w);
      const double z = std::clamp(f.px(b.x1), f.x0, f.x0 + f.w);
      out += fmt::format(
          "<rect class=\"band\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#4a90d9\" fill-opacity=\"0.15\">"
          "<title>{}</title></rect>\n",
          num(a), num(f.y0), num(z - a), num(f.h), escape(b.label));
      if (!b.label.empty()) {
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"9\" fill=\"#2a5a99\">{}</text>\n", num(a + 2),
                           num(f.y0 + 11), escape(b.label));
      }
    }
    axes(out, f, n + 1 == chart.panels.size());
    out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>\n", num(f.x0), num(f.y0 - 6),
                       escape(p.title));

    std::vector<std::pair<std::string, std::string>> items;
    for (const Series& s : p.series) {
      std::string points;
      for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
        if (!points.empty()) points += ' ';
        points += num(f.px(s.x[i])) + "," + num(f.py(s.y[i]));
      }
      out += fmt::format("<polyline class=\"series\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{} points=\"{}\"/>\n",
                         s.color, s.dashed ? " stroke-dasharray=\"4 3\"" : "", points);
      items.emplace_back(s.label, s.color);
    }
    legend(out, f.x0 + f.w + 14, f.y0 + 12, items);
  }
  const double bottom = height - kBottom;
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                     num(kLeft + (chart.width - kLeft - kRight) / 2), num(bottom + 34), escape(chart.x_label));
  out += fmt::format("<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
                     num(kTop + (bottom - kTop) / 2), escape(chart.y_label));
  out += "</svg>\n";
  return out;
}

std::string render(const HistogramChart& chart) {
  std::string out = header(chart.width, chart.height);
  out += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     num(chart.width / 2), escape(chart.title));
  const double bw = chart.bin_width;
  Range xr;
  for (const HistogramSet& s : chart.sets) {
    for (double v : s.values) {
      xr.add(std::floor(v / bw) * bw);
      xr.add(std::floor(v / bw) * bw + bw);
    }
  }
  xr.settle();

  struct Binned {
    std::vector<std::pair<double, std::size_t>> bins;
    double mean = 0.0, std = 0.0;
  };
  std::vector<Binned> binned;
  Range yr;
  yr.add(0.0);
  for (const HistogramSet& s : chart.sets) {
    Binned b;
    if (!s.values.empty()) {
      std::vector<std::pair<double, std::size_t>> counts;
      std::vector<double> keys;
      for (double v : s.values) keys.push_back(std::floor(v / bw));
      std::sort(keys.begin(), keys.end());
      for (double key : keys) {
        if (counts.empty() || counts.back().first != key) counts.emplace_back(key, 0);
        ++counts.back().second;
      }
      for (auto& [key, count] : counts) {
        b.bins.emplace_back(key * bw, count);
        yr.add(static_cast<double>(count));
      }
      for (double v : s.values) b.mean += v;
      b.mean /= static_cast<double>(s.values.size());
      for (double v : s.values) b.std += (v - b.mean) * (v - b.mean);
      b.std = std::sqrt(b.std / static_cast<double>(s.values.size()));
    }
    binned.push_back(std::move(b));
  }
  yr.settle();
  yr.lo = 0.0;
  yr.hi *= 1.1;

  Frame f{kLeft, kTop, chart.width - kLeft - kRight, chart.height - kTop - kBottom, xr, yr};
  axes(out, f, true);
  std::vector<std::pair<std::string, std::string>> items;
  for (std::size_t n = 0; n < chart.sets.size(); ++n) {
    const HistogramSet& s = chart.sets[n];
    const Binned& b = binned[n];
    for (const auto& [left, count] : b.bins) {
      const double x = f.px(left);
      const double y = f.py(static_cast<double>(count));
      out += fmt::format(
          "<rect class=\"bin\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" fill-opacity=\"0.55\"/>\n",
          num(x), num(y), num(std::max(0.5, f.px(left + bw) - x)), num(f.y0 + f.h - y), s.color);
    }
    if (s.values.empty()) continue;
    const double lo = std::clamp(f.px(b.mean - b.std), f.x0, f.x0 + f.w);
    const double hi = std::clamp(f.px(b.mean + b.std), f.x0, f.x0 + f.w);
    out += fmt::format(
        "<rect class=\"std\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"6\" fill=\"{}\" fill-opacity=\"0.35\"/>\n",
        num(lo), num(f.y0 + 4 + 8.0 * static_cast<double>(n)), num(hi - lo), s.color);
    out += fmt::format(
        "<line class=\"mean\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
        num(f.px(b.mean)), num(f.y0), num(f.y0 + f.h), s.color);
    items.emplace_back(fmt::format("{} (mean {}, std {})", s.label, tick_label(b.mean), tick_label(b.std)), s.color);
  }
  legend(out, kLeft + 8, kTop + 30, items);
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(f.x0 + f.w / 2),
                     num(chart.height - 14), escape(chart.x_label));
  out += fmt::format("<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">slots</text>\n",
                     num(f.y0 + f.h / 2));
  out += "</svg>\n";
  return out;
}

}  // namespace meolb::svg
