#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wreathcycle/format.hpp"

namespace wreathcycle::cli {
namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 440;
constexpr double kLeft = 60;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 50;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v) {
  // Rounded to 0.01 px so the file stays small and stable.
  return format_double(std::round(v * 100) / 100);
}

}  // namespace

std::string render_svg(const std::vector<Curve>& curves, const PlotLabels& labels) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& c : curves) {
    for (double x : c.x) x_lo = std::min(x_lo, x), x_hi = std::max(x_hi, x);
    for (double y : c.y) y_lo = std::min(y_lo, y), y_hi = std::max(y_hi, y);
  }
  if (!(x_hi > x_lo)) x_lo = 0, x_hi = 1;
  if (!(y_hi > y_lo)) y_lo = 0, y_hi = 1;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - y_lo) / (y_hi - y_lo) * ph; };

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (!labels.comment.empty()) out += "<!-- " + escape(labels.comment) + " -->\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth) + "\" height=\"" +
         fixed(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fixed(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(labels.title) + "</text>\n";

  // Axes box and ticks.
  out += "<rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop) + "\" width=\"" + fixed(pw) + "\" height=\"" +
         fixed(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / 5;
    const double fy = y_lo + (y_hi - y_lo) * i / 5;
    out += "<line x1=\"" + fixed(sx(fx)) + "\" y1=\"" + fixed(kTop + ph) + "\" x2=\"" + fixed(sx(fx)) +
           "\" y2=\"" + fixed(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fixed(sx(fx)) + "\" y=\"" + fixed(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
           format_double(std::round(fx * 1000) / 1000) + "</text>\n";
    out += "<line x1=\"" + fixed(kLeft - 5) + "\" y1=\"" + fixed(sy(fy)) + "\" x2=\"" + fixed(kLeft) +
           "\" y2=\"" + fixed(sy(fy)) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fixed(kLeft - 8) + "\" y=\"" + fixed(sy(fy) + 4) + "\" text-anchor=\"end\">" +
           format_double(std::round(fy * 1000) / 1000) + "</text>\n";
  }
  out += "<text x=\"" + fixed(kLeft + pw / 2) + "\" y=\"" + fixed(kHeight - 10) +
         "\" text-anchor=\"middle\">" + escape(labels.x) + "</text>\n";
  out += "<text x=\"15\" y=\"" + fixed(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
         fixed(kTop + ph / 2) + ")\">" + escape(labels.y) + "</text>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = kColors[c % std::size(kColors)];
    std::string points;
    for (std::size_t i = 0; i < curves[c].x.size(); ++i) {
      if (!points.empty()) points += ' ';
      points += fixed(sx(curves[c].x[i])) + "," + fixed(sy(curves[c].y[i]));
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" +
           points + "\"/>\n";
    const double ly = kTop + 16 + 16 * static_cast<double>(c);
    out += "<line x1=\"" + fixed(kLeft + pw - 150) + "\" y1=\"" + fixed(ly - 4) + "\" x2=\"" +
           fixed(kLeft + pw - 130) + "\" y2=\"" + fixed(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fixed(kLeft + pw - 125) + "\" y=\"" + fixed(ly) + "\">" + escape(curves[c].name) +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace wreathcycle::cli
