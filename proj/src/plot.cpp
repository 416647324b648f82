#include "oversmooth/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace oversmooth {

PlotAxes parse_plot_axes(const std::string& name) {
  if (name == "log-log" || name == "loglog") return PlotAxes::log_log;
  if (name == "log-linear" || name == "loglinear" || name == "semilog") return PlotAxes::log_linear;
  throw std::invalid_argument(fmt::format("unknown axes '{}'", name));
}

namespace {

constexpr double kWidth = 720, kHeight = 480, kLeft = 70, kRight = 200, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

}  // namespace

std::string render_svg(const std::vector<MeasureSeries>& series, PlotAxes axes, const std::string& title) {
  const bool logx = axes == PlotAxes::log_log;
  std::vector<std::vector<std::pair<double, double>>> pts(series.size());
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (std::size_t s = 0; s < series.size(); ++s)
    for (std::size_t k = 0; k < series[s].size(); ++k) {
      const double ix = series[s].index[k], v = series[s].values[k];
      if (!(v > 0.0) || !std::isfinite(v) || (logx && !(ix > 0.0))) continue;
      const double px = logx ? std::log10(ix) : ix, py = std::log10(v);
      pts[s].emplace_back(px, py);
      x0 = std::min(x0, px);
      x1 = std::max(x1, px);
      y0 = std::min(y0, py);
      y1 = std::max(y1, py);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x1 = x0 + 1;
  y0 = std::floor(y0);
  y1 = std::ceil(y1);
  if (y1 - y0 < 1) y1 = y0 + 1;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kWidth, kHeight);
  if (!title.empty())
    out += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                       kLeft + pw / 2, escape(title));
  out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kLeft,
                     kTop, pw, ph);

  // One tick per decade on y, at most ~12.
  const int ystep = std::max(1, static_cast<int>(std::ceil((y1 - y0) / 12)));
  for (int e = static_cast<int>(y0); e <= static_cast<int>(y1); e += ystep)
    out += fmt::format(
        "<line x1=\"{0}\" x2=\"{1}\" y1=\"{2:.2f}\" y2=\"{2:.2f}\" stroke=\"#ddd\"/>"
        "<text x=\"{3}\" y=\"{4:.2f}\" text-anchor=\"end\">1e{5}</text>\n",
        kLeft, kLeft + pw, sy(e), kLeft - 6, sy(e) + 4, e);
  for (int k = 0; k <= 5; ++k) {
    const double x = x0 + (x1 - x0) * k / 5.0;
    const double label = logx ? std::pow(10.0, x) : x;
    out += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{:.3g}</text>\n", sx(x), kTop + ph + 18,
                       label);
  }
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2, kHeight - 10,
                     logx ? "layer / time (log scale)" : "layer / time");
  out += fmt::format(
      "<text transform=\"translate(16 {}) rotate(-90)\" text-anchor=\"middle\">value (log scale)</text>\n",
      kTop + ph / 2);

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    if (!pts[s].empty()) {
      out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"", color);
      for (std::size_t k = 0; k < pts[s].size(); ++k)
        out += fmt::format("{}{:.2f},{:.2f}", k ? " " : "", sx(pts[s][k].first), sy(pts[s][k].second));
      out += "\"/>\n";
    }
    const double ly = kTop + 10 + 18.0 * static_cast<double>(s);
    out += fmt::format(
        "<line x1=\"{0}\" x2=\"{1}\" y1=\"{2}\" y2=\"{2}\" stroke=\"{3}\" stroke-width=\"2\"/>"
        "<text x=\"{4}\" y=\"{5}\">{6}</text>\n",
        kLeft + pw + 10, kLeft + pw + 30, ly, color, kLeft + pw + 36, ly + 4,
        escape(series[s].run_id + " " + series[s].measure));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace oversmooth
