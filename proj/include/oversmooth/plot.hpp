#pragma once

#include <string>
#include <vector>

#include "oversmooth/measures.hpp"

namespace oversmooth {

// log_log: log10 of the index on x. log_linear: index as-is. The y axis is
// always log10 of the value. Points that cannot be placed (value <= 0, or
// index <= 0 on a log x axis) are skipped.
enum class PlotAxes { log_log, log_linear };

PlotAxes parse_plot_axes(const std::string& name);

std::string render_svg(const std::vector<MeasureSeries>& series, PlotAxes axes, const std::string& title = "");

}  // namespace oversmooth
