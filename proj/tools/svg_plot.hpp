#pragma once

#include <string>
#include <vector>

#include "wreathcycle/experiments.hpp"

namespace wreathcycle::cli {

struct PlotLabels {
  std::string title;
  std::string x;
  std::string y;
  std::string comment;  // emitted as an XML comment at the top
};

/// Line plot of the curves over a shared box, with axes, ticks and a legend.
std::string render_svg(const std::vector<Curve>& curves, const PlotLabels& labels);

}  // namespace wreathcycle::cli
