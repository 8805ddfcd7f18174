#pragma once

#include <string>
#include <vector>

#include "exlab/distribution.hpp"

namespace exlab {

/// Self-contained bar chart of a distribution (one rect per window entry).
void svg_bar_chart(const std::string& path, const WealthDistribution& p,
                   const std::string& title);

/// Self-contained polyline chart; log_y plots log10 of positive y values.
void svg_line_chart(const std::string& path, const std::vector<double>& xs,
                    const std::vector<double>& ys, const std::string& title,
                    bool log_y = false);

}  // namespace exlab
