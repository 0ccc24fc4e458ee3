#pragma once

#include <span>
#include <string>
#include <vector>

namespace repclust {

/// 1-based ranks with ties given the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman rank correlation (Pearson correlation of average ranks).
/// Returns NaN when either side has zero rank variance or fewer than two
/// points.
double spearman(std::span<const double> x, std::span<const double> y);

struct ScatterPoint {
    double x = 0.0;
    double y = 0.0;
    std::string label;
};

/// Static SVG 1.1 scatter plot.
std::string scatter_svg(const std::vector<ScatterPoint>& points, const std::string& x_label,
                        const std::string& y_label, const std::string& title);

}  // namespace repclust
