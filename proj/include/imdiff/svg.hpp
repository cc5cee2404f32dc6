#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace imdiff {

/// Deterministic SVG rendering: fixed canvas, fixed palette, fixed numeric
/// precision, so identical inputs produce identical bytes.

struct PlotSeries {
    std::string label;
    std::string color; // "#rrggbb"
    std::vector<double> x;
    std::vector<double> y;
};

std::string svg_line_plot(const std::vector<PlotSeries>& series,
                          const std::string& title,
                          const std::string& x_label);

struct ContourOverlay {
    std::vector<double> values; // same layout as the heatmap values
    std::vector<double> levels;
    std::string color;
};

/// Cell-centered heatmap of a row-major ncols x nrows matrix with optional
/// contour overlays (marching squares on cell centers).  NaN cells are drawn
/// gray and skipped by the contour tracer.
std::string svg_heatmap(const std::vector<double>& values, int ncols, int nrows,
                        double x_min, double x_max, double y_min, double y_max,
                        const std::string& title,
                        const std::vector<ContourOverlay>& overlays = {});

/// Renders a line plot (or heatmap via the overload) and writes it to path.
void emit_plot(const std::vector<PlotSeries>& series, const std::string& title,
               const std::string& x_label, const std::string& path);
void emit_plot(const std::vector<double>& values, int ncols, int nrows,
               double x_min, double x_max, double y_min, double y_max,
               const std::string& title, const std::vector<ContourOverlay>& overlays,
               const std::string& path);

/// Palette used by heatmaps; t in [0, 1], luminance increases with t.
std::string palette_color(double t);

/// Rec. 601 luminance of a "#rrggbb" color, for monotonicity checks.
double color_luminance(const std::string& color);

/// FNV-1a checksum, used by the visual-regression tests.
uint64_t fnv1a(const std::string& s);

} // namespace imdiff
