#include "imdiff/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "imdiff/errors.hpp"

namespace imdiff {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginL = 70.0, kMarginR = 20.0, kMarginT = 40.0, kMarginB = 50.0;

std::string fixed2(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string compact(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Range {
    double lo = 0.0, hi = 1.0;
    double map(double v, double out_lo, double out_hi) const
    {
        const double t = (v - lo) / (hi - lo);
        return out_lo + t * (out_hi - out_lo);
    }
};

Range nice_range(double lo, double hi)
{
    if (!(hi > lo)) {
        const double pad = std::max(1e-12, std::abs(lo) * 1e-3 + 1e-12);
        return {lo - pad, hi + pad};
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

void append_header(std::string& out, const std::string& title)
{
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    out += "<rect width=\"640\" height=\"480\" fill=\"#ffffff\"/>\n";
    out += "<text x=\"320\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
           "text-anchor=\"middle\">" + title + "</text>\n";
}

} // namespace

std::string palette_color(double t)
{
    // Six-stop dark-to-bright map with monotone luminance.
    static const int stops[6][3] = {
        {68, 1, 84}, {65, 68, 135}, {42, 120, 142},
        {34, 168, 132}, {122, 209, 81}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0);
    const double x = t * 5.0;
    const int s = std::min(4, static_cast<int>(x));
    const double w = x - s;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<int>(std::lround((1.0 - w) * stops[s][0] + w * stops[s + 1][0])),
                  static_cast<int>(std::lround((1.0 - w) * stops[s][1] + w * stops[s + 1][1])),
                  static_cast<int>(std::lround((1.0 - w) * stops[s][2] + w * stops[s + 1][2])));
    return buf;
}

double color_luminance(const std::string& color)
{
    const auto hex = [&](int i) {
        return std::stoi(color.substr(static_cast<size_t>(i), 2), nullptr, 16);
    };
    return 0.299 * hex(1) + 0.587 * hex(3) + 0.114 * hex(5);
}

uint64_t fnv1a(const std::string& s)
{
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string svg_line_plot(const std::vector<PlotSeries>& series,
                          const std::string& title,
                          const std::string& x_label)
{
    double xlo = HUGE_VAL, xhi = -HUGE_VAL, ylo = HUGE_VAL, yhi = -HUGE_VAL;
    for (const auto& s : series)
        for (size_t k = 0; k < s.x.size(); ++k) {
            xlo = std::min(xlo, s.x[k]);
            xhi = std::max(xhi, s.x[k]);
            ylo = std::min(ylo, s.y[k]);
            yhi = std::max(yhi, s.y[k]);
        }
    if (!std::isfinite(xlo)) { xlo = 0.0; xhi = 1.0; ylo = 0.0; yhi = 1.0; }
    const Range rx = nice_range(xlo, xhi);
    const Range ry = nice_range(ylo, yhi);

    const auto px = [&](double v) { return rx.map(v, kMarginL, kWidth - kMarginR); };
    const auto py = [&](double v) { return ry.map(v, kHeight - kMarginB, kMarginT); };

    std::string out;
    append_header(out, title);
    out += "<rect x=\"" + fixed2(kMarginL) + "\" y=\"" + fixed2(kMarginT) + "\" width=\"" +
           fixed2(kWidth - kMarginL - kMarginR) + "\" height=\"" +
           fixed2(kHeight - kMarginT - kMarginB) +
           "\" fill=\"none\" stroke=\"#000000\"/>\n";

    for (int k = 0; k <= 4; ++k) {
        const double xv = rx.lo + (rx.hi - rx.lo) * k / 4.0;
        const double yv = ry.lo + (ry.hi - ry.lo) * k / 4.0;
        out += "<text x=\"" + fixed2(px(xv)) + "\" y=\"" + fixed2(kHeight - kMarginB + 18.0) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
               compact(xv) + "</text>\n";
        out += "<text x=\"" + fixed2(kMarginL - 6.0) + "\" y=\"" + fixed2(py(yv) + 4.0) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
               compact(yv) + "</text>\n";
    }
    out += "<text x=\"" + fixed2((kMarginL + kWidth - kMarginR) / 2.0) + "\" y=\"" +
           fixed2(kHeight - 12.0) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" + x_label +
           "</text>\n";

    double legend_y = kMarginT + 16.0;
    for (const auto& s : series) {
        out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
        for (size_t k = 0; k < s.x.size(); ++k) {
            if (k) out += ' ';
            out += fixed2(px(s.x[k])) + ',' + fixed2(py(s.y[k]));
        }
        out += "\"/>\n";
        out += "<text x=\"" + fixed2(kWidth - kMarginR - 8.0) + "\" y=\"" + fixed2(legend_y) +
               "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\" fill=\"" +
               s.color + "\">" + s.label + "</text>\n";
        legend_y += 16.0;
    }
    out += "</svg>\n";
    return out;
}

namespace {

/// Marching squares on the lattice of cell centers; emits one path per level.
std::string trace_contours(const std::vector<double>& v, int nc, int nr,
                           const ContourOverlay& overlay,
                           double cell_w, double cell_h, double org_x, double org_y)
{
    const auto at = [&](int i, int j) { return v[static_cast<size_t>(j) * nc + i]; };
    const auto px = [&](double i) { return org_x + (i + 0.5) * cell_w; };
    const auto py = [&](double j) { return org_y - (j + 0.5) * cell_h; };

    std::string out;
    for (double level : overlay.levels) {
        std::string d;
        for (int j = 0; j + 1 < nr; ++j)
            for (int i = 0; i + 1 < nc; ++i) {
                const double c00 = at(i, j), c10 = at(i + 1, j);
                const double c01 = at(i, j + 1), c11 = at(i + 1, j + 1);
                if (std::isnan(c00) || std::isnan(c10) || std::isnan(c01) || std::isnan(c11))
                    continue;
                // Edge crossings, linear interpolation.
                struct Pt { double x, y; };
                Pt pts[4];
                int n = 0;
                const auto cross = [&](double a, double b, double xa, double ya, double xb,
                                       double yb) {
                    if ((a < level) == (b < level)) return;
                    const double t = (level - a) / (b - a);
                    pts[n++] = {xa + t * (xb - xa), ya + t * (yb - ya)};
                };
                cross(c00, c10, px(i), py(j), px(i + 1), py(j));
                cross(c10, c11, px(i + 1), py(j), px(i + 1), py(j + 1));
                cross(c11, c01, px(i + 1), py(j + 1), px(i), py(j + 1));
                cross(c01, c00, px(i), py(j + 1), px(i), py(j));
                if (n >= 2) {
                    d += "M" + fixed2(pts[0].x) + " " + fixed2(pts[0].y) + "L" +
                         fixed2(pts[1].x) + " " + fixed2(pts[1].y);
                    if (n == 4)
                        d += "M" + fixed2(pts[2].x) + " " + fixed2(pts[2].y) + "L" +
                             fixed2(pts[3].x) + " " + fixed2(pts[3].y);
                }
            }
        if (!d.empty())
            out += "<path fill=\"none\" stroke=\"" + overlay.color +
                   "\" stroke-width=\"1\" d=\"" + d + "\"/>\n";
    }
    return out;
}

} // namespace

std::string svg_heatmap(const std::vector<double>& values, int ncols, int nrows,
                        double x_min, double x_max, double y_min, double y_max,
                        const std::string& title,
                        const std::vector<ContourOverlay>& overlays)
{
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (double v : values)
        if (!std::isnan(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!std::isfinite(lo)) { lo = 0.0; hi = 1.0; }
    if (hi <= lo) hi = lo + 1.0;

    const double plot_w = kWidth - kMarginL - kMarginR;
    const double plot_h = kHeight - kMarginT - kMarginB;
    const double cw = plot_w / ncols;
    const double ch = plot_h / nrows;
    const double org_y = kHeight - kMarginB; // j = 0 row at the bottom

    std::string out;
    append_header(out, title);
    for (int j = 0; j < nrows; ++j)
        for (int i = 0; i < ncols; ++i) {
            const double v = values[static_cast<size_t>(j) * ncols + i];
            const std::string color =
                std::isnan(v) ? std::string("#c8c8c8") : palette_color((v - lo) / (hi - lo));
            out += "<rect x=\"" + fixed2(kMarginL + i * cw) + "\" y=\"" +
                   fixed2(org_y - (j + 1) * ch) + "\" width=\"" + fixed2(cw + 0.01) +
                   "\" height=\"" + fixed2(ch + 0.01) + "\" fill=\"" + color + "\"/>\n";
        }

    for (const auto& overlay : overlays)
        out += trace_contours(overlay.values, ncols, nrows, overlay, cw, ch, kMarginL, org_y);

    out += "<text x=\"" + fixed2(kMarginL) + "\" y=\"" + fixed2(kHeight - 12.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\">x: [" + compact(x_min) + ", " +
           compact(x_max) + "]  y: [" + compact(y_min) + ", " + compact(y_max) + "]  value: [" +
           compact(lo) + ", " + compact(hi) + "]</text>\n";
    out += "</svg>\n";
    return out;
}

namespace {

void write_svg(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << content;
    if (!out) throw ConfigError("write failed: " + path);
}

} // namespace

void emit_plot(const std::vector<PlotSeries>& series, const std::string& title,
               const std::string& x_label, const std::string& path)
{
    write_svg(path, svg_line_plot(series, title, x_label));
}

void emit_plot(const std::vector<double>& values, int ncols, int nrows,
               double x_min, double x_max, double y_min, double y_max,
               const std::string& title, const std::vector<ContourOverlay>& overlays,
               const std::string& path)
{
    write_svg(path, svg_heatmap(values, ncols, nrows, x_min, x_max, y_min, y_max, title,
                                overlays));
}

} // namespace imdiff
