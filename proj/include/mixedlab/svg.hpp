#pragma once

// Minimal static SVG output: field heatmaps and multi-curve line plots.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "grid.hpp"

namespace mixedlab {

namespace detail {

inline std::string svg_color(double v) {
    // blue (-1) -> white (0) -> red (+1)
    v = std::clamp(v, -1.0, 1.0);
    int r, g, b;
    if (v >= 0.0) {
        r = 255;
        g = b = static_cast<int>(255.0 * (1.0 - v));
    } else {
        b = 255;
        r = g = static_cast<int>(255.0 * (1.0 + v));
    }
    return "rgb(" + std::to_string(r) + ',' + std::to_string(g) + ',' + std::to_string(b) + ')';
}

} // namespace detail

inline void write_svg_heatmap(const std::string& path, const Field& f, int cell = 6) {
    std::ofstream os(path);
    if (!os) throw config_error("cannot open " + path);
    const auto& g = f.grid;
    double m = 1e-300;
    for (double v : f.values) m = std::max(m, std::abs(v));
    int w = g.n_rho * cell, h = g.n_t * cell;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\">\n";
    for (int i = 0; i < g.n_t; ++i)
        for (int j = 0; j < g.n_rho; ++j)
            os << "<rect x=\"" << j * cell << "\" y=\"" << (g.n_t - 1 - i) * cell
               << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
               << detail::svg_color(f.at(i, j) / m) << "\"/>\n";
    os << "</svg>\n";
}

struct Curve {
    std::string name;
    std::vector<double> y;
};

// log-scale line plot over an implicit 0..n-1 x axis
inline void write_svg_curves(const std::string& path, const std::vector<Curve>& curves,
                             int width = 480, int height = 320) {
    std::ofstream os(path);
    if (!os) throw config_error("cannot open " + path);
    double lo = 1e300, hi = -1e300;
    std::size_t n = 0;
    for (const auto& c : curves)
        for (double v : c.y) {
            if (v > 0.0) {
                lo = std::min(lo, std::log10(v));
                hi = std::max(hi, std::log10(v));
            }
            n = std::max(n, c.y.size());
        }
    if (n < 2 || hi < lo) {
        lo = 0.0;
        hi = 1.0;
        n = std::max<std::size_t>(n, 2);
    }
    if (hi - lo < 1e-12) hi = lo + 1.0;
    const int margin = 40;
    const char* colors[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d35400", "#16a085"};
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        os << "<polyline fill=\"none\" stroke=\"" << colors[c % 6] << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < curves[c].y.size(); ++i) {
            double v = curves[c].y[i] > 0.0 ? std::log10(curves[c].y[i]) : lo;
            double x = margin + (width - 2.0 * margin) * i / (n - 1);
            double y = height - margin - (height - 2.0 * margin) * (v - lo) / (hi - lo);
            os << x << ',' << y << ' ';
        }
        os << "\"/>\n<text x=\"" << (margin + 4) << "\" y=\"" << (margin + 16 * (c + 1))
           << "\" fill=\"" << colors[c % 6] << "\" font-size=\"13\">" << curves[c].name
           << "</text>\n";
    }
    os << "</svg>\n";
}

} // namespace mixedlab
