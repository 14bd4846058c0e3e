#pragma once

// Minimal deterministic SVG emission.  Data files are the authoritative
// output; these plots are a convenience layer with no raster dependencies.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sclg/grid_io.hpp"
#include "sclg/harness.hpp"

namespace sclg {

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

}  // namespace detail

// Contact sheet of |field| heatmaps laid out three per row.  Each frame is
// downsampled to at most max_cells x max_cells grayscale rectangles.
inline void svg_write_heatmap_sheet(const std::vector<SampledGrid>& frames,
                                    const std::filesystem::path& path, int max_cells = 64) {
    const int ncols = 3;
    const int nrows = (static_cast<int>(frames.size()) + ncols - 1) / ncols;
    const double cell = 200.0, pad = 10.0;
    const double width = ncols * (cell + pad) + pad;
    const double height = nrows * (cell + pad) + pad;

    double vmax = 0.0;
    for (const auto& f : frames) vmax = std::max(vmax, grid_sup_abs(f));
    if (vmax <= 0.0) vmax = 1.0;

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::svg_num(width) +
           "\" height=\"" + detail::svg_num(height) + "\" viewBox=\"0 0 " +
           detail::svg_num(width) + " " + detail::svg_num(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (size_t k = 0; k < frames.size(); ++k) {
        const auto& f = frames[k];
        const double ox = pad + (k % ncols) * (cell + pad);
        const double oy = pad + (k / ncols) * (cell + pad);
        const int sx = std::max(1, f.x_axis.count / max_cells);
        const int sy = std::max(1, f.y_axis.count / max_cells);
        const int nx = (f.x_axis.count + sx - 1) / sx;
        const int ny = (f.y_axis.count + sy - 1) / sy;
        const double wx = cell / nx, wy = cell / ny;
        out += "<g>\n";
        for (int bi = 0; bi < nx; ++bi)
            for (int bj = 0; bj < ny; ++bj) {
                double acc = 0.0;
                int cnt = 0;
                for (int i = bi * sx; i < std::min((bi + 1) * sx, f.x_axis.count); ++i)
                    for (int j = bj * sy; j < std::min((bj + 1) * sy, f.y_axis.count); ++j) {
                        acc += std::abs(f.at(i, j));
                        ++cnt;
                    }
                const int level = static_cast<int>(std::lround(255.0 * (acc / cnt) / vmax));
                const int g = 255 - std::clamp(level, 0, 255);
                out += "<rect x=\"" + detail::svg_num(ox + bi * wx) + "\" y=\"" +
                       detail::svg_num(oy + (ny - 1 - bj) * wy) + "\" width=\"" +
                       detail::svg_num(wx + 0.05) + "\" height=\"" + detail::svg_num(wy + 0.05) +
                       "\" fill=\"rgb(" + std::to_string(g) + "," + std::to_string(g) + "," +
                       std::to_string(g) + ")\"/>\n";
            }
        out += "</g>\n";
    }
    out += "</svg>\n";
    write_text_atomic(path, out);
}

// Phase-plane flow portrait: one polyline per flow line, stationary points
// marked as filled circles.
inline void svg_write_flow_portrait(const Figure2Result& fig, const std::filesystem::path& path,
                                    double half_extent = 1.2) {
    const double size = 640.0, pad = 20.0;
    const auto map_x = [&](double x) {
        return pad + (x + half_extent) / (2.0 * half_extent) * (size - 2.0 * pad);
    };
    const auto map_y = [&](double xi) {
        return size - pad - (xi + half_extent) / (2.0 * half_extent) * (size - 2.0 * pad);
    };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::svg_num(size) +
           "\" height=\"" + detail::svg_num(size) + "\" viewBox=\"0 0 " + detail::svg_num(size) +
           " " + detail::svg_num(size) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (const auto& line : fig.lines) {
        if (line.points.size() < 2) continue;
        std::string pts;
        bool clipped = false;
        for (const auto& p : line.points) {
            if (std::fabs(p.x) > 2.0 * half_extent || std::fabs(p.xi) > 2.0 * half_extent) {
                clipped = true;
                break;
            }
            pts += detail::svg_num(map_x(p.x)) + "," + detail::svg_num(map_y(p.xi)) + " ";
        }
        (void)clipped;
        if (pts.empty()) continue;
        out += "<polyline fill=\"none\" stroke=\"#336699\" stroke-width=\"1\" points=\"" + pts +
               "\"/>\n";
    }
    for (const auto& p : fig.stationary_points)
        out += "<circle cx=\"" + detail::svg_num(map_x(p.x)) + "\" cy=\"" +
               detail::svg_num(map_y(p.xi)) + "\" r=\"4\" fill=\"#cc3333\"/>\n";
    out += "</svg>\n";
    write_text_atomic(path, out);
}

}  // namespace sclg
