#pragma once

// Implementations behind the sclg command-line subcommands.  Kept in the
// library so both the CLI binary and the tests exercise the same code.

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "sclg/grid_io.hpp"
#include "sclg/harness.hpp"
#include "sclg/svg.hpp"

namespace sclg::cli {

struct GridSpec {
    Axis x;
    Axis y;
};

// Parses "min:max:count[,min:max:count]"; one axis triple means a square
// grid.
inline GridSpec parse_grid_spec(const std::string& spec) {
    const auto parse_axis = [](const std::string& s) {
        Axis a;
        const auto c1 = s.find(':');
        const auto c2 = s.find(':', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::invalid_argument("grid spec must be min:max:count");
        size_t used = 0;
        a.min = std::stod(s.substr(0, c1), &used);
        if (used != c1) throw std::invalid_argument("bad grid min");
        a.max = std::stod(s.substr(c1 + 1, c2 - c1 - 1), &used);
        if (used != c2 - c1 - 1) throw std::invalid_argument("bad grid max");
        const std::string count_str = s.substr(c2 + 1);
        a.count = std::stoi(count_str, &used);
        if (used != count_str.size()) throw std::invalid_argument("bad grid count");
        a.validate();
        return a;
    };
    GridSpec g;
    const auto comma = spec.find(',');
    try {
        if (comma == std::string::npos) {
            g.x = parse_axis(spec);
            g.y = g.x;
        } else {
            g.x = parse_axis(spec.substr(0, comma));
            g.y = parse_axis(spec.substr(comma + 1));
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed grid spec '" + spec + "'");
    }
    return g;
}

inline std::string format_norm(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12f", v);
    return buf;
}

// modes --kind {hg,lg}: samples one mode field, writes the bundle, prints
// the L2 norm computed by grid quadrature.
inline void cmd_modes(const std::string& kind, int i1, int i2, double h, const GridSpec& grid,
                      const std::filesystem::path& out_prefix, std::ostream& log) {
    SampledGrid field;
    if (kind == "hg") {
        field = evaluate_grid(h, grid.x, grid.y,
                              [&](double x, double y) {
                                  return complexd(hg_mode_2d({i1, i2}, x, y, h), 0.0);
                              },
                              "hg_mode(" + std::to_string(i1) + "," + std::to_string(i2) + ")");
    } else if (kind == "lg") {
        field = evaluate_grid(h, grid.x, grid.y,
                              [&](double x, double y) { return lg_mode(i1, i2, x, y, h); },
                              "lg_mode(" + std::to_string(i1) + "," + std::to_string(i2) + ")");
    } else {
        throw std::invalid_argument("cmd_modes: kind must be hg or lg");
    }
    write_grid_bundle(field, out_prefix);
    log << "L2 norm = " << format_norm(grid_l2_norm(field)) << "\n";
}

// wigner --kind {standard,extended} on HG basis inputs.
inline void cmd_wigner(const std::string& kind, int i1, int i2, double h, const GridSpec& grid,
                       const std::filesystem::path& out_prefix, std::ostream& log) {
    SampledGrid field;
    if (kind == "standard") {
        field = wigner_standard(basis_vector(i1, h), basis_vector(i2, h), grid.x, grid.y, h,
                                WignerMethod::quadrature);
    } else if (kind == "extended") {
        field = wigner_extended(basis_matrix(i1, i2, h), grid.x, grid.y, h);
    } else {
        throw std::invalid_argument("cmd_wigner: kind must be standard or extended");
    }
    field.quantity = kind + "_wigner(" + std::to_string(i1) + "," + std::to_string(i2) + ")";
    write_grid_bundle(field, out_prefix);
    log << "L2 norm = " << format_norm(grid_l2_norm(field)) << "\n";
}

namespace detail {

inline std::vector<PhaseSpaceState> read_seed_file(const std::filesystem::path& path, double h,
                                                   double r2) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open seed file " + path.string());
    std::vector<PhaseSpaceState> seeds;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "x,xi") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw io_error("seed file rows must be 'x,xi'");
        seeds.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)), h,
                         r2});
    }
    return seeds;
}

// closed-form route: sample each classified trajectory at the integrator's
// output times; pole passages terminate the line like an escape would
inline std::vector<FlowLine> closed_form_lines(const std::vector<PhaseSpaceState>& seeds,
                                               double t_max, double dt, int stride) {
    std::vector<FlowLine> lines;
    int id = 0;
    for (const auto& seed : seeds) {
        FlowLine line;
        line.id = id++;
        const TrajectoryClass cls = classify_trajectory(seed);
        line.points.push_back({0.0, seed.x, seed.xi, cls.C});
        if (cls.kind != TrajectoryKind::hyperbolic_fixed &&
            cls.kind != TrajectoryKind::elliptic_fixed) {
            const long nsteps = std::lround(std::ceil(t_max / dt));
            for (long k = stride; k <= nsteps; k += stride) {
                const double t = std::min(k * dt, t_max);
                try {
                    const PhaseSpaceState s = closed_form_state(cls, seed, t);
                    if (std::fabs(s.x) + std::fabs(s.xi) > 1e6) {
                        line.escaped = true;
                        line.escape_time = t;
                        break;
                    }
                    line.points.push_back({t, s.x, s.xi, cls.C});
                } catch (const pole_proximity_error&) {
                    line.escaped = true;
                    line.escape_time = t;
                    break;
                }
            }
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

}  // namespace detail

// flow: integrates (or evaluates in closed form) a seed set and writes the
// polyline CSV.
inline void cmd_flow(double h, double r2, const std::string& seeds_path, double t_max, double dt,
                     const std::string& method, const std::filesystem::path& out,
                     std::ostream& log) {
    if (!(t_max > 0.0)) throw std::invalid_argument("cmd_flow: t_max must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("cmd_flow: dt must be positive");
    if (method != "midpoint" && method != "closed")
        throw std::invalid_argument("cmd_flow: method must be midpoint or closed");
    const std::vector<PhaseSpaceState> seeds =
        seeds_path.empty() ? default_flow_seeds(h, r2)
                           : detail::read_seed_file(seeds_path, h, r2);
    const int stride = 25;
    const std::vector<FlowLine> lines =
        (method == "midpoint") ? flow_lines(seeds, t_max, dt, stride)
                               : detail::closed_form_lines(seeds, t_max, dt, stride);
    write_flow_lines(lines, out);
    int escaped = 0;
    for (const auto& l : lines) escaped += l.escaped ? 1 : 0;
    log << "lines = " << lines.size() << ", escaped = " << escaped << "\n";
}

// evolve: propagated LG field bundle plus an |field| sidecar CSV.
inline void cmd_evolve(int m, int n, double t, double h, const GridSpec& grid,
                       const std::filesystem::path& out_prefix, std::ostream& log) {
    const SampledGrid field = evolved_lg_field(m, n, t, h, grid.x, grid.y);
    write_grid_bundle(field, out_prefix);

    SampledGrid abs_field(h, grid.x, grid.y, "abs " + field.quantity);
    abs_field.time = t;
    for (size_t i = 0; i < field.values.size(); ++i)
        abs_field.values[i] = std::abs(field.values[i]);
    write_text_atomic(out_prefix.string() + "_abs.csv", sclg::detail::grid_csv(abs_field, false));

    log << "L2 norm = " << format_norm(grid_l2_norm(field)) << "\n";
    if (m == 0 && n == 0 && h == 1.0) {
        const double T = t / std::numbers::sqrt2;
        double resid = 0.0;
        for (int i = 0; i < grid.x.count; ++i)
            for (int j = 0; j < grid.y.count; ++j)
                resid = std::max(resid, std::abs(field.at(i, j) -
                                                 evolved_ground_closed_form(
                                                     T, grid.x.at(i), grid.y.at(j))));
        log << "closed-form residual = " << format_norm(resid) << "\n";
    }
}

// egorov: convergence-order report as JSON.
inline void cmd_egorov(int m, int n, double t, const std::vector<double>& h_list, int grid_count,
                       const std::filesystem::path& report_path, std::ostream& log) {
    const EgorovReport rep = egorov_order(m, n, t, h_list, grid_count);
    write_text_atomic(report_path, egorov_report_to_json(rep).dump(2) + "\n");
    log << "sup order = " << format_norm(rep.sup_order)
        << ", l2 order = " << format_norm(rep.l2_order)
        << ", weak order = " << format_norm(rep.weak_order) << "\n";
}

// figures: deterministic reproduction artifacts for the two figures.
inline void cmd_figures(int which, const std::filesystem::path& out_dir, std::ostream& log) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create " + out_dir.string() + ": " + ec.message());
    if (which == 1) {
        const Axis axis = symmetric_axis(4.0, 256);
        const Figure1Result fig = figure1_frames(axis);
        for (int k = 0; k <= 8; ++k)
            write_grid_bundle(fig.frames[k], out_dir / ("frame_k" + std::to_string(k)));
        svg_write_heatmap_sheet(fig.frames, out_dir / "figure1.svg");
        double max_resid = 0.0;
        for (const double r : fig.residuals) max_resid = std::max(max_resid, r);
        log << "frames = 9, max closed-form residual = " << format_norm(max_resid) << "\n";
    } else if (which == 2) {
        const Figure2Result fig = figure2_flowlines();
        write_flow_lines(fig.lines, out_dir / "flowlines.csv");
        svg_write_flow_portrait(fig, out_dir / "figure2.svg");
        log << "lines = " << fig.lines.size() << ", stationary points = 4\n";
    } else {
        throw std::invalid_argument("cmd_figures: which must be 1 or 2");
    }
}

}  // namespace sclg::cli
