#pragma once

// File formats shared by the CLI and the harness:
//   - grid bundles: a JSON meta document plus CSV matrices (one CSV when
//     the imaginary part is identically zero, else _re/_im pair),
//   - flow-line CSV files with columns line_id,t,x,xi,C,escaped.
//
// All numeric text is locale-independent (std::to_chars) with 17
// significant digits, so doubles round-trip exactly and identical inputs
// produce byte-identical files.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "sclg/harness.hpp"
#include "sclg/wigner.hpp"

namespace sclg {

inline constexpr int kGridFormatVersion = 1;

// File-system and file-format failures; the CLI maps this to exit code 3.
class io_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc())
        throw io_error("parse_double: bad numeric field '" + s + "'");
    return v;
}

}  // namespace detail

// Writes content to path via a temporary file and rename, so readers never
// observe partial files.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw io_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw io_error("rename failed for " + path.string() + ": " + ec.message());
}

// ---------------------------------------------------------------------------
// Grid bundles
// ---------------------------------------------------------------------------

struct GridFileBundle {
    std::filesystem::path meta;
    std::vector<std::filesystem::path> data;  // one CSV (real) or two (_re, _im)
};

namespace detail {

inline std::string grid_csv(const SampledGrid& g, bool imaginary) {
    std::string out;
    out.reserve(static_cast<size_t>(g.x_axis.count) * g.y_axis.count * 20);
    for (int i = 0; i < g.x_axis.count; ++i) {
        for (int j = 0; j < g.y_axis.count; ++j) {
            if (j) out.push_back(',');
            const complexd v = g.at(i, j);
            out += format_double(imaginary ? v.imag() : v.real());
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace detail

// Writes <prefix>.json plus <prefix>.csv, or <prefix>_re.csv and
// <prefix>_im.csv when the field has a nonzero imaginary part anywhere.
inline GridFileBundle write_grid_bundle(const SampledGrid& g, const std::filesystem::path& prefix) {
    bool complex_data = false;
    for (const auto& v : g.values)
        if (v.imag() != 0.0) {
            complex_data = true;
            break;
        }

    nlohmann::json meta;
    meta["format_version"] = kGridFormatVersion;
    meta["h"] = g.h;
    meta["quantity"] = g.quantity;
    if (g.time) meta["time"] = *g.time;
    meta["complex"] = complex_data;
    meta["axes"] = {
        {"x", {{"min", g.x_axis.min}, {"max", g.x_axis.max}, {"count", g.x_axis.count}}},
        {"y", {{"min", g.y_axis.min}, {"max", g.y_axis.max}, {"count", g.y_axis.count}}}};

    GridFileBundle bundle;
    bundle.meta = prefix.string() + ".json";
    write_text_atomic(bundle.meta, meta.dump(2) + "\n");
    if (complex_data) {
        bundle.data = {prefix.string() + "_re.csv", prefix.string() + "_im.csv"};
        write_text_atomic(bundle.data[0], detail::grid_csv(g, false));
        write_text_atomic(bundle.data[1], detail::grid_csv(g, true));
    } else {
        bundle.data = {prefix.string() + ".csv"};
        write_text_atomic(bundle.data[0], detail::grid_csv(g, false));
    }
    return bundle;
}

namespace detail {

inline std::vector<std::vector<double>> read_csv_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) row.push_back(parse_double(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

inline SampledGrid read_grid_bundle(const std::filesystem::path& prefix) {
    std::ifstream meta_in(prefix.string() + ".json");
    if (!meta_in) throw io_error("cannot open " + prefix.string() + ".json");
    nlohmann::json meta = nlohmann::json::parse(meta_in);
    if (meta.at("format_version").get<int>() != kGridFormatVersion)
        throw io_error("read_grid_bundle: unsupported format version");
    Axis x{meta["axes"]["x"]["min"].get<double>(), meta["axes"]["x"]["max"].get<double>(),
           meta["axes"]["x"]["count"].get<int>()};
    Axis y{meta["axes"]["y"]["min"].get<double>(), meta["axes"]["y"]["max"].get<double>(),
           meta["axes"]["y"]["count"].get<int>()};
    SampledGrid g(meta["h"].get<double>(), x, y, meta.value("quantity", std::string{}));
    if (meta.contains("time")) g.time = meta["time"].get<double>();

    const bool complex_data = meta.value("complex", false);
    const auto re = detail::read_csv_matrix(complex_data ? prefix.string() + "_re.csv"
                                                         : prefix.string() + ".csv");
    if (static_cast<int>(re.size()) != x.count)
        throw io_error("read_grid_bundle: row count mismatch");
    std::vector<std::vector<double>> im;
    if (complex_data) im = detail::read_csv_matrix(prefix.string() + "_im.csv");
    for (int i = 0; i < x.count; ++i) {
        if (static_cast<int>(re[i].size()) != y.count)
            throw io_error("read_grid_bundle: column count mismatch");
        for (int j = 0; j < y.count; ++j)
            g.at(i, j) = complexd(re[i][j], complex_data ? im[i][j] : 0.0);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Flow-line files
// ---------------------------------------------------------------------------

inline void write_flow_lines(const std::vector<FlowLine>& lines,
                             const std::filesystem::path& path) {
    std::string out = "line_id,t,x,xi,C,escaped\n";
    for (const auto& line : lines)
        for (const auto& p : line.points) {
            out += std::to_string(line.id);
            out.push_back(',');
            out += detail::format_double(p.t);
            out.push_back(',');
            out += detail::format_double(p.x);
            out.push_back(',');
            out += detail::format_double(p.xi);
            out.push_back(',');
            out += detail::format_double(p.C);
            out.push_back(',');
            out += line.escaped ? '1' : '0';
            out.push_back('\n');
        }
    write_text_atomic(path, out);
}

inline std::vector<FlowLine> read_flow_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    std::string header;
    if (!std::getline(in, header) || header != "line_id,t,x,xi,C,escaped")
        throw io_error("read_flow_lines: bad header");
    std::vector<FlowLine> lines;
    std::string row;
    while (std::getline(in, row)) {
        if (row.empty()) continue;
        std::stringstream ss(row);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 6) throw io_error("read_flow_lines: bad row");
        const int id = std::stoi(fields[0]);
        if (lines.empty() || lines.back().id != id) {
            lines.push_back(FlowLine{});
            lines.back().id = id;
        }
        lines.back().points.push_back({detail::parse_double(fields[1]),
                                       detail::parse_double(fields[2]),
                                       detail::parse_double(fields[3]),
                                       detail::parse_double(fields[4])});
        lines.back().escaped = fields[5] == "1";
    }
    return lines;
}

// ---------------------------------------------------------------------------
// Transport-order reports
// ---------------------------------------------------------------------------

inline nlohmann::json egorov_report_to_json(const EgorovReport& r) {
    nlohmann::json j;
    j["m"] = r.m;
    j["n"] = r.n;
    j["t"] = r.t;
    j["dt"] = r.dt;
    j["grid_count"] = r.grid_count;
    j["h_values"] = r.h_values;
    j["grid_extents"] = r.grid_extents;
    j["sup_errors"] = r.sup_errors;
    j["l2_errors"] = r.l2_errors;
    j["weak_errors"] = r.weak_errors;
    j["sup_order"] = r.sup_order;
    j["l2_order"] = r.l2_order;
    j["weak_order"] = r.weak_order;
    return j;
}

inline EgorovReport egorov_report_from_json(const nlohmann::json& j) {
    EgorovReport r;
    r.m = j.at("m").get<int>();
    r.n = j.at("n").get<int>();
    r.t = j.at("t").get<double>();
    r.dt = j.at("dt").get<double>();
    r.grid_count = j.at("grid_count").get<int>();
    r.h_values = j.at("h_values").get<std::vector<double>>();
    r.grid_extents = j.at("grid_extents").get<std::vector<double>>();
    r.sup_errors = j.at("sup_errors").get<std::vector<double>>();
    r.l2_errors = j.at("l2_errors").get<std::vector<double>>();
    r.weak_errors = j.at("weak_errors").get<std::vector<double>>();
    r.sup_order = j.at("sup_order").get<double>();
    r.l2_order = j.at("l2_order").get<double>();
    r.weak_order = j.at("weak_order").get<double>();
    return r;
}

}  // namespace sclg
