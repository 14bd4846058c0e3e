// sclg command-line tool: mode and Wigner fields, Hamilton flow lines,
// propagated LG fields, transport-order reports and figure artifacts.
//
// Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numerical failure.
// SCLG_THREADS caps internal parallelism.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sclg/sclg.hpp"

namespace {

int run_guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const sclg::io_error& e) {
        std::cerr << "sclg: I/O error: " << e.what() << "\n";
        return 3;
    } catch (const sclg::transport_failure_error& e) {
        std::cerr << "sclg: numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const sclg::flow_newton_error& e) {
        std::cerr << "sclg: numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "sclg: argument error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "sclg: argument error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "sclg: numerical failure: " << e.what() << "\n";
        return 4;
    }
}

std::vector<double> parse_h_list(const std::string& csv) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos <= csv.size()) {
        const size_t comma = csv.find(',', pos);
        const std::string field =
            csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (field.empty()) throw std::invalid_argument("empty entry in h list");
        out.push_back(std::stod(field));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semiclassical Laguerre-Gaussian mode toolkit"};
    app.require_subcommand(1);
    // --h is the semiclassical parameter throughout, so help is --help only
    app.set_help_flag("--help", "print usage");

    // modes
    std::string modes_kind;
    int modes_m = 0, modes_n = 0, modes_j = 0, modes_k = 0;
    double modes_h = 1.0;
    std::string modes_grid = "-4:4:256";
    std::string modes_out = "mode";
    auto* modes = app.add_subcommand("modes", "sample an HG or LG mode field");
    modes->set_help_flag("--help", "print usage");
    modes->add_option("--kind", modes_kind, "hg or lg")->required();
    modes->add_option("--m", modes_m, "HG x-order");
    modes->add_option("--n", modes_n, "HG y-order");
    modes->add_option("--j", modes_j, "LG first order");
    modes->add_option("--k", modes_k, "LG second order");
    modes->add_option("--h", modes_h, "semiclassical parameter")->required();
    modes->add_option("--grid", modes_grid, "min:max:count[,min:max:count]");
    modes->add_option("--out", modes_out, "output path prefix");

    // wigner
    std::string wig_kind;
    int wig_a = 0, wig_b = 0;
    double wig_h = 1.0;
    std::string wig_grid = "-4:4:256";
    std::string wig_out = "wigner";
    auto* wig = app.add_subcommand("wigner", "Wigner transform of HG basis inputs");
    wig->set_help_flag("--help", "print usage");
    wig->add_option("--kind", wig_kind, "standard or extended")->required();
    wig->add_option("--m", wig_a, "first HG order");
    wig->add_option("--n", wig_b, "second HG order");
    wig->add_option("--h", wig_h, "semiclassical parameter")->required();
    wig->add_option("--grid", wig_grid, "min:max:count[,min:max:count]");
    wig->add_option("--out", wig_out, "output path prefix");

    // flow
    double flow_h = 0.1, flow_r2 = 4.0, flow_tmax = 12.0, flow_dt = 1e-3;
    std::string flow_seeds, flow_method = "midpoint", flow_out = "flowlines.csv";
    auto* flow = app.add_subcommand("flow", "Hamilton flow lines in the (x, xi) plane");
    flow->set_help_flag("--help", "print usage");
    flow->add_option("--h", flow_h, "semiclassical parameter");
    flow->add_option("--r2", flow_r2, "symbol scale r^2");
    flow->add_option("--seeds", flow_seeds, "CSV seed file with x,xi rows (default lattice)");
    flow->add_option("--t-max", flow_tmax, "integration horizon");
    flow->add_option("--dt", flow_dt, "integrator step");
    flow->add_option("--method", flow_method, "midpoint or closed");
    flow->add_option("--out", flow_out, "output CSV path");

    // evolve
    int ev_m = 0, ev_n = 0;
    double ev_t = 0.0, ev_h = 1.0;
    std::string ev_grid = "-4:4:256", ev_out = "evolved";
    auto* evolve = app.add_subcommand("evolve", "propagated LG field for a mode pair");
    evolve->set_help_flag("--help", "print usage");
    evolve->add_option("--m", ev_m, "first mode index")->required();
    evolve->add_option("--n", ev_n, "second mode index")->required();
    evolve->add_option("--t", ev_t, "evolution time")->required();
    evolve->add_option("--h", ev_h, "semiclassical parameter")->required();
    evolve->add_option("--grid", ev_grid, "min:max:count[,min:max:count]");
    evolve->add_option("--out", ev_out, "output path prefix");

    // egorov
    int eg_m = 0, eg_n = 0, eg_count = 256;
    double eg_t = 1.0;
    std::string eg_hlist = "0.4,0.2,0.1,0.05", eg_report = "egorov.json";
    auto* egorov = app.add_subcommand("egorov", "transport-error convergence report");
    egorov->set_help_flag("--help", "print usage");
    egorov->add_option("--m", eg_m, "first mode index (0 or 1)");
    egorov->add_option("--n", eg_n, "second mode index (0 or 1)");
    egorov->add_option("--t", eg_t, "comparison time");
    egorov->add_option("--h-list", eg_hlist, "comma-separated decreasing h samples");
    egorov->add_option("--grid-count", eg_count, "grid points per axis");
    egorov->add_option("--report", eg_report, "output JSON path");

    // figures
    int fig_which = 1;
    std::string fig_out = "figures";
    auto* figures = app.add_subcommand("figures", "reproduction artifacts for the two figures");
    figures->set_help_flag("--help", "print usage");
    figures->add_option("--which", fig_which, "1 or 2")->required();
    figures->add_option("--out", fig_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (modes->parsed())
        return run_guarded([&] {
            const bool hg = modes_kind == "hg";
            sclg::cli::cmd_modes(modes_kind, hg ? modes_m : modes_j, hg ? modes_n : modes_k,
                                 modes_h, sclg::cli::parse_grid_spec(modes_grid), modes_out,
                                 std::cout);
        });
    if (wig->parsed())
        return run_guarded([&] {
            sclg::cli::cmd_wigner(wig_kind, wig_a, wig_b, wig_h,
                                  sclg::cli::parse_grid_spec(wig_grid), wig_out, std::cout);
        });
    if (flow->parsed())
        return run_guarded([&] {
            sclg::cli::cmd_flow(flow_h, flow_r2, flow_seeds, flow_tmax, flow_dt, flow_method,
                                flow_out, std::cout);
        });
    if (evolve->parsed())
        return run_guarded([&] {
            sclg::cli::cmd_evolve(ev_m, ev_n, ev_t, ev_h, sclg::cli::parse_grid_spec(ev_grid),
                                  ev_out, std::cout);
        });
    if (egorov->parsed())
        return run_guarded([&] {
            sclg::cli::cmd_egorov(eg_m, eg_n, eg_t, parse_h_list(eg_hlist), eg_count, eg_report,
                                  std::cout);
        });
    if (figures->parsed())
        return run_guarded([&] { sclg::cli::cmd_figures(fig_which, fig_out, std::cout); });
    return 2;
}
