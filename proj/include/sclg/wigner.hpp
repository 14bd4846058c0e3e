#pragma once

// Standard and extended semiclassical Wigner transforms on sampled grids.
//
// The extended transform of HG-supported input has an exact closed form as
// a sum of LG modes; that is the production path.  Direct p-quadrature of
// the defining integrals is kept alongside as the verification oracle, and
// is the default for the standard transform.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sclg/modes.hpp"
#include "sclg/parallel.hpp"

namespace sclg {

// ---------------------------------------------------------------------------
// Sampled grids
// ---------------------------------------------------------------------------

struct Axis {
    double min = 0.0;
    double max = 0.0;
    int count = 0;

    void validate() const {
        if (count < 2) throw std::invalid_argument("Axis: count must be at least 2");
        if (!(max > min)) throw std::invalid_argument("Axis: max must exceed min");
    }
    double step() const { return (max - min) / (count - 1); }
    double at(int i) const { return min + i * step(); }
    // uniform trapezoid weight
    double weight(int i) const { return step() * ((i == 0 || i == count - 1) ? 0.5 : 1.0); }
};

inline Axis symmetric_axis(double half_extent, int count) {
    return Axis{-half_extent, half_extent, count};
}

// Complex field on a uniform rectangular grid.  Values are stored x-major:
// row index runs over x samples, column index over the second axis.
struct SampledGrid {
    double h = 1.0;
    Axis x_axis{};
    Axis y_axis{};
    std::optional<double> time{};
    std::string quantity{};
    std::vector<complexd> values{};

    SampledGrid() = default;
    SampledGrid(double h_, Axis x, Axis y, std::string label = {})
        : h(h_), x_axis(x), y_axis(y), quantity(std::move(label)) {
        x_axis.validate();
        y_axis.validate();
        if (!(h > 0.0)) throw std::domain_error("SampledGrid: h must be positive");
        values.assign(static_cast<size_t>(x_axis.count) * y_axis.count, complexd(0.0));
    }

    const complexd& at(int i, int j) const {
        return values[static_cast<size_t>(i) * y_axis.count + j];
    }
    complexd& at(int i, int j) { return values[static_cast<size_t>(i) * y_axis.count + j]; }
};

// Fills a grid by evaluating fn(x, y) at every sample, rows in parallel.
template <class Fn>
inline SampledGrid evaluate_grid(double h, Axis x, Axis y, Fn&& fn, std::string label = {}) {
    SampledGrid g(h, x, y, std::move(label));
    parallel_for(x.count, [&](int i) {
        const double xv = x.at(i);
        for (int j = 0; j < y.count; ++j) g.at(i, j) = fn(xv, y.at(j));
    });
    return g;
}

inline double grid_l2_norm(const SampledGrid& g) {
    double acc = 0.0;
    for (int i = 0; i < g.x_axis.count; ++i) {
        const double wi = g.x_axis.weight(i);
        for (int j = 0; j < g.y_axis.count; ++j)
            acc += wi * g.y_axis.weight(j) * std::norm(g.at(i, j));
    }
    return std::sqrt(acc);
}

inline double grid_sup_abs(const SampledGrid& g) {
    double m = 0.0;
    for (const auto& v : g.values) m = std::max(m, std::abs(v));
    return m;
}

inline double grid_sup_diff(const SampledGrid& a, const SampledGrid& b) {
    if (a.values.size() != b.values.size())
        throw std::invalid_argument("grid_sup_diff: shape mismatch");
    double m = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

// ---------------------------------------------------------------------------
// p-quadrature parameters
// ---------------------------------------------------------------------------

enum class WignerMethod { closed_form, quadrature };

namespace detail {

struct PQuadrature {
    double pmax = 0.0;
    double dp = 0.0;
    int np = 0;  // symmetric sample count (odd, includes p = 0)
};

// Truncation where the Gaussian envelope of the highest contributing mode
// falls below 1e-14, with uniform sampling at 4x the output Nyquist rate.
inline PQuadrature plan_quadrature(double h, int max_order, double xi_abs_max,
                                   bool extended) {
    PQuadrature q;
    const double logcut = 32.3;  // -ln(1e-14)
    if (extended)
        q.pmax = std::sqrt(h * (2.0 * (logcut + 5.0) + 4.8 * max_order));
    else
        q.pmax = 2.0 * std::sqrt(h * (logcut + 5.0 + 2.4 * max_order));
    const double nyquist = std::numbers::pi * h / std::max(xi_abs_max, 1e-12);
    q.dp = std::min(nyquist / 4.0, std::sqrt(h) / 6.0);
    int half = static_cast<int>(std::ceil(q.pmax / q.dp));
    half = std::min(half, 200000);
    q.np = 2 * half + 1;
    q.dp = q.pmax / half;
    return q;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Extended Wigner transform
// ---------------------------------------------------------------------------

namespace detail {

inline SampledGrid wigner_extended_closed(const CoefficientMatrix& F, Axis x, Axis xi) {
    struct Term {
        int m, n;
        complexd c;
    };
    std::vector<Term> terms;
    const double cutoff = 1e-14 * F.norm();
    for (int m = 0; m < F.rows(); ++m)
        for (int n = 0; n < F.cols(); ++n)
            if (std::abs(F.at(m, n)) > cutoff) terms.push_back({m, n, F.at(m, n)});
    const double h = F.h();
    return evaluate_grid(h, x, xi, [&](double xv, double yv) {
        complexd acc = 0.0;
        for (const auto& t : terms) acc += t.c * lg_mode(t.m, t.n, xv, yv, h);
        return acc;
    });
}

inline SampledGrid wigner_extended_quadrature(const CoefficientMatrix& F, Axis x, Axis xi) {
    const double h = F.h();
    const int order = (F.rows() - 1) + (F.cols() - 1);
    const double xi_abs = std::max(std::fabs(xi.min), std::fabs(xi.max));
    const auto q = plan_quadrature(h, order, xi_abs, /*extended=*/true);
    SampledGrid g(h, x, xi);
    const double pref = 1.0 / std::sqrt(2.0 * std::numbers::pi * h);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    parallel_for(x.count, [&](int i) {
        const double xv = x.at(i);
        std::vector<complexd> samples(q.np);
        for (int l = 0; l < q.np; ++l) {
            const double p = -q.pmax + l * q.dp;
            samples[l] = synthesize(F, (xv + p) * inv_sqrt2, (xv - p) * inv_sqrt2);
        }
        for (int j = 0; j < xi.count; ++j) {
            const double xiv = xi.at(j);
            complexd acc = 0.0;
            for (int l = 0; l < q.np; ++l) {
                const double p = -q.pmax + l * q.dp;
                const double w = (l == 0 || l == q.np - 1) ? 0.5 : 1.0;
                acc += w * samples[l] * std::polar(1.0, p * xiv / h);
            }
            g.at(i, j) = pref * q.dp * acc;
        }
    });
    return g;
}

}  // namespace detail

// Extended Wigner transform W~(F)(x, xi) with phase exp(+i p xi / h) and
// rotated arguments ((x+p)/sqrt2, (x-p)/sqrt2).  Unitary on L2(R^2); maps
// the HG basis to LG modes, which is the closed-form production path.
inline SampledGrid wigner_extended(const CoefficientMatrix& F, Axis x, Axis xi, double h,
                                   WignerMethod method = WignerMethod::closed_form) {
    if (F.h() != h) throw std::invalid_argument("wigner_extended: mismatched h");
    x.validate();
    xi.validate();
    return method == WignerMethod::closed_form ? detail::wigner_extended_closed(F, x, xi)
                                               : detail::wigner_extended_quadrature(F, x, xi);
}

// ---------------------------------------------------------------------------
// Standard Wigner transform
// ---------------------------------------------------------------------------

namespace detail {

inline SampledGrid wigner_standard_quadrature(const CoefficientVector& f,
                                              const CoefficientVector& g, Axis x, Axis xi) {
    const double h = f.h();
    const int order = std::max(f.size(), g.size()) - 1;
    const double xi_abs = std::max(std::fabs(xi.min), std::fabs(xi.max));
    const auto q = plan_quadrature(h, order, xi_abs, /*extended=*/false);
    SampledGrid out(h, x, xi);
    const double pref = 1.0 / std::sqrt(2.0 * std::numbers::pi * h);
    parallel_for(x.count, [&](int i) {
        const double xv = x.at(i);
        std::vector<complexd> samples(q.np);
        for (int l = 0; l < q.np; ++l) {
            const double p = -q.pmax + l * q.dp;
            samples[l] = synthesize(f, xv + 0.5 * p) * std::conj(synthesize(g, xv - 0.5 * p));
        }
        for (int j = 0; j < xi.count; ++j) {
            const double xiv = xi.at(j);
            complexd acc = 0.0;
            for (int l = 0; l < q.np; ++l) {
                const double p = -q.pmax + l * q.dp;
                const double w = (l == 0 || l == q.np - 1) ? 0.5 : 1.0;
                acc += w * samples[l] * std::polar(1.0, -p * xiv / h);
            }
            out.at(i, j) = pref * q.dp * acc;
        }
    });
    return out;
}

}  // namespace detail

// Standard 1D semiclassical Wigner transform
//   W(f, g)(x, xi) = (2 pi h)^(-1/2) Int e^(-i p xi / h) f(x + p/2) conj(g)(x - p/2) dp,
// computed by p-quadrature along each grid row.  The closed-form route uses
// the algebraic identity W(f, g)(x, xi) = sqrt2 W~(f (x) conj g)(sqrt2 x, -sqrt2 xi)
// and serves as the fast cross-check path.
inline SampledGrid wigner_standard(const CoefficientVector& f, const CoefficientVector& g,
                                   Axis x, Axis xi, double h,
                                   WignerMethod method = WignerMethod::quadrature) {
    if (f.h() != h || g.h() != h) throw std::invalid_argument("wigner_standard: mismatched h");
    x.validate();
    xi.validate();
    if (method == WignerMethod::quadrature)
        return detail::wigner_standard_quadrature(f, g, x, xi);
    const CoefficientMatrix F = outer_product(f, g);
    const double s = std::numbers::sqrt2;
    return evaluate_grid(h, x, xi, [&](double xv, double xiv) {
        complexd acc = 0.0;
        for (int m = 0; m < F.rows(); ++m)
            for (int n = 0; n < F.cols(); ++n)
                if (F.at(m, n) != complexd(0.0))
                    acc += F.at(m, n) * lg_mode(m, n, s * xv, -s * xiv, h);
        return s * acc;
    });
}

// ---------------------------------------------------------------------------
// Weyl quantization pairing
// ---------------------------------------------------------------------------

enum class WeylSymbol { x, xi, x2_plus_xi2 };

namespace detail {

inline complexd coefficient_inner(const std::vector<complexd>& u, const CoefficientVector& v) {
    complexd acc = 0.0;
    const size_t n = std::min(u.size(), static_cast<size_t>(v.size()));
    for (size_t k = 0; k < n; ++k) acc += u[k] * std::conj(v[k]);
    return acc;
}

}  // namespace detail

// Residual |<Op_h^W(sigma) f | g> - phase-space pairing| for the exactly
// quantizable symbols x, xi and x^2 + xi^2.  The left side is evaluated in
// coefficient space (x and xi are ladder combinations, x^2 + xi^2 is
// h(2N+1)); the right side is grid quadrature against W(f, g), and against
// the extended transform with the (sqrt2 x, -sqrt2 xi) substitution and
// (pi h)^(-1/2) prefactor.  Returns the larger of the two residuals.
inline double weyl_pairing_residual(WeylSymbol symbol, const CoefficientVector& f,
                                    const CoefficientVector& g, double h) {
    if (f.h() != h || g.h() != h)
        throw std::invalid_argument("weyl_pairing_residual: mismatched h");

    // exact coefficient-space left-hand side
    complexd lhs = 0.0;
    switch (symbol) {
        case WeylSymbol::x: {
            auto up = detail::raise_coeffs(f.coeffs());
            auto dn = detail::lower_coeffs(f.coeffs());
            dn.resize(up.size(), 0.0);
            for (size_t k = 0; k < up.size(); ++k) up[k] = std::sqrt(h / 2.0) * (up[k] + dn[k]);
            lhs = detail::coefficient_inner(up, g);
            break;
        }
        case WeylSymbol::xi: {
            auto up = detail::raise_coeffs(f.coeffs());
            auto dn = detail::lower_coeffs(f.coeffs());
            dn.resize(up.size(), 0.0);
            const complexd i(0.0, 1.0);
            std::vector<complexd> op(up.size());
            for (size_t k = 0; k < up.size(); ++k)
                op[k] = i * std::sqrt(h / 2.0) * (up[k] - dn[k]);
            lhs = detail::coefficient_inner(op, g);
            break;
        }
        case WeylSymbol::x2_plus_xi2: {
            std::vector<complexd> op(f.size());
            for (int n = 0; n < f.size(); ++n) op[n] = h * (2.0 * n + 1.0) * f[n];
            lhs = detail::coefficient_inner(op, g);
            break;
        }
        default:
            throw std::invalid_argument("weyl_pairing_residual: unsupported symbol");
    }

    const int order = std::max(f.size(), g.size()) - 1;
    const double L = mode_grid_extent(h, std::max(order, 1));
    const Axis ax = symmetric_axis(L, 256);

    const auto sigma = [symbol](double xv, double xiv) {
        switch (symbol) {
            case WeylSymbol::x: return xv;
            case WeylSymbol::xi: return xiv;
            default: return xv * xv + xiv * xiv;
        }
    };

    // standard pairing, W by direct quadrature
    const SampledGrid W = wigner_standard(f, g, ax, ax, h, WignerMethod::quadrature);
    complexd rhs_std = 0.0;
    for (int i = 0; i < ax.count; ++i)
        for (int j = 0; j < ax.count; ++j)
            rhs_std += ax.weight(i) * ax.weight(j) * sigma(ax.at(i), ax.at(j)) * W.at(i, j);
    rhs_std /= std::sqrt(2.0 * std::numbers::pi * h);

    // extended pairing, closed-form W~ at the rescaled arguments
    const CoefficientMatrix F = outer_product(f, g);
    const double s = std::numbers::sqrt2;
    complexd rhs_ext = 0.0;
    for (int i = 0; i < ax.count; ++i) {
        const double xv = ax.at(i);
        for (int j = 0; j < ax.count; ++j) {
            const double xiv = ax.at(j);
            complexd wt = 0.0;
            for (int m = 0; m < F.rows(); ++m)
                for (int n = 0; n < F.cols(); ++n)
                    if (F.at(m, n) != complexd(0.0))
                        wt += F.at(m, n) * lg_mode(m, n, s * xv, -s * xiv, h);
            rhs_ext += ax.weight(i) * ax.weight(j) * sigma(xv, xiv) * wt;
        }
    }
    rhs_ext /= std::sqrt(std::numbers::pi * h);

    return std::max(std::abs(lhs - rhs_std), std::abs(lhs - rhs_ext));
}

}  // namespace sclg
