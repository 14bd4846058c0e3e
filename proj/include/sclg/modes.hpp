#pragma once

// Semiclassical Hermite-Gaussian and Laguerre-Gaussian modes, plus ladder
// operator actions on coefficient expansions in the HG basis.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sclg/special_functions.hpp"

namespace sclg {

using complexd = std::complex<double>;

struct ModeIndex {
    int m = 0;
    int n = 0;
};

namespace detail {

inline void require_mode_index(int v, const char* what) {
    if (v < 0) throw std::invalid_argument(std::string(what) + ": negative mode index");
}

// sqrt(a! / b!) through log-gamma, overflow-safe for the orders handled here.
inline double sqrt_factorial_ratio(int a, int b) {
    return std::exp(0.5 * (std::lgamma(a + 1.0) - std::lgamma(b + 1.0)));
}

// integer power by repeated multiplication (deterministic, exact for small n)
inline complexd ipow(complexd z, int n) {
    complexd r = 1.0;
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

}  // namespace detail

// Half-extent of a grid that covers the classically allowed region of all
// modes up to max_order plus Gaussian tails below ~1e-12.
inline double mode_grid_extent(double h, int max_order) {
    return 6.0 * std::sqrt(h * (2.0 * max_order + 1.0));
}

// ---------------------------------------------------------------------------
// Coefficient containers
// ---------------------------------------------------------------------------

// Expansion coefficients c_0..c_{N-1} over the 1D Hermite functions at a
// fixed semiclassical parameter h.  Containers with different h never mix.
class CoefficientVector {
  public:
    CoefficientVector(double h, std::vector<complexd> coeffs)
        : h_(h), c_(std::move(coeffs)) {
        if (!(h_ > 0.0)) throw std::domain_error("CoefficientVector: h must be positive");
    }

    double h() const { return h_; }
    int size() const { return static_cast<int>(c_.size()); }
    const complexd& operator[](int n) const { return c_[n]; }
    complexd& operator[](int n) { return c_[n]; }
    const std::vector<complexd>& coeffs() const { return c_; }

    double norm() const {
        double s = 0.0;
        for (const auto& v : c_) s += std::norm(v);
        return std::sqrt(s);
    }

    // highest index with a nonzero coefficient, or -1 for the zero vector
    int support() const {
        for (int n = size() - 1; n >= 0; --n)
            if (c_[n] != complexd(0.0)) return n;
        return -1;
    }

  private:
    double h_;
    std::vector<complexd> c_;
};

// Coefficients c_{mn} over the 2D HG basis h_m (x) h_n; row index is the
// x-order m, column index the y-order n.
class CoefficientMatrix {
  public:
    CoefficientMatrix(double h, int rows, int cols)
        : h_(h), rows_(rows), cols_(cols), c_(static_cast<size_t>(rows) * cols, 0.0) {
        if (!(h_ > 0.0)) throw std::domain_error("CoefficientMatrix: h must be positive");
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("CoefficientMatrix: empty shape");
    }

    double h() const { return h_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const complexd& at(int m, int n) const { return c_[static_cast<size_t>(m) * cols_ + n]; }
    complexd& at(int m, int n) { return c_[static_cast<size_t>(m) * cols_ + n]; }

    double norm() const {
        double s = 0.0;
        for (const auto& v : c_) s += std::norm(v);
        return std::sqrt(s);
    }

  private:
    double h_;
    int rows_, cols_;
    std::vector<complexd> c_;
};

inline CoefficientVector basis_vector(int n, double h, complexd amplitude = 1.0) {
    detail::require_mode_index(n, "basis_vector");
    std::vector<complexd> c(n + 1, 0.0);
    c[n] = amplitude;
    return CoefficientVector(h, std::move(c));
}

inline CoefficientMatrix basis_matrix(int m, int n, double h, complexd amplitude = 1.0) {
    detail::require_mode_index(m, "basis_matrix");
    detail::require_mode_index(n, "basis_matrix");
    CoefficientMatrix c(h, m + 1, n + 1);
    c.at(m, n) = amplitude;
    return c;
}

// Outer product F = f (x) conj(g): c_{mn} = f_m conj(g_n).  This is the
// coefficient matrix of the two-variable function f(x) conj(g)(y).
inline CoefficientMatrix outer_product(const CoefficientVector& f, const CoefficientVector& g) {
    if (f.h() != g.h())
        throw std::invalid_argument("outer_product: mismatched semiclassical parameters");
    CoefficientMatrix out(f.h(), std::max(f.size(), 1), std::max(g.size(), 1));
    for (int m = 0; m < f.size(); ++m)
        for (int n = 0; n < g.size(); ++n) out.at(m, n) = f[m] * std::conj(g[n]);
    return out;
}

// ---------------------------------------------------------------------------
// Mode fields
// ---------------------------------------------------------------------------

// 2D Hermite-Gaussian mode h_{mn}(x, y) = h_m(x) h_n(y).
inline double hg_mode_2d(ModeIndex idx, double x, double y, double h) {
    detail::require_mode_index(idx.m, "hg_mode_2d");
    detail::require_mode_index(idx.n, "hg_mode_2d");
    return hermite_function(idx.m, x, h) * hermite_function(idx.n, y, h);
}

// Laguerre-Gaussian mode of orders (j, k): vortex field with azimuthal
// phase exp(i (j-k) theta) and Laguerre radial profile, in the closed form
// with z = x + i y,
//   (pi h)^(-1/2) sqrt(k!/j!) (-1)^k (z/sqrt h)^(j-k) e^(-|z|^2/2h) L_k^{j-k}(|z|^2/h)
// for j >= k, and the conjugate-argument branch for j <= k.
inline complexd lg_mode(int j, int k, double x, double y, double h) {
    detail::require_mode_index(j, "lg_mode");
    detail::require_mode_index(k, "lg_mode");
    if (!(h > 0.0)) throw std::domain_error("lg_mode: h must be positive");
    const complexd z(x, y);
    const double rho2 = x * x + y * y;
    const double gauss = std::exp(-rho2 / (2.0 * h)) / std::sqrt(std::numbers::pi * h);
    if (j >= k) {
        const double pref = detail::sqrt_factorial_ratio(k, j) * ((k % 2) ? -1.0 : 1.0);
        return pref * detail::ipow(z / std::sqrt(h), j - k) * gauss *
               laguerre_polynomial(k, j - k, rho2 / h);
    }
    const double pref = detail::sqrt_factorial_ratio(j, k) * ((j % 2) ? -1.0 : 1.0);
    return pref * detail::ipow(std::conj(z) / std::sqrt(h), k - j) * gauss *
           laguerre_polynomial(j, k - j, rho2 / h);
}

// f(x) = sum c_n h_n(x)
inline complexd synthesize(const CoefficientVector& c, double x) {
    const int nmax = c.size() - 1;
    if (nmax < 0) return 0.0;
    std::vector<double> basis(nmax + 1);
    hermite_function_all(nmax, x, c.h(), basis.data());
    complexd acc = 0.0;
    for (int n = 0; n <= nmax; ++n) acc += c[n] * basis[n];
    return acc;
}

// F(x, y) = sum c_{mn} h_m(x) h_n(y)
inline complexd synthesize(const CoefficientMatrix& c, double x, double y) {
    std::vector<double> bx(c.rows()), by(c.cols());
    hermite_function_all(c.rows() - 1, x, c.h(), bx.data());
    hermite_function_all(c.cols() - 1, y, c.h(), by.data());
    complexd acc = 0.0;
    for (int m = 0; m < c.rows(); ++m) {
        complexd row = 0.0;
        for (int n = 0; n < c.cols(); ++n) row += c.at(m, n) * by[n];
        acc += bx[m] * row;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Ladder operators
// ---------------------------------------------------------------------------

// 1D kinds act on CoefficientVector, the LG (A) kinds on CoefficientMatrix.
enum class Ladder {
    a,            // annihilation
    a_dag,        // creation
    A_plus,       // (a_1 - i a_2)/sqrt2
    A_plus_dag,   // (a_1^dag + i a_2^dag)/sqrt2
    A_minus,      // (a_1 + i a_2)/sqrt2
    A_minus_dag,  // (a_1^dag - i a_2^dag)/sqrt2
};

namespace detail {

inline std::vector<complexd> raise_coeffs(const std::vector<complexd>& c) {
    std::vector<complexd> out(c.size() + 1, 0.0);
    for (size_t n = 0; n < c.size(); ++n) out[n + 1] = std::sqrt(double(n + 1)) * c[n];
    return out;
}

inline std::vector<complexd> lower_coeffs(const std::vector<complexd>& c) {
    std::vector<complexd> out(std::max<size_t>(c.size(), 2) - 1, 0.0);
    for (size_t n = 1; n < c.size(); ++n) out[n - 1] = std::sqrt(double(n)) * c[n];
    return out;
}

// creation / annihilation along the row (axis = 0) or column (axis = 1)
// index of a coefficient matrix, writing into an output of the given shape
inline void raise_axis(const CoefficientMatrix& c, int axis, complexd weight,
                       CoefficientMatrix& out) {
    for (int m = 0; m < c.rows(); ++m)
        for (int n = 0; n < c.cols(); ++n) {
            const complexd v = c.at(m, n);
            if (v == complexd(0.0)) continue;
            if (axis == 0)
                out.at(m + 1, n) += weight * std::sqrt(double(m + 1)) * v;
            else
                out.at(m, n + 1) += weight * std::sqrt(double(n + 1)) * v;
        }
}

inline void lower_axis(const CoefficientMatrix& c, int axis, complexd weight,
                       CoefficientMatrix& out) {
    for (int m = 0; m < c.rows(); ++m)
        for (int n = 0; n < c.cols(); ++n) {
            const complexd v = c.at(m, n);
            if (v == complexd(0.0)) continue;
            if (axis == 0) {
                if (m >= 1) out.at(m - 1, n) += weight * std::sqrt(double(m)) * v;
            } else {
                if (n >= 1) out.at(m, n - 1) += weight * std::sqrt(double(n)) * v;
            }
        }
}

}  // namespace detail

// Exact coefficient-space ladder action.  a_dag grows the expansion by one
// index, a shrinks it by one.
inline CoefficientVector ladder_apply(Ladder kind, const CoefficientVector& c) {
    switch (kind) {
        case Ladder::a_dag:
            return CoefficientVector(c.h(), detail::raise_coeffs(c.coeffs()));
        case Ladder::a:
            return CoefficientVector(c.h(), detail::lower_coeffs(c.coeffs()));
        default:
            throw std::invalid_argument("ladder_apply: LG ladder kind requires a matrix operand");
    }
}

// LG-family ladders on 2D coefficient matrices.  Creators grow both index
// ranges by one; annihilators keep the shape (top-order entries vanish).
inline CoefficientMatrix ladder_apply(Ladder kind, const CoefficientMatrix& c) {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const complexd i(0.0, 1.0);
    switch (kind) {
        case Ladder::A_plus_dag: {
            CoefficientMatrix out(c.h(), c.rows() + 1, c.cols() + 1);
            detail::raise_axis(c, 0, inv_sqrt2, out);
            detail::raise_axis(c, 1, i * inv_sqrt2, out);
            return out;
        }
        case Ladder::A_minus_dag: {
            CoefficientMatrix out(c.h(), c.rows() + 1, c.cols() + 1);
            detail::raise_axis(c, 0, inv_sqrt2, out);
            detail::raise_axis(c, 1, -i * inv_sqrt2, out);
            return out;
        }
        case Ladder::A_plus: {
            CoefficientMatrix out(c.h(), c.rows(), c.cols());
            detail::lower_axis(c, 0, inv_sqrt2, out);
            detail::lower_axis(c, 1, -i * inv_sqrt2, out);
            return out;
        }
        case Ladder::A_minus: {
            CoefficientMatrix out(c.h(), c.rows(), c.cols());
            detail::lower_axis(c, 0, inv_sqrt2, out);
            detail::lower_axis(c, 1, i * inv_sqrt2, out);
            return out;
        }
        default:
            throw std::invalid_argument("ladder_apply: 1D ladder kind requires a vector operand");
    }
}

}  // namespace sclg
