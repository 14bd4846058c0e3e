#pragma once

// Scalar special functions used throughout the library: semiclassical
// Hermite functions, generalized Laguerre polynomials, and the real
// Weierstrass p-function evaluated through Jacobi elliptic reductions.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sclg {

// ---------------------------------------------------------------------------
// Hermite functions
// ---------------------------------------------------------------------------

namespace detail {

// Standardized (h = 1) L2-normalized Hermite functions psi_0..psi_n at u,
// generated by the creation-operator recurrence
//   psi_{k+1} = sqrt(2/(k+1)) u psi_k - sqrt(k/(k+1)) psi_{k-1}.
// The recurrence tracks the dominant solution, so forward iteration is
// stable for all orders used here.
template <class OutIt>
inline void hermite_sequence(int nmax, double u, OutIt out) {
    const double gauss = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * u * u);
    double prev = 0.0;
    double cur = gauss;
    *out++ = cur;
    for (int k = 0; k < nmax; ++k) {
        const double next =
            std::sqrt(2.0 / (k + 1)) * u * cur - std::sqrt(double(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
        *out++ = cur;
    }
}

}  // namespace detail

// n-th semiclassical Hermite function, L2-normalized on the real line.
// The recurrence runs in the scaled variable u = x/sqrt(h) so that its
// coefficients are independent of h; the h^(-1/4) normalization is applied
// once at the end.
inline double hermite_function(int n, double x, double h) {
    if (n < 0) throw std::invalid_argument("hermite_function: negative order");
    if (!(h > 0.0)) throw std::domain_error("hermite_function: h must be positive");
    if (!std::isfinite(x)) throw std::domain_error("hermite_function: non-finite x");
    const double u = x / std::sqrt(h);
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * u * u);
    for (int k = 0; k < n; ++k) {
        const double next =
            std::sqrt(2.0 / (k + 1)) * u * cur - std::sqrt(double(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur * std::pow(h, -0.25);
}

// All Hermite functions 0..nmax at one point; used by grid synthesis where
// evaluating each order separately would repeat the recurrence.
inline void hermite_function_all(int nmax, double x, double h, double* out) {
    if (nmax < 0) throw std::invalid_argument("hermite_function_all: negative order");
    if (!(h > 0.0)) throw std::domain_error("hermite_function_all: h must be positive");
    const double u = x / std::sqrt(h);
    detail::hermite_sequence(nmax, u, out);
    const double scale = std::pow(h, -0.25);
    for (int k = 0; k <= nmax; ++k) out[k] *= scale;
}

// ---------------------------------------------------------------------------
// Laguerre polynomials
// ---------------------------------------------------------------------------

// Generalized Laguerre polynomial L_n^alpha(x) by the standard three-term
// recurrence (n+1) L_{n+1} = (2n+1+alpha-x) L_n - (n+alpha) L_{n-1}.
inline double laguerre_polynomial(int n, int alpha, double x) {
    if (n < 0) throw std::invalid_argument("laguerre_polynomial: negative degree");
    if (alpha < 0) throw std::invalid_argument("laguerre_polynomial: negative upper index");
    double prev = 0.0;
    double cur = 1.0;
    for (int k = 0; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Weierstrass p-function on the two real-valued lines
// ---------------------------------------------------------------------------

enum class DiscriminantSign { negative = -1, zero = 0, positive = 1 };

// Admissible evaluation lines: the real axis itself, or the real axis
// shifted by the imaginary half-period (where the p-function is again
// real-valued and pole-free for three real roots).
enum class PeriodLine { real_line, half_period_shift };

// Invariants (g2, g3) of the cubic 4s^3 - g2 s - g3 together with its
// roots and the sign of the discriminant g2^3 - 27 g3^2.
//
// For discriminant >= 0 the roots are stored real, sorted descending.
// For discriminant < 0 roots[0] is the real root and roots[1], roots[2]
// are the conjugate pair.
struct EllipticInvariants {
    double g2 = 0.0;
    double g3 = 0.0;
    std::array<std::complex<double>, 3> roots{};
    double discriminant = 0.0;
    DiscriminantSign discriminant_sign = DiscriminantSign::zero;
};

class pole_proximity_error : public std::domain_error {
  public:
    pole_proximity_error(double pole, double t)
        : std::domain_error("weierstrass_p: argument within pole-exclusion radius of t = " +
                            std::to_string(pole)),
          nearest_pole(pole), argument(t) {}
    double nearest_pole;
    double argument;
};

namespace detail {

constexpr double kPoleRadius = 1e-6;  // |t - pole| below this raises pole_proximity_error

// Solves 4 s^3 - g2 s - g3 = 0 and fills roots/discriminant fields.
inline void solve_invariant_cubic(EllipticInvariants& inv) {
    const double g2 = inv.g2, g3 = inv.g3;
    const double disc = g2 * g2 * g2 - 27.0 * g3 * g3;
    inv.discriminant = disc;
    const double scale = std::max(std::fabs(g2 * g2 * g2), 27.0 * g3 * g3);

    // depressed form s^3 + p s + q
    const double p = -g2 / 4.0;
    const double q = -g3 / 4.0;

    if (scale == 0.0) {
        inv.discriminant_sign = DiscriminantSign::zero;
        inv.roots = {0.0, 0.0, 0.0};
        return;
    }
    if (std::fabs(disc) <= 1e-11 * scale) {
        inv.discriminant_sign = DiscriminantSign::zero;
        // double root r with f(r) = f'(r) = 0, simple root -2r
        const double r = (p != 0.0) ? -3.0 * q / (2.0 * p) : 0.0;
        std::array<double, 3> e = {r, r, -2.0 * r};
        std::sort(e.begin(), e.end(), std::greater<>());
        inv.roots = {e[0], e[1], e[2]};
        return;
    }
    if (disc > 0.0) {
        inv.discriminant_sign = DiscriminantSign::positive;
        // trigonometric method, valid since p < 0 here
        const double rho = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * rho);
        arg = std::clamp(arg, -1.0, 1.0);
        const double phi = std::acos(arg);
        std::array<double, 3> e{};
        for (int k = 0; k < 3; ++k)
            e[k] = rho * std::cos((phi - 2.0 * std::numbers::pi * k) / 3.0);
        std::sort(e.begin(), e.end(), std::greater<>());
        // one Newton step per root against the original quartic-free cubic
        for (auto& r : e) {
            const double f = 4.0 * r * r * r - g2 * r - g3;
            const double fp = 12.0 * r * r - g2;
            if (fp != 0.0) r -= f / fp;
        }
        inv.roots = {e[0], e[1], e[2]};
        return;
    }
    inv.discriminant_sign = DiscriminantSign::negative;
    // Cardano with a cancellation-free cube root
    const double D = q * q / 4.0 + p * p * p / 27.0;  // > 0 here
    const double sqrtD = std::sqrt(D);
    double u;
    if (q <= 0.0)
        u = std::cbrt(-q / 2.0 + sqrtD);
    else
        u = -std::cbrt(q / 2.0 + sqrtD);
    double real_root = u - p / (3.0 * u);
    {
        const double f = 4.0 * real_root * real_root * real_root - g2 * real_root - g3;
        const double fp = 12.0 * real_root * real_root - g2;
        if (fp != 0.0) real_root -= f / fp;
    }
    const double re = -real_root / 2.0;
    const double im2 = 3.0 * real_root * real_root + 4.0 * p;  // = -disc-related, > 0
    const double im = std::sqrt(std::max(im2, 0.0)) / 2.0;
    inv.roots = {real_root, {re, im}, {re, -im}};
}

}  // namespace detail

// Fills g2 = r^4 h^2 / 12 and g3 = C^2/4 - r^6 h^3 / 216 for the conserved
// energy C, semiclassical parameter h and scale r2 = r^2, then solves and
// classifies the associated cubic.
inline EllipticInvariants elliptic_invariants(double C, double h, double r2) {
    if (!(h > 0.0)) throw std::domain_error("elliptic_invariants: h must be positive");
    if (r2 < 0.0) throw std::domain_error("elliptic_invariants: r2 must be non-negative");
    EllipticInvariants inv;
    inv.g2 = r2 * r2 * h * h / 12.0;
    inv.g3 = C * C / 4.0 - r2 * r2 * r2 * h * h * h / 216.0;
    detail::solve_invariant_cubic(inv);
    return inv;
}

// ---------------------------------------------------------------------------
// Jacobi elliptic functions (AGM / descending Landen)
// ---------------------------------------------------------------------------

struct JacobiElliptic {
    double sn = 0.0, cn = 1.0, dn = 1.0;
};

// Complete elliptic integral K(m), parameter m = k^2 in [0, 1).
inline double complete_elliptic_K(double m) {
    if (m < 0.0 || m > 1.0) throw std::domain_error("complete_elliptic_K: m outside [0,1]");
    if (m == 1.0) return std::numeric_limits<double>::infinity();
    double a = 1.0, b = std::sqrt(1.0 - m);
    for (int it = 0; it < 60 && std::fabs(a - b) > 4e-16 * a; ++it) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return std::numbers::pi / (2.0 * a);
}

// sn, cn, dn with parameter m = k^2 in [0, 1], by the arithmetic-geometric
// mean iteration with backward phase recursion.  Quadratically convergent;
// no truncation parameter to tune.
inline JacobiElliptic jacobi_sn_cn_dn(double u, double m) {
    if (m < 0.0 || m > 1.0) throw std::domain_error("jacobi_sn_cn_dn: m outside [0,1]");
    if (m < 1e-15) {
        const double s = std::sin(u), c = std::cos(u);
        return {s, c, 1.0 - 0.5 * m * s * s};
    }
    if (m > 1.0 - 1e-15) {
        const double t = std::tanh(u), sech = 1.0 / std::cosh(u);
        return {t, sech, sech};
    }
    constexpr int kMax = 32;
    double a[kMax], c[kMax];
    a[0] = 1.0;
    c[0] = std::sqrt(m);
    double b = std::sqrt(1.0 - m);
    int n = 0;
    while (std::fabs(c[n]) > 4e-16 * a[n] && n + 1 < kMax) {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        ++n;
    }
    double phi = std::ldexp(a[n] * u, n);
    for (int i = n; i >= 1; --i) {
        const double s = std::clamp(c[i] * std::sin(phi) / a[i], -1.0, 1.0);
        phi = 0.5 * (phi + std::asin(s));
    }
    JacobiElliptic j;
    j.sn = std::sin(phi);
    j.cn = std::cos(phi);
    // dn^2 = 1 - m sn^2 rearranged as (1 - m) + m cn^2: both terms are
    // non-negative, so no cancellation for any m
    j.dn = std::sqrt((1.0 - m) + m * j.cn * j.cn);
    return j;
}

// ---------------------------------------------------------------------------
// p-function evaluation
// ---------------------------------------------------------------------------

struct WeierstrassValue {
    double p = 0.0;
    double p_prime = 0.0;
};

// Real half-period of the lattice (distance between consecutive real poles
// is twice this). +inf when the real period degenerates.
inline double real_half_period(const EllipticInvariants& inv) {
    using std::sqrt;
    if (inv.discriminant_sign == DiscriminantSign::negative) {
        const double er = inv.roots[0].real();
        const double H = sqrt(3.0 * er * er - inv.g2 / 4.0);
        const double k2 = 0.5 - 3.0 * er / (4.0 * H);
        return complete_elliptic_K(k2) / sqrt(H);
    }
    const double e1 = inv.roots[0].real();
    const double e3 = inv.roots[2].real();
    if (e1 == e3) return std::numeric_limits<double>::infinity();  // triple root
    const double A = sqrt(e1 - e3);
    const double e2 = inv.roots[1].real();
    const double mm = (e2 - e3) / (e1 - e3);
    return complete_elliptic_K(std::clamp(mm, 0.0, 1.0)) / A;
}

// Magnitude of the purely imaginary half-period; NaN when no real-valued
// shifted line exists (one real root or degenerate lattice).
inline double imaginary_half_period(const EllipticInvariants& inv) {
    if (inv.discriminant_sign == DiscriminantSign::negative)
        return std::numeric_limits<double>::quiet_NaN();
    const double e1 = inv.roots[0].real();
    const double e3 = inv.roots[2].real();
    if (e1 == e3) return std::numeric_limits<double>::quiet_NaN();
    const double A = std::sqrt(e1 - e3);
    const double e2 = inv.roots[1].real();
    const double mm = std::clamp((e2 - e3) / (e1 - e3), 0.0, 1.0);
    return complete_elliptic_K(1.0 - mm) / A;
}

namespace detail {

// Laurent expansion around the origin: p = 1/t^2 + sum c_k t^(2k-2).
// Used near poles where the elliptic reductions lose relative accuracy
// to cancellation.
inline WeierstrassValue weierstrass_series(double tau, double g2, double g3) {
    constexpr int K = 15;
    double c[K + 1] = {};
    c[2] = g2 / 20.0;
    c[3] = g3 / 28.0;
    for (int k = 4; k <= K; ++k) {
        double acc = 0.0;
        for (int mm = 2; mm <= k - 2; ++mm) acc += c[mm] * c[k - mm];
        c[k] = 3.0 * acc / ((2.0 * k + 1.0) * (k - 3.0));
    }
    const double t2 = tau * tau;
    // Horner in t^2: p  = 1/t^2 + t^2 * sum c_k t^(2(k-2))
    //                p' = -2/t^3 + t  * sum (2k-2) c_k t^(2(k-2))
    double ps = 0.0, dps = 0.0;
    for (int k = K; k >= 2; --k) {
        ps = ps * t2 + c[k];
        dps = dps * t2 + (2.0 * k - 2.0) * c[k];
    }
    WeierstrassValue w;
    w.p = 1.0 / t2 + ps * t2;
    w.p_prime = -2.0 / (t2 * tau) + dps * tau;
    return w;
}

inline double reduce_to_fundamental(double tau, double half_period) {
    if (!std::isfinite(half_period)) return tau;
    return std::remainder(tau, 2.0 * half_period);
}

}  // namespace detail

// p(t) and p'(t) for real offset tau along the chosen line.  On the real
// line t = tau; on the shifted line t = tau + i * imaginary_half_period.
// Both values are real on these lines for real invariants.
inline WeierstrassValue weierstrass_p_on_line(double tau, PeriodLine line,
                                              const EllipticInvariants& inv) {
    using std::sqrt;
    const double g2 = inv.g2, g3 = inv.g3;

    // fully degenerate lattice: p(t) = 1/t^2 exactly
    if (g2 == 0.0 && g3 == 0.0) {
        if (line == PeriodLine::half_period_shift)
            throw std::domain_error("weierstrass_p: degenerate lattice has no shifted line");
        if (std::fabs(tau) < detail::kPoleRadius) throw pole_proximity_error(0.0, tau);
        return {1.0 / (tau * tau), -2.0 / (tau * tau * tau)};
    }

    if (inv.discriminant_sign == DiscriminantSign::negative) {
        if (line == PeriodLine::half_period_shift)
            throw std::domain_error(
                "weierstrass_p: shifted line is not real-valued for one real root");
        const double er = inv.roots[0].real();
        const double H = sqrt(3.0 * er * er - g2 / 4.0);
        const double k2 = std::clamp(0.5 - 3.0 * er / (4.0 * H), 0.0, 1.0);
        const double omega_r = complete_elliptic_K(k2) / sqrt(H);
        const double tr = detail::reduce_to_fundamental(tau, omega_r);
        if (std::fabs(tr) < detail::kPoleRadius)
            throw pole_proximity_error(tau - tr, tau);
        const double series_radius = 0.3 * 2.0 * omega_r;
        if (std::fabs(tr) < std::min(series_radius, 0.45 * omega_r))
            return detail::weierstrass_series(tr, g2, g3);
        const double w = 2.0 * sqrt(H) * tr;
        const auto j = jacobi_sn_cn_dn(w, k2);
        const double one_minus_cn = 1.0 - j.cn;
        WeierstrassValue out;
        out.p = er + H * (1.0 + j.cn) / one_minus_cn;
        out.p_prime = -4.0 * H * sqrt(H) * j.sn * j.dn / (one_minus_cn * one_minus_cn);
        return out;
    }

    // three real roots (or a double root at the discriminant-zero boundary)
    const double e1 = inv.roots[0].real();
    const double e2 = inv.roots[1].real();
    const double e3 = inv.roots[2].real();
    const double A = sqrt(std::max(e1 - e3, 0.0));
    const double mm = std::clamp((e2 - e3) / (e1 - e3), 0.0, 1.0);
    const double omega_r = (mm < 1.0) ? complete_elliptic_K(mm) / A
                                      : std::numeric_limits<double>::infinity();
    const double omega_i = (mm > 0.0) ? complete_elliptic_K(1.0 - mm) / A
                                      : std::numeric_limits<double>::infinity();

    if (line == PeriodLine::real_line) {
        const double tr = detail::reduce_to_fundamental(tau, omega_r);
        if (std::fabs(tr) < detail::kPoleRadius)
            throw pole_proximity_error(tau - tr, tau);
        double series_radius = 0.45 * (std::isfinite(omega_r) ? omega_r
                                                              : std::numeric_limits<double>::max());
        if (std::isfinite(omega_i)) series_radius = std::min(series_radius, 0.6 * omega_i);
        if (std::fabs(tr) < series_radius)
            return detail::weierstrass_series(tr, g2, g3);
        const auto j = jacobi_sn_cn_dn(A * tr, mm);
        const double s2 = j.sn * j.sn;
        WeierstrassValue out;
        out.p = e3 + (e1 - e3) / s2;
        out.p_prime = -2.0 * A * A * A * j.cn * j.dn / (s2 * j.sn);
        return out;
    }

    // shifted line: p(tau + i omega_i) = e3 + (e2 - e3) sn^2(A tau | m),
    // obtained from the half-period addition formula; pole-free.
    if (!std::isfinite(omega_i) && mm == 0.0)
        throw std::domain_error("weierstrass_p: shifted line degenerates to a constant lattice");
    const double tr = detail::reduce_to_fundamental(tau, omega_r);
    const auto j = jacobi_sn_cn_dn(A * tr, mm);
    WeierstrassValue out;
    out.p = e3 + (e2 - e3) * j.sn * j.sn;
    out.p_prime = 2.0 * A * (e2 - e3) * j.sn * j.cn * j.dn;
    return out;
}

// p(t), p'(t) for complex t on one of the two admissible lines.  Values on
// other arguments are outside this library's scope and raise domain_error.
inline WeierstrassValue weierstrass_p(std::complex<double> t, const EllipticInvariants& inv) {
    const double re = t.real(), im = t.imag();
    const double im_tol = 1e-9 * std::max(1.0, std::fabs(re));
    if (std::fabs(im) <= im_tol)
        return weierstrass_p_on_line(re, PeriodLine::real_line, inv);
    const double omega_i = imaginary_half_period(inv);
    if (std::isfinite(omega_i) &&
        (std::fabs(im - omega_i) <= 1e-9 * std::max(1.0, omega_i) ||
         std::fabs(im + omega_i) <= 1e-9 * std::max(1.0, omega_i)))
        return weierstrass_p_on_line(re, PeriodLine::half_period_shift, inv);
    throw std::domain_error("weierstrass_p: argument off the admissible real-valued lines");
}

}  // namespace sclg
