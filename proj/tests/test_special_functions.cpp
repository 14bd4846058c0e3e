#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "sclg/special_functions.hpp"

using namespace sclg;

namespace {

// test-only oracle: applies the creation operator (2h)^(-1/2)(x - h d/dx)
// to a sampled function through a high-order central difference, entirely
// independent of the recurrence under test
template <class F>
auto apply_creation_fd(F f, double h) {
    return [f, h](double x) {
        const double step = 5e-3 * std::sqrt(h);
        // 8th-order central first derivative
        const double d =
            (0.8 * (f(x + step) - f(x - step)) - 0.2 * (f(x + 2 * step) - f(x - 2 * step)) +
             (4.0 / 105.0) * (f(x + 3 * step) - f(x - 3 * step)) -
             (1.0 / 280.0) * (f(x + 4 * step) - f(x - 4 * step))) /
            step;
        return (x * f(x) - h * d) / std::sqrt(2.0 * h);
    };
}

double gauss_mode(double x, double h) {
    return std::pow(std::numbers::pi * h, -0.25) * std::exp(-x * x / (2.0 * h));
}

// test-only oracle: Rodrigues formula by Leibniz expansion of
// d^n/dx^n (e^-x x^(n+alpha)), exact for small n
double laguerre_rodrigues(int n, int alpha, double x) {
    double nfact = 1.0;
    for (int k = 2; k <= n; ++k) nfact *= k;
    // d^n (e^-x x^p) = sum_k C(n,k) (-1)^(n-k) e^-x * p!/(p-k)! x^(p-k)
    const int p = n + alpha;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        double binom = 1.0;
        for (int i = 0; i < k; ++i) binom = binom * (n - i) / (i + 1);
        double falling = 1.0;
        for (int i = 0; i < k; ++i) falling *= (p - i);
        const double sign = ((n - k) % 2) ? -1.0 : 1.0;
        acc += binom * sign * falling * std::pow(x, p - k);
    }
    return std::pow(x, -alpha) * std::exp(x) * (std::exp(-x) * acc) / nfact;
}

}  // namespace

TEST_CASE("hermite function pinned values") {
    // forced by the 2D ground mode value (pi h)^(-1/2) at the origin
    CHECK_THAT(hermite_function(0, 0.0, 1.0),
               Catch::Matchers::WithinAbs(std::pow(std::numbers::pi, -0.25), 1e-12));
    CHECK(hermite_function(1, 0.0, 1.0) == 0.0);
}

TEST_CASE("hermite ground mode normalization by quadrature") {
    for (const double h : {0.1, 1.0}) {
        const double extent = 6.0 * std::sqrt(h);
        const int npts = 400;
        const double dx = 2.0 * extent / (npts - 1);
        double acc = 0.0;
        for (int i = 0; i < npts; ++i) {
            const double x = -extent + i * dx;
            const double v = hermite_function(0, x, h);
            acc += v * v * dx * ((i == 0 || i == npts - 1) ? 0.5 : 1.0);
        }
        CHECK_THAT(acc, Catch::Matchers::WithinAbs(1.0, 1e-10));
    }
}

TEST_CASE("hermite function matches the ladder-operator oracle") {
    const double h = 0.1;
    auto h0 = [h](double x) { return gauss_mode(x, h); };
    auto h1 = apply_creation_fd(h0, h);
    auto h2_unnorm = apply_creation_fd(h1, h);
    // a^dag a^dag h_0 = sqrt(2) h_2
    const double x = 0.5;
    CHECK_THAT(hermite_function(2, x, h),
               Catch::Matchers::WithinAbs(h2_unnorm(x) / std::sqrt(2.0), 1e-10));
}

TEST_CASE("hermite orthonormality on the default quadrature grid") {
    const double h = 0.7;
    const int nmax = 8;
    const double extent = 6.0 * std::sqrt(h) * std::sqrt(2.0 * nmax + 1.0);
    const int npts = 512;
    const double dx = 2.0 * extent / (npts - 1);
    std::vector<std::vector<double>> vals(nmax + 1, std::vector<double>(npts));
    for (int i = 0; i < npts; ++i) {
        double buf[nmax + 1];
        hermite_function_all(nmax, -extent + i * dx, h, buf);
        for (int n = 0; n <= nmax; ++n) vals[n][i] = buf[n];
    }
    for (int m = 0; m <= nmax; ++m)
        for (int n = m; n <= nmax; ++n) {
            double acc = 0.0;
            for (int i = 0; i < npts; ++i)
                acc += vals[m][i] * vals[n][i] * dx * ((i == 0 || i == npts - 1) ? 0.5 : 1.0);
            CHECK_THAT(acc, Catch::Matchers::WithinAbs(m == n ? 1.0 : 0.0, 1e-8));
        }
}

TEST_CASE("hermite argument validation") {
    CHECK_THROWS_AS(hermite_function(-1, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(hermite_function(0, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(hermite_function(0, std::nan(""), 1.0), std::domain_error);
}

TEST_CASE("laguerre pinned values") {
    CHECK(laguerre_polynomial(0, 0, 7.3) == 1.0);
    CHECK(laguerre_polynomial(0, 1, 7.3) == 1.0);
    CHECK_THAT(laguerre_polynomial(1, 0, 2.0), Catch::Matchers::WithinAbs(-1.0, 1e-15));
    CHECK_THROWS_AS(laguerre_polynomial(-1, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(laguerre_polynomial(1, -2, 1.0), std::invalid_argument);
}

TEST_CASE("laguerre matches the Rodrigues oracle") {
    CHECK_THAT(laguerre_polynomial(3, 2, 1.5),
               Catch::Matchers::WithinAbs(laguerre_rodrigues(3, 2, 1.5), 1e-12));
    CHECK_THAT(laguerre_polynomial(2, 1, 0.7),
               Catch::Matchers::WithinAbs(laguerre_rodrigues(2, 1, 0.7), 1e-12));
}

TEST_CASE("laguerre recurrence consistency") {
    for (int alpha = 0; alpha <= 5; ++alpha)
        for (int n = 1; n <= 20; ++n)
            for (double x = 0.0; x <= 20.0; x += 2.5) {
                const double lhs = (n + 1.0) * laguerre_polynomial(n + 1, alpha, x);
                const double rhs = (2.0 * n + 1.0 + alpha - x) * laguerre_polynomial(n, alpha, x) -
                                   (n + alpha) * laguerre_polynomial(n - 1, alpha, x);
                const double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
                CHECK(std::fabs(lhs - rhs) <= 1e-12 * scale);
            }
}

TEST_CASE("elliptic invariants from direct substitution") {
    const auto inv1 = elliptic_invariants(2.0, 1.0, 0.0);
    CHECK(inv1.g2 == 0.0);
    CHECK_THAT(inv1.g3, Catch::Matchers::WithinAbs(1.0, 1e-15));

    const auto inv2 = elliptic_invariants(0.0, 0.1, 4.0);
    CHECK_THAT(inv2.g2, Catch::Matchers::WithinRel(16.0 * 0.01 / 12.0, 1e-14));
    CHECK_THAT(inv2.g3, Catch::Matchers::WithinRel(-64.0 * 0.001 / 216.0, 1e-14));
}

TEST_CASE("elliptic invariant roots satisfy the cubic") {
    const std::vector<std::array<double, 3>> cases = {
        {0.05, 0.1, 4.0}, {0.01, 0.1, 4.0}, {2.0, 1.0, 0.0}, {-0.03, 0.1, 4.0}, {0.2, 0.5, 8.0}};
    for (const auto& c : cases) {
        const auto inv = elliptic_invariants(c[0], c[1], c[2]);
        const double tol = 1e-10 * std::max({1.0, std::fabs(inv.g2), std::fabs(inv.g3)});
        std::complex<double> sum = 0.0;
        for (const auto& r : inv.roots) {
            const auto res = 4.0 * r * r * r - inv.g2 * r - inv.g3;
            CHECK(std::abs(res) < tol);
            sum += r;
        }
        CHECK(std::abs(sum) < tol);
        // discriminant sign consistency
        const double disc = inv.g2 * inv.g2 * inv.g2 - 27.0 * inv.g3 * inv.g3;
        if (inv.discriminant_sign == DiscriminantSign::positive) CHECK(disc > 0.0);
        if (inv.discriminant_sign == DiscriminantSign::negative) CHECK(disc < 0.0);
        CHECK(elliptic_invariants(c[0], c[1], c[2]).discriminant == disc);
    }
    CHECK_THROWS_AS(elliptic_invariants(0.0, -1.0, 4.0), std::domain_error);
    CHECK_THROWS_AS(elliptic_invariants(0.0, 1.0, -1.0), std::domain_error);
}

namespace {

// test-only oracle: integrates p'' = 6 p^2 - g2/2 with RK4 from a
// series-seeded start near the pole
struct OdeOracle {
    double g2, g3;
    double y, yp, t;

    static OdeOracle seeded(const EllipticInvariants& inv, double t0) {
        const auto w = detail::weierstrass_series(t0, inv.g2, inv.g3);
        return {inv.g2, inv.g3, w.p, w.p_prime, t0};
    }

    // dt balances truncation against roundoff accumulation; 1e-5 lands
    // well below the 1e-8 comparison tolerance
    void advance_to(double t1, double dt = 1e-5) {
        while (t < t1) {
            const double step = std::min(dt, t1 - t);
            const auto f = [&](double yy, double yyp) {
                return std::pair<double, double>{yyp, 6.0 * yy * yy - g2 / 2.0};
            };
            const auto [k1, l1] = f(y, yp);
            const auto [k2, l2] = f(y + 0.5 * step * k1, yp + 0.5 * step * l1);
            const auto [k3, l3] = f(y + 0.5 * step * k2, yp + 0.5 * step * l2);
            const auto [k4, l4] = f(y + step * k3, yp + step * l3);
            y += step * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
            yp += step * (l1 + 2 * l2 + 2 * l3 + l4) / 6.0;
            t += step;
        }
    }
};

}  // namespace

TEST_CASE("weierstrass p satisfies its defining ODE on both lines") {
    const std::vector<std::array<double, 3>> cases = {
        {0.05, 0.1, 4.0},   // one real root (outside the pocket energy)
        {0.02, 0.1, 4.0},   // three real roots
        {-0.03, 0.1, 4.0},  // three real roots, negative energy
        {2.0, 1.0, 0.0},    // r = 0
    };
    for (const auto& c : cases) {
        const auto inv = elliptic_invariants(c[0], c[1], c[2]);
        const double omega_r = real_half_period(inv);
        REQUIRE(std::isfinite(omega_r));
        for (int i = 1; i <= 100; ++i) {
            const double tau = (2.0 * i / 101.0 - 1.0) * 0.98 * omega_r;
            if (std::fabs(tau) < 5e-3 * omega_r) continue;
            const auto w = weierstrass_p_on_line(tau, PeriodLine::real_line, inv);
            const double lhs = w.p_prime * w.p_prime;
            const double rhs = 4.0 * w.p * w.p * w.p - inv.g2 * w.p - inv.g3;
            const double tol = 1e-9 * std::max(1.0, std::fabs(w.p * w.p * w.p));
            CHECK(std::fabs(lhs - rhs) < tol);
        }
        if (inv.discriminant_sign == DiscriminantSign::positive) {
            for (int i = 1; i <= 100; ++i) {
                const double tau = (2.0 * i / 101.0 - 1.0) * 2.5 * omega_r;
                const auto w = weierstrass_p_on_line(tau, PeriodLine::half_period_shift, inv);
                const double lhs = w.p_prime * w.p_prime;
                const double rhs = 4.0 * w.p * w.p * w.p - inv.g2 * w.p - inv.g3;
                const double tol = 1e-9 * std::max(1.0, std::fabs(w.p * w.p * w.p));
                CHECK(std::fabs(lhs - rhs) < tol);
            }
        }
    }
}

TEST_CASE("weierstrass p Laurent leading term") {
    const auto inv = elliptic_invariants(0.05, 0.1, 4.0);
    const double t = 1e-3;
    const auto w = weierstrass_p_on_line(t, PeriodLine::real_line, inv);
    CHECK_THAT(w.p * t * t, Catch::Matchers::WithinAbs(1.0, 1e-4));
}

TEST_CASE("weierstrass p evenness on the real line") {
    const auto inv = elliptic_invariants(0.05, 0.1, 4.0);
    const double omega_r = real_half_period(inv);
    for (int i = 1; i <= 40; ++i) {
        const double tau = i * 0.024 * omega_r + 0.01 * omega_r;
        const auto wp = weierstrass_p_on_line(tau, PeriodLine::real_line, inv);
        const auto wm = weierstrass_p_on_line(-tau, PeriodLine::real_line, inv);
        CHECK(std::fabs(wp.p - wm.p) <= 1e-12 * std::max(1.0, std::fabs(wp.p)));
        CHECK(std::fabs(wp.p_prime + wm.p_prime) <= 1e-12 * std::max(1.0, std::fabs(wp.p_prime)));
    }
}

TEST_CASE("weierstrass p matches the ODE-integration oracle") {
    const auto inv = elliptic_invariants(0.05, 0.1, 4.0);
    const double omega_r = real_half_period(inv);
    auto oracle = OdeOracle::seeded(inv, 0.05 * omega_r);
    for (double frac : {0.2, 0.35, 0.5, 0.7, 0.9}) {
        const double tau = frac * omega_r;
        oracle.advance_to(tau);
        const auto w = weierstrass_p_on_line(tau, PeriodLine::real_line, inv);
        CHECK_THAT(w.p, Catch::Matchers::WithinAbs(oracle.y, 1e-8 * std::max(1.0, std::fabs(oracle.y))));
        CHECK_THAT(w.p_prime,
                   Catch::Matchers::WithinAbs(oracle.yp, 1e-7 * std::max(1.0, std::fabs(oracle.yp))));
    }
}

TEST_CASE("weierstrass degenerate invariants give exactly 1/t^2") {
    const EllipticInvariants inv{};  // g2 = g3 = 0
    const auto w = weierstrass_p_on_line(0.37, PeriodLine::real_line, inv);
    CHECK_THAT(w.p, Catch::Matchers::WithinRel(1.0 / (0.37 * 0.37), 1e-15));
    CHECK_THAT(w.p_prime, Catch::Matchers::WithinRel(-2.0 / (0.37 * 0.37 * 0.37), 1e-15));
}

TEST_CASE("weierstrass pole exclusion raises with the nearest pole") {
    const auto inv = elliptic_invariants(0.05, 0.1, 4.0);
    CHECK_THROWS_AS(weierstrass_p_on_line(1e-8, PeriodLine::real_line, inv),
                    pole_proximity_error);
    const double omega_r = real_half_period(inv);
    try {
        weierstrass_p_on_line(2.0 * omega_r + 1e-9, PeriodLine::real_line, inv);
        FAIL("expected pole_proximity_error");
    } catch (const pole_proximity_error& e) {
        CHECK_THAT(e.nearest_pole, Catch::Matchers::WithinRel(2.0 * omega_r, 1e-9));
    }
}

TEST_CASE("weierstrass complex-argument entry points") {
    const auto inv = elliptic_invariants(0.02, 0.1, 4.0);
    REQUIRE(inv.discriminant_sign == DiscriminantSign::positive);
    const double oi = imaginary_half_period(inv);
    REQUIRE(std::isfinite(oi));
    const auto direct = weierstrass_p_on_line(0.4, PeriodLine::half_period_shift, inv);
    const auto via_complex = weierstrass_p(std::complex<double>(0.4, oi), inv);
    CHECK(direct.p == via_complex.p);
    CHECK(direct.p_prime == via_complex.p_prime);
    CHECK_THROWS_AS(weierstrass_p(std::complex<double>(0.4, 0.31 * oi), inv), std::domain_error);
}
