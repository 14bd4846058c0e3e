#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "sclg/modes.hpp"

using namespace sclg;
using Catch::Matchers::WithinAbs;

namespace {

using Field2D = std::function<complexd(double, double)>;

// test-only oracle: 8th-order central difference in one variable
template <class F>
complexd fd_partial(F&& f, double x, double y, bool in_x, double step) {
    auto g = [&](double s) {
        return in_x ? f(x + s, y) : f(x, y + s);
    };
    return (0.8 * (g(step) - g(-step)) - 0.2 * (g(2 * step) - g(-2 * step)) +
            (4.0 / 105.0) * (g(3 * step) - g(-3 * step)) -
            (1.0 / 280.0) * (g(4 * step) - g(-4 * step))) /
           step;
}

// creation operator in the x (axis=0) or y (axis=1) variable acting on a
// sampled field, evaluated by finite differences
Field2D creation_fd(Field2D f, int axis, double h) {
    return [f, axis, h](double x, double y) {
        const double step = 4e-3 * std::sqrt(h);
        const double var = axis == 0 ? x : y;
        const complexd d = fd_partial(f, x, y, axis == 0, step);
        return (var * f(x, y) - h * d) / std::sqrt(2.0 * h);
    };
}

Field2D lg_creation_fd(Field2D f, bool plus, double h) {
    auto ax = creation_fd(f, 0, h);
    auto ay = creation_fd(f, 1, h);
    const complexd i(0.0, 1.0);
    const complexd phase = plus ? i : -i;
    return [ax, ay, phase](double x, double y) {
        return (ax(x, y) + phase * ay(x, y)) / std::numbers::sqrt2;
    };
}

Field2D ground_mode(double h) {
    return [h](double x, double y) {
        return complexd(std::exp(-(x * x + y * y) / (2.0 * h)) / std::sqrt(std::numbers::pi * h),
                        0.0);
    };
}

}  // namespace

TEST_CASE("hg_mode_2d pinned values") {
    CHECK_THAT(hg_mode_2d({0, 0}, 0.0, 0.0, 1.0),
               WithinAbs(1.0 / std::sqrt(std::numbers::pi), 1e-14));
    CHECK(hg_mode_2d({1, 0}, 0.0, 3.0, 1.0) == 0.0);
}

namespace {

// 1D creation-operator ladder on a sampled function, nested finite
// differences in extended precision so rounding noise stays below the
// 1e-10 comparison level through three applications
using Field1L = std::function<long double(long double)>;

Field1L creation_fd_1d(Field1L f, long double h) {
    return [f, h](long double x) {
        const long double step = 0.004L * std::sqrt(h);
        const long double d =
            (0.8L * (f(x + step) - f(x - step)) - 0.2L * (f(x + 2 * step) - f(x - 2 * step)) +
             (4.0L / 105.0L) * (f(x + 3 * step) - f(x - 3 * step)) -
             (1.0L / 280.0L) * (f(x + 4 * step) - f(x - 4 * step))) /
            step;
        return (x * f(x) - h * d) / std::sqrt(2.0L * h);
    };
}

long double hermite_fd_oracle(int n, long double x, long double h) {
    Field1L f = [h](long double u) {
        return std::pow((long double)std::numbers::pi * h, -0.25L) * std::exp(-u * u / (2.0L * h));
    };
    long double fact = 1.0L;
    for (int k = 0; k < n; ++k) {
        f = creation_fd_1d(f, h);
        fact *= k + 1;
    }
    return f(x) / std::sqrt(fact);
}

}  // namespace

TEST_CASE("hg_mode_2d matches the ladder quadrature oracle") {
    const double h = 0.5;
    // (m, n) = (2, 3): the creation operators act on one variable each, so
    // the oracle applies the numerical ladder per factor
    const double x = 0.4, y = -0.2;
    const double oracle =
        double(hermite_fd_oracle(2, x, h) * hermite_fd_oracle(3, y, h));
    CHECK_THAT(hg_mode_2d({2, 3}, x, y, h), WithinAbs(oracle, 1e-10));
}

TEST_CASE("lg_mode pinned closed forms") {
    const double h = 0.7;
    const double x = 0.3, y = -0.5;
    const double rho2 = x * x + y * y;
    const double gauss = std::exp(-rho2 / (2.0 * h)) / std::sqrt(std::numbers::pi * h);
    CHECK_THAT(std::abs(lg_mode(0, 0, x, y, h) - complexd(gauss, 0.0)), WithinAbs(0.0, 1e-14));

    // order (1, 0) in polar form: (pi h)^(-1/2) (r/sqrt h) e^(i theta) e^(-r^2/2h)
    const double r = std::sqrt(rho2), theta = std::atan2(y, x);
    const complexd expected10 = gauss * (r / std::sqrt(h)) * std::polar(1.0, theta);
    CHECK_THAT(std::abs(lg_mode(1, 0, x, y, h) - expected10), WithinAbs(0.0, 1e-14));

    // order (1, 1) vanishes on the ring r = sqrt(h)
    const double rr = std::sqrt(h);
    CHECK_THAT(std::abs(lg_mode(1, 1, rr * std::cos(0.3), rr * std::sin(0.3), h)),
               WithinAbs(0.0, 1e-14));
    // and matches the displayed polar form off the ring
    const complexd expected11 = -gauss * (1.0 - rho2 / h);
    CHECK_THAT(std::abs(lg_mode(1, 1, x, y, h) - expected11), WithinAbs(0.0, 1e-14));
}

TEST_CASE("lg_mode L2 normalization") {
    for (const double h : {0.1, 1.0}) {
        const double L = mode_grid_extent(h, 4);
        const int npts = 256;
        const double dx = 2.0 * L / (npts - 1);
        for (int j = 0; j <= 4; ++j)
            for (int k = 0; k <= 4; ++k) {
                double acc = 0.0;
                for (int ix = 0; ix < npts; ++ix) {
                    const double wx = (ix == 0 || ix == npts - 1) ? 0.5 : 1.0;
                    const double x = -L + ix * dx;
                    for (int iy = 0; iy < npts; ++iy) {
                        const double wy = (iy == 0 || iy == npts - 1) ? 0.5 : 1.0;
                        acc += wx * wy * std::norm(lg_mode(j, k, x, -L + iy * dx, h));
                    }
                }
                acc *= dx * dx;
                CHECK_THAT(acc, WithinAbs(1.0, 1e-8));
            }
    }
}

TEST_CASE("lg_mode angular structure") {
    const double h = 0.4;
    for (int j = 0; j <= 4; ++j)
        for (int k = 0; k <= j; ++k) {
            const double r = 0.8 * std::sqrt(h);
            for (int s = 0; s < 12; ++s) {
                const double theta = s * std::numbers::pi / 6.0;
                const complexd v = lg_mode(j, k, r * std::cos(theta), r * std::sin(theta), h);
                const complexd radial = v * std::polar(1.0, -(j - k) * theta);
                CHECK_THAT(radial.imag(), WithinAbs(0.0, 1e-12));
            }
        }
}

TEST_CASE("1D ladder actions on basis vectors") {
    const double h = 1.0;
    const auto up = ladder_apply(Ladder::a_dag, basis_vector(0, h));
    REQUIRE(up.size() == 2);
    CHECK(up[0] == complexd(0.0));
    CHECK(up[1] == complexd(1.0));

    const auto down = ladder_apply(Ladder::a, basis_vector(0, h));
    CHECK(down.norm() == 0.0);
}

TEST_CASE("number operator and commutator identities") {
    const double h = 0.5;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<complexd> c(7);
    for (auto& v : c) v = complexd(u(rng), u(rng));
    const CoefficientVector vec(h, c);

    // a^dag a scales coefficient n by n; the sqrt(n) factors compose to n
    // up to one rounding each, so the check is at ulp scale
    const auto num = ladder_apply(Ladder::a_dag, ladder_apply(Ladder::a, vec));
    for (int n = 0; n < vec.size(); ++n)
        CHECK(std::abs(num[n] - double(n) * vec[n]) <= 4e-16 * n * std::abs(vec[n]));

    // [a, a^dag] = 1 on padded vectors, again to ulp scale
    const auto ad_a = ladder_apply(Ladder::a_dag, ladder_apply(Ladder::a, vec));
    const auto a_ad = ladder_apply(Ladder::a, ladder_apply(Ladder::a_dag, vec));
    REQUIRE(a_ad.size() >= vec.size());
    for (int n = 0; n < vec.size(); ++n)
        CHECK(std::abs(a_ad[n] - ad_a[n] - vec[n]) <= 1e-15 * (n + 1) * std::abs(vec[n]));
}

TEST_CASE("LG creators on the ground matrix match the field-level oracle") {
    const double h = 0.6;
    const auto c = ladder_apply(Ladder::A_minus_dag,
                                ladder_apply(Ladder::A_plus_dag, basis_matrix(0, 0, h)));
    // exact coefficient-space expectation: (h_20 + h_02)/sqrt2
    CHECK_THAT(std::abs(c.at(2, 0) - complexd(1.0 / std::numbers::sqrt2)), WithinAbs(0.0, 1e-15));
    CHECK_THAT(std::abs(c.at(0, 2) - complexd(1.0 / std::numbers::sqrt2)), WithinAbs(0.0, 1e-15));
    CHECK_THAT(std::abs(c.at(1, 1)), WithinAbs(0.0, 1e-15));

    // independent check against the creation operators applied to the
    // sampled ground mode by finite differences
    Field2D f = lg_creation_fd(lg_creation_fd(ground_mode(h), true, h), false, h);
    for (const auto [x, y] : {std::pair{0.2, 0.1}, {-0.4, 0.5}, {0.0, 0.0}, {0.7, -0.3}}) {
        CHECK_THAT(std::abs(synthesize(c, x, y) - f(x, y)), WithinAbs(0.0, 1e-10));
    }
}

TEST_CASE("coefficient containers validate and report norms") {
    CHECK_THROWS_AS(CoefficientVector(0.0, {complexd(1.0)}), std::domain_error);
    CHECK_THROWS_AS(CoefficientMatrix(-1.0, 2, 2), std::domain_error);
    CHECK_THROWS_AS(outer_product(basis_vector(0, 1.0), basis_vector(0, 0.5)),
                    std::invalid_argument);

    const CoefficientVector v(1.0, {complexd(3.0, 0.0), complexd(0.0, 4.0)});
    CHECK_THAT(v.norm(), WithinAbs(5.0, 1e-15));
}

TEST_CASE("ladder kind and operand shape must agree") {
    CHECK_THROWS_AS(ladder_apply(Ladder::A_plus, basis_vector(0, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(ladder_apply(Ladder::a, basis_matrix(0, 0, 1.0)), std::invalid_argument);
}

TEST_CASE("basis faithfulness: synth then quadrature re-projection") {
    const double h = 0.3;
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    SECTION("vector") {
        std::vector<complexd> c(6);
        for (auto& v : c) v = complexd(u(rng), u(rng));
        const CoefficientVector vec(h, c);
        const double L = mode_grid_extent(h, vec.size() - 1);
        const int npts = 256;
        const double dx = 2.0 * L / (npts - 1);
        for (int n = 0; n < vec.size(); ++n) {
            complexd acc = 0.0;
            for (int i = 0; i < npts; ++i) {
                const double x = -L + i * dx;
                const double w = (i == 0 || i == npts - 1) ? 0.5 : 1.0;
                acc += w * synthesize(vec, x) * hermite_function(n, x, h);
            }
            acc *= dx;
            CHECK_THAT(std::abs(acc - vec[n]), WithinAbs(0.0, 1e-8));
        }
    }

    SECTION("matrix") {
        CoefficientMatrix mat(h, 3, 3);
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) mat.at(m, n) = complexd(u(rng), u(rng));
        const double L = mode_grid_extent(h, 2);
        const int npts = 128;
        const double dx = 2.0 * L / (npts - 1);
        for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n) {
                complexd acc = 0.0;
                for (int i = 0; i < npts; ++i) {
                    const double x = -L + i * dx;
                    const double wi = (i == 0 || i == npts - 1) ? 0.5 : 1.0;
                    for (int j = 0; j < npts; ++j) {
                        const double y = -L + j * dx;
                        const double wj = (j == 0 || j == npts - 1) ? 0.5 : 1.0;
                        acc += wi * wj * synthesize(mat, x, y) * hermite_function(m, x, h) *
                               hermite_function(n, y, h);
                    }
                }
                acc *= dx * dx;
                CHECK_THAT(std::abs(acc - mat.at(m, n)), WithinAbs(0.0, 1e-8));
            }
    }
}
