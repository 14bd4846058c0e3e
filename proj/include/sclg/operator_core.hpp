#pragma once

// The model operator as a Jacobi matrix on the HG basis, its unitary
// propagator via symmetric-tridiagonal eigendecomposition, the tensor
// action on 2D modes, and the eight SU(3) generators with their algebra.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sclg/modes.hpp"
#include "sclg/wigner.hpp"

namespace sclg {

// Off-diagonal entries of the Jacobi matrix: beta_n = (1 - n) sqrt(n + 1).
// Note beta_1 = 0, which decouples the top-left 2x2 block exactly.
inline double jacobi_off_diagonal(int n) {
    if (n < 0) throw std::invalid_argument("jacobi_off_diagonal: negative index");
    return (1.0 - n) * std::sqrt(n + 1.0);
}

struct JacobiOperator {
    int dimension = 0;
    std::vector<double> off_diagonal;  // beta_0 .. beta_{N-2}, diagonal is zero
};

inline JacobiOperator make_jacobi_operator(int dimension) {
    if (dimension < 1) throw std::invalid_argument("make_jacobi_operator: dimension < 1");
    JacobiOperator j;
    j.dimension = dimension;
    j.off_diagonal.resize(dimension > 1 ? dimension - 1 : 0);
    for (int n = 0; n + 1 < dimension; ++n) j.off_diagonal[n] = jacobi_off_diagonal(n);
    return j;
}

// Tridiagonal action T h_n = beta_n h_{n+1} + beta_{n-1} h_{n-1}; the
// output expansion grows by one index.
inline CoefficientVector apply_model_operator(const CoefficientVector& c) {
    std::vector<complexd> out(c.size() + 1, 0.0);
    for (int n = 0; n < c.size(); ++n) {
        const complexd v = c[n];
        if (v == complexd(0.0)) continue;
        out[n + 1] += jacobi_off_diagonal(n) * v;
        if (n >= 1) out[n - 1] += jacobi_off_diagonal(n - 1) * v;
    }
    return CoefficientVector(c.h(), std::move(out));
}

namespace detail {

inline CoefficientMatrix apply_T_rows(const CoefficientMatrix& c) {
    CoefficientMatrix out(c.h(), c.rows() + 1, c.cols());
    for (int m = 0; m < c.rows(); ++m)
        for (int n = 0; n < c.cols(); ++n) {
            const complexd v = c.at(m, n);
            if (v == complexd(0.0)) continue;
            out.at(m + 1, n) += jacobi_off_diagonal(m) * v;
            if (m >= 1) out.at(m - 1, n) += jacobi_off_diagonal(m - 1) * v;
        }
    return out;
}

inline CoefficientMatrix apply_T_cols(const CoefficientMatrix& c) {
    CoefficientMatrix out(c.h(), c.rows(), c.cols() + 1);
    for (int m = 0; m < c.rows(); ++m)
        for (int n = 0; n < c.cols(); ++n) {
            const complexd v = c.at(m, n);
            if (v == complexd(0.0)) continue;
            out.at(m, n + 1) += jacobi_off_diagonal(n) * v;
            if (n >= 1) out.at(m, n - 1) += jacobi_off_diagonal(n - 1) * v;
        }
    return out;
}

}  // namespace detail

// Tensor action (T (x) T) on a 2D coefficient matrix: the Jacobi recurrence
// applied independently along each index.
inline CoefficientMatrix apply_model_operator_tensor(const CoefficientMatrix& c) {
    return detail::apply_T_cols(detail::apply_T_rows(c));
}

// Images of the four binary HG modes under T (x) T.  The action is exact in
// coefficient space: it swaps (0,0) <-> (1,1) and (1,0) <-> (0,1).
inline std::array<std::pair<ModeIndex, ModeIndex>, 4> binary_action_table() {
    const double h = 1.0;  // the coefficient action does not depend on h
    std::array<std::pair<ModeIndex, ModeIndex>, 4> table{};
    const std::array<ModeIndex, 4> inputs = {ModeIndex{0, 0}, ModeIndex{1, 1}, ModeIndex{1, 0},
                                             ModeIndex{0, 1}};
    for (size_t k = 0; k < inputs.size(); ++k) {
        const auto in = inputs[k];
        const CoefficientMatrix img = apply_model_operator_tensor(basis_matrix(in.m, in.n, h));
        ModeIndex found{-1, -1};
        for (int m = 0; m < img.rows(); ++m)
            for (int n = 0; n < img.cols(); ++n) {
                const complexd v = img.at(m, n);
                if (v == complexd(0.0)) continue;
                if (found.m >= 0 || v != complexd(1.0))
                    throw std::logic_error("binary_action_table: action is not a basis swap");
                found = ModeIndex{m, n};
            }
        table[k] = {in, found};
    }
    return table;
}

// ---------------------------------------------------------------------------
// Propagator
// ---------------------------------------------------------------------------

inline constexpr int kDefaultTruncation = 64;
inline constexpr int kTruncationMargin = 16;

// Unitary propagator exp(+i t 2^(-1/2) h^(1/2) J_N) of the scaled operator,
// through eigendecomposition of the real symmetric tridiagonal truncation
// J_N.  Unitary to eigensolver precision and reusable across t.
//
// N must at least cover the support of c; the default adds a safety margin
// because beta_n grows like n^(3/2) and spectral leakage is monitored by
// tests rather than assumed absent.  States outside the decoupled
// {h_0, h_1} block evolve in a truncation-defined way (the full operator
// needs a boundary condition at infinity that the truncation fixes
// implicitly).
inline CoefficientVector propagate(const CoefficientVector& c, double t, double h, int N = -1) {
    if (!(h > 0.0)) throw std::domain_error("propagate: h must be positive");
    if (c.h() != h) throw std::invalid_argument("propagate: mismatched h");
    const int support = c.support();
    if (N < 0) N = std::max(kDefaultTruncation, support + 1 + kTruncationMargin);
    if (N < support + 1)
        throw std::invalid_argument("propagate: truncation smaller than coefficient support");

    Eigen::VectorXd diag = Eigen::VectorXd::Zero(N);
    Eigen::VectorXd sub(N > 1 ? N - 1 : 0);
    for (int n = 0; n + 1 < N; ++n) sub[n] = jacobi_off_diagonal(n);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("propagate: tridiagonal eigendecomposition failed");

    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(N);
    for (int n = 0; n < std::min(N, c.size()); ++n) v[n] = c[n];

    const double tau = t * std::sqrt(h / 2.0);
    const Eigen::VectorXcd spectral = es.eigenvectors().transpose() * v;
    Eigen::VectorXcd rotated(N);
    for (int k = 0; k < N; ++k)
        rotated[k] = std::polar(1.0, tau * es.eigenvalues()[k]) * spectral[k];
    const Eigen::VectorXcd out = es.eigenvectors() * rotated;

    std::vector<complexd> coeffs(N);
    for (int n = 0; n < N; ++n) coeffs[n] = out[n];
    return CoefficientVector(h, std::move(coeffs));
}

// Propagates the basis pair (m, n), forms the outer-product coefficient
// matrix (second factor conjugated) and returns its extended Wigner
// transform through the LG closed forms.
inline SampledGrid evolved_lg_field(int m, int n, double t, double h, Axis x, Axis y) {
    const CoefficientVector um = propagate(basis_vector(m, h), t, h);
    const CoefficientVector un = propagate(basis_vector(n, h), t, h);
    SampledGrid g = wigner_extended(outer_product(um, un), x, y, h);
    g.time = t;
    g.quantity = "evolved_lg_field(" + std::to_string(m) + "," + std::to_string(n) + ")";
    return g;
}

// ---------------------------------------------------------------------------
// SU(3) generators
// ---------------------------------------------------------------------------

// 2D HG basis enumeration: ascending total order m + n, then ascending m.
// This makes the order-conserving block structure of the first triad and
// the eighth generator visible as exact block diagonality.
inline int hg2d_basis_size(int cutoff) { return (cutoff + 1) * (cutoff + 2) / 2; }

inline int hg2d_basis_index(int m, int n) {
    const int q = m + n;
    return q * (q + 1) / 2 + m;
}

inline ModeIndex hg2d_basis_state(int index) {
    int q = 0;
    while ((q + 1) * (q + 2) / 2 <= index) ++q;
    const int m = index - q * (q + 1) / 2;
    return ModeIndex{m, q - m};
}

struct GeneratorMatrix {
    int label = 0;   // 1..8
    int cutoff = 0;  // max total order of the basis
    Eigen::MatrixXcd matrix;
};

namespace detail {

enum class LadderPrim { create_x, annihilate_x, create_y, annihilate_y };

struct GeneratorTerm {
    complexd coeff;
    std::vector<LadderPrim> ops;  // applied right to left
};

// Generator definitions in terms of the x/y creation and annihilation
// operators; the identity contribution of the eighth generator is kept
// separate.
inline const std::vector<GeneratorTerm>& generator_terms(int a) {
    using P = LadderPrim;
    const complexd i(0.0, 1.0);
    static const std::array<std::vector<GeneratorTerm>, 8> tables = [&] {
        std::array<std::vector<GeneratorTerm>, 8> t;
        const double half = 0.5;
        t[0] = {{half, {P::create_x, P::annihilate_y}}, {half, {P::create_y, P::annihilate_x}}};
        t[1] = {{-i * half, {P::create_x, P::annihilate_y}},
                {i * half, {P::create_y, P::annihilate_x}}};
        t[2] = {{half, {P::create_x, P::annihilate_x}}, {-half, {P::create_y, P::annihilate_y}}};
        t[3] = {{half, {P::create_x}},
                {half, {P::annihilate_x}},
                {-half, {P::create_x, P::create_x, P::annihilate_x}},
                {-half, {P::create_x, P::annihilate_x, P::annihilate_x}},
                {-half, {P::create_x, P::create_y, P::annihilate_y}},
                {-half, {P::annihilate_x, P::create_y, P::annihilate_y}}};
        t[4] = {{-i * half, {P::create_x}},
                {i * half, {P::annihilate_x}},
                {i * half, {P::create_x, P::create_x, P::annihilate_x}},
                {-i * half, {P::create_x, P::annihilate_x, P::annihilate_x}},
                {i * half, {P::create_x, P::create_y, P::annihilate_y}},
                {-i * half, {P::annihilate_x, P::create_y, P::annihilate_y}}};
        t[5] = {{half, {P::create_y}},
                {half, {P::annihilate_y}},
                {-half, {P::create_y, P::create_y, P::annihilate_y}},
                {-half, {P::create_y, P::annihilate_y, P::annihilate_y}},
                {-half, {P::create_y, P::create_x, P::annihilate_x}},
                {-half, {P::annihilate_y, P::create_x, P::annihilate_x}}};
        t[6] = {{-i * half, {P::create_y}},
                {i * half, {P::annihilate_y}},
                {i * half, {P::create_y, P::create_y, P::annihilate_y}},
                {-i * half, {P::create_y, P::annihilate_y, P::annihilate_y}},
                {i * half, {P::create_y, P::create_x, P::annihilate_x}},
                {-i * half, {P::annihilate_y, P::create_x, P::annihilate_x}}};
        const double c8 = 3.0 / (2.0 * std::sqrt(3.0));
        t[7] = {{c8, {P::create_x, P::annihilate_x}}, {c8, {P::create_y, P::annihilate_y}}};
        return t;
    }();
    if (a < 1 || a > 8) throw std::invalid_argument("generator_terms: label must be 1..8");
    return tables[a - 1];
}

// dense ket over the (m, n) grid up to max_order in each variable
struct Ket2D {
    int dim;
    std::vector<complexd> v;
    explicit Ket2D(int max_order) : dim(max_order + 1), v(size_t(dim) * dim, 0.0) {}
    complexd& at(int m, int n) { return v[size_t(m) * dim + n]; }
    const complexd& at(int m, int n) const { return v[size_t(m) * dim + n]; }
};

// Applies one ladder primitive in place on the fixed workspace; entries
// that would exceed the workspace order are dropped.
inline void apply_prim_inplace(LadderPrim p, Ket2D& ket) {
    Ket2D out(ket.dim - 1);  // same shape as ket
    for (int m = 0; m < ket.dim; ++m)
        for (int n = 0; n < ket.dim; ++n) {
            const complexd c = ket.at(m, n);
            if (c == complexd(0.0)) continue;
            switch (p) {
                case LadderPrim::create_x:
                    if (m + 1 < ket.dim) out.v[size_t(m + 1) * ket.dim + n] += std::sqrt(m + 1.0) * c;
                    break;
                case LadderPrim::annihilate_x:
                    if (m >= 1) out.v[size_t(m - 1) * ket.dim + n] += std::sqrt(double(m)) * c;
                    break;
                case LadderPrim::create_y:
                    if (n + 1 < ket.dim) out.v[size_t(m) * ket.dim + n + 1] += std::sqrt(n + 1.0) * c;
                    break;
                case LadderPrim::annihilate_y:
                    if (n >= 1) out.v[size_t(m) * ket.dim + n - 1] += std::sqrt(double(n)) * c;
                    break;
            }
        }
    ket.v.swap(out.v);
}

}  // namespace detail

// Assembles the matrix of generator a over the 2D HG basis up to the given
// total-order cutoff.  Ladder compositions are evaluated exactly on kets
// retained internally up to order cutoff + 3, then restricted to the basis.
inline GeneratorMatrix su3_generator(int a, int cutoff) {
    if (a < 1 || a > 8) throw std::invalid_argument("su3_generator: label must be 1..8");
    if (cutoff < 2) throw std::invalid_argument("su3_generator: cutoff must be at least 2");
    const int nb = hg2d_basis_size(cutoff);
    const int work_order = cutoff + 3;
    GeneratorMatrix gm;
    gm.label = a;
    gm.cutoff = cutoff;
    gm.matrix = Eigen::MatrixXcd::Zero(nb, nb);

    const auto& terms = detail::generator_terms(a);
    for (int col = 0; col < nb; ++col) {
        const ModeIndex st = hg2d_basis_state(col);
        detail::Ket2D acc(work_order);
        for (const auto& term : terms) {
            detail::Ket2D ket(work_order);
            ket.at(st.m, st.n) = 1.0;
            for (auto it = term.ops.rbegin(); it != term.ops.rend(); ++it)
                detail::apply_prim_inplace(*it, ket);
            for (size_t idx = 0; idx < ket.v.size(); ++idx) acc.v[idx] += term.coeff * ket.v[idx];
        }
        if (a == 8) acc.at(st.m, st.n) += -2.0 / (2.0 * std::sqrt(3.0));
        for (int m = 0; m <= work_order; ++m)
            for (int n = 0; n <= work_order - m; ++n) {
                if (m + n > cutoff) continue;
                const complexd c = acc.at(m, n);
                if (c != complexd(0.0)) gm.matrix(hg2d_basis_index(m, n), col) = c;
            }
    }
    return gm;
}

// Totally antisymmetric structure constants f_{abc} (1-based labels), from
// the base triples f_123 = 1, f_147 = f_165 = f_246 = f_257 = f_345 =
// f_376 = 1/2 and f_458 = f_678 = sqrt(3)/2.
inline double su3_structure_constant(int a, int b, int c) {
    struct Entry {
        int i, j, k;
        double f;
    };
    static const std::array<Entry, 9> base = {{{1, 2, 3, 1.0},
                                               {1, 4, 7, 0.5},
                                               {1, 6, 5, 0.5},
                                               {2, 4, 6, 0.5},
                                               {2, 5, 7, 0.5},
                                               {3, 4, 5, 0.5},
                                               {3, 7, 6, 0.5},
                                               {4, 5, 8, std::sqrt(3.0) / 2.0},
                                               {6, 7, 8, std::sqrt(3.0) / 2.0}}};
    for (const auto& e : base) {
        // even permutations keep the sign, odd permutations flip it
        if (a == e.i && b == e.j && c == e.k) return e.f;
        if (a == e.j && b == e.k && c == e.i) return e.f;
        if (a == e.k && b == e.i && c == e.j) return e.f;
        if (a == e.j && b == e.i && c == e.k) return -e.f;
        if (a == e.i && b == e.k && c == e.j) return -e.f;
        if (a == e.k && b == e.j && c == e.i) return -e.f;
    }
    return 0.0;
}

// Frobenius norm of P([T_a, T_b] - i sum_c f_abc T_c) P, with P the
// projection onto the span of the three lowest modes.  Exact ladder
// assembly makes this vanish to roundoff for cutoff >= 4.
inline double su3_commutator_residual(int a, int b, int cutoff) {
    if (cutoff < 4)
        throw std::invalid_argument("su3_commutator_residual: cutoff must be at least 4");
    const Eigen::MatrixXcd Ta = su3_generator(a, cutoff).matrix;
    const Eigen::MatrixXcd Tb = su3_generator(b, cutoff).matrix;
    Eigen::MatrixXcd comm = Ta * Tb - Tb * Ta;
    const complexd i(0.0, 1.0);
    for (int c = 1; c <= 8; ++c) {
        const double f = su3_structure_constant(a, b, c);
        if (f != 0.0) comm -= i * f * su3_generator(c, cutoff).matrix;
    }
    return comm.block(0, 0, 3, 3).norm();
}

}  // namespace sclg
