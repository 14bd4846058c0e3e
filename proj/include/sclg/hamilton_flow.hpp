#pragma once

// Hamilton flow of the Weyl symbol p_r(x, xi; h) = x(x^2 + xi^2)/2 - r^2 h x / 2:
// trajectory classification, closed forms (Weierstrass p-function for
// nonzero energy, sech/tanh/coth separatrices at zero energy), an implicit
// midpoint integrator, and the rescaled transport flow.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sclg/special_functions.hpp"

namespace sclg {

struct PhaseSpaceState {
    double x = 0.0;
    double xi = 0.0;
    double h = 1.0;    // semiclassical parameter, > 0
    double r2 = 0.0;   // scale r^2 in the symbol, >= 0

    void validate() const {
        if (!(h > 0.0)) throw std::domain_error("PhaseSpaceState: h must be positive");
        if (r2 < 0.0) throw std::domain_error("PhaseSpaceState: r2 must be non-negative");
        if (!std::isfinite(x) || !std::isfinite(xi))
            throw std::domain_error("PhaseSpaceState: non-finite components");
    }
};

// Conserved quantity C = p_r(x, xi; h).
inline double weyl_symbol(const PhaseSpaceState& s) {
    return 0.5 * s.x * (s.x * s.x + s.xi * s.xi) - 0.5 * s.r2 * s.h * s.x;
}

struct FieldValue {
    double dx = 0.0;
    double dxi = 0.0;
};

// Hamilton's equations: dx/dt = x xi, dxi/dt = -(3/2)x^2 - xi^2/2 + r^2 h / 2.
inline FieldValue hamilton_vector_field(const PhaseSpaceState& s) {
    return {s.x * s.xi, -1.5 * s.x * s.x - 0.5 * s.xi * s.xi + 0.5 * s.r2 * s.h};
}

// ---------------------------------------------------------------------------
// Trajectory classification
// ---------------------------------------------------------------------------

enum class TrajectoryKind {
    generic_weierstrass,
    sep_coth,
    sep_tanh,
    sep_sech_plus,
    sep_sech_minus,
    hyperbolic_fixed,
    elliptic_fixed,
    axis_x_zero,  // r = 0 invariant axis, xi(t) = 2/(t + t0)
};

struct TrajectoryClass {
    TrajectoryKind kind = TrajectoryKind::generic_weierstrass;
    double C = 0.0;          // conserved value at the seed
    double t0 = 0.0;         // phase constant along the closed form
    PeriodLine branch = PeriodLine::real_line;
    EllipticInvariants invariants{};  // filled for the generic kind
};

namespace detail {

// separatrix classification threshold, relative to the natural scale
inline double energy_epsilon(const PhaseSpaceState& s) {
    const double cube = std::fabs(s.x) * s.x * s.x;
    const double scale = std::max({1.0, std::fabs(cube) + std::fabs(s.xi * s.xi * s.xi),
                                   std::pow(s.r2 * s.h, 1.5)});
    return 1e-12 * scale;
}

}  // namespace detail

// Total classification of the seed state: fixed points by vector-field
// magnitude, the four zero-energy separatrix forms by sign/position, and
// otherwise the Weierstrass parametrization with the phase constant and
// evaluation line solved from the initial conditions.
inline TrajectoryClass classify_trajectory(const PhaseSpaceState& s) {
    s.validate();
    TrajectoryClass cls;
    cls.C = weyl_symbol(s);
    const double pocket2 = s.r2 * s.h;        // (pocket radius)^2
    const double sep = std::sqrt(pocket2);    // separatrix radius

    const FieldValue f = hamilton_vector_field(s);
    if (std::hypot(f.dx, f.dxi) <= 1e-12 * pocket2) {
        cls.kind = (std::fabs(s.x) <= std::fabs(s.xi)) ? TrajectoryKind::hyperbolic_fixed
                                                       : TrajectoryKind::elliptic_fixed;
        return cls;
    }

    if (std::fabs(cls.C) <= detail::energy_epsilon(s)) {
        const double axis_tol = 1e-12 * std::max({1.0, std::fabs(s.xi), sep});
        if (std::fabs(s.x) <= axis_tol) {
            if (pocket2 == 0.0) {
                cls.kind = TrajectoryKind::axis_x_zero;
                cls.t0 = 2.0 / s.xi;
                return cls;
            }
            if (std::fabs(s.xi) < sep) {
                cls.kind = TrajectoryKind::sep_tanh;
                cls.t0 = (2.0 / sep) * std::atanh(s.xi / sep);
            } else {
                cls.kind = TrajectoryKind::sep_coth;
                cls.t0 = (2.0 / sep) * std::atanh(sep / s.xi);
            }
            return cls;
        }
        cls.kind = (s.x > 0.0) ? TrajectoryKind::sep_sech_plus : TrajectoryKind::sep_sech_minus;
        const double ratio = std::clamp(s.xi / sep, -1.0 + 1e-15, 1.0 - 1e-15);
        cls.t0 = -std::atanh(ratio) / sep;
        return cls;
    }

    // generic Weierstrass trajectory
    cls.kind = TrajectoryKind::generic_weierstrass;
    cls.invariants = elliptic_invariants(cls.C, s.h, s.r2);
    const double a = s.r2 * s.h / 12.0;
    // p(t0) must equal C/(2 x0) + a = (x0^2 + xi0^2)/4 - r^2 h / 6
    const double target = 0.25 * (s.x * s.x + s.xi * s.xi) - s.r2 * s.h / 6.0;

    const bool pocket_branch =
        cls.invariants.discriminant_sign == DiscriminantSign::positive && cls.C / s.x < 0.0;
    cls.branch = pocket_branch ? PeriodLine::half_period_shift : PeriodLine::real_line;

    const double omega_r = real_half_period(cls.invariants);
    double lo, hi;
    if (pocket_branch) {
        // p increases from e3 to e2 over [0, omega_r] on the shifted line
        lo = 0.0;
        hi = omega_r;
    } else {
        // p decreases from the pole to e1 over (0, omega_r] on the real line;
        // when the period degenerates (double root) it decays monotonically
        // to e1 on the whole half-line instead
        hi = omega_r;
        if (!std::isfinite(hi)) {
            hi = 1.0;
            while (weierstrass_p_on_line(hi, PeriodLine::real_line, cls.invariants).p > target &&
                   hi < 1e9)
                hi *= 2.0;
        }
        lo = hi;
        const double floor_t = 2.0 * detail::kPoleRadius;
        while (weierstrass_p_on_line(lo, PeriodLine::real_line, cls.invariants).p < target) {
            lo *= 0.5;
            if (lo < floor_t)
                throw std::domain_error("classify_trajectory: seed within the pole window");
        }
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-17 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double val = weierstrass_p_on_line(mid, cls.branch, cls.invariants).p;
        const bool go_right = pocket_branch ? (val < target) : (val > target);
        if (go_right)
            lo = mid;
        else
            hi = mid;
    }
    double t0 = 0.5 * (lo + hi);
    if (pocket_branch && target <= cls.invariants.roots[2].real()) t0 = 0.0;

    // p is even, p' odd: pick the sign of t0 that reproduces xi at the seed
    const auto w = weierstrass_p_on_line(std::max(t0, detail::kPoleRadius * 1.001), cls.branch,
                                         cls.invariants);
    const double denom = w.p - a;
    const double xi_plus = -w.p_prime / denom;
    cls.t0 = (std::fabs(xi_plus - s.xi) <= std::fabs(-xi_plus - s.xi)) ? t0 : -t0;

    // Newton polish on p'(t0) + xi0 (p(t0) - a) = 0.  The x-only solve has
    // square-root sensitivity at turning points (p' = 0); this joint
    // condition stays well-conditioned there.
    for (int it = 0; it < 3; ++it) {
        WeierstrassValue wp;
        try {
            wp = weierstrass_p_on_line(cls.t0, cls.branch, cls.invariants);
        } catch (const pole_proximity_error&) {
            break;
        }
        const double G = wp.p_prime + s.xi * (wp.p - a);
        const double Gp = 6.0 * wp.p * wp.p - cls.invariants.g2 / 2.0 + s.xi * wp.p_prime;
        const double step = G / Gp;
        if (!std::isfinite(step) || std::fabs(step) > 0.25 * std::max(1.0, std::fabs(cls.t0)))
            break;
        cls.t0 -= step;
    }
    return cls;
}

// ---------------------------------------------------------------------------
// Closed-form evaluation
// ---------------------------------------------------------------------------

// Evaluates the closed form of the trajectory through `seed` at time t.
// `cls` must have been produced from `seed` by classify_trajectory.
inline PhaseSpaceState closed_form_state(const TrajectoryClass& cls, const PhaseSpaceState& seed,
                                         double t) {
    PhaseSpaceState out = seed;
    const double sep = std::sqrt(seed.r2 * seed.h);
    const double arg = t + cls.t0;
    switch (cls.kind) {
        case TrajectoryKind::hyperbolic_fixed:
        case TrajectoryKind::elliptic_fixed:
            return seed;
        case TrajectoryKind::sep_tanh:
            out.x = 0.0;
            out.xi = sep * std::tanh(0.5 * sep * arg);
            return out;
        case TrajectoryKind::sep_coth:
            if (std::fabs(arg) < detail::kPoleRadius) throw pole_proximity_error(-cls.t0, t);
            out.x = 0.0;
            out.xi = sep / std::tanh(0.5 * sep * arg);
            return out;
        case TrajectoryKind::axis_x_zero:
            if (std::fabs(arg) < detail::kPoleRadius) throw pole_proximity_error(-cls.t0, t);
            out.x = 0.0;
            out.xi = 2.0 / arg;
            return out;
        case TrajectoryKind::sep_sech_plus:
        case TrajectoryKind::sep_sech_minus: {
            const double sign = (cls.kind == TrajectoryKind::sep_sech_plus) ? 1.0 : -1.0;
            out.x = sign * sep / std::cosh(sep * arg);
            out.xi = -sep * std::tanh(sep * arg);
            return out;
        }
        case TrajectoryKind::generic_weierstrass: {
            const auto w = weierstrass_p_on_line(arg, cls.branch, cls.invariants);
            const double denom = w.p - seed.r2 * seed.h / 12.0;
            out.x = 0.5 * cls.C / denom;
            out.xi = -w.p_prime / denom;
            return out;
        }
    }
    throw std::logic_error("closed_form_state: unhandled trajectory kind");
}

// ---------------------------------------------------------------------------
// Implicit midpoint integrator
// ---------------------------------------------------------------------------

enum class FlowStatus { ok, escaped, newton_failure };

struct FlowOutcome {
    PhaseSpaceState state{};
    FlowStatus status = FlowStatus::ok;
    double t_reached = 0.0;
};

class flow_escape_error : public std::runtime_error {
  public:
    explicit flow_escape_error(double t)
        : std::runtime_error("flow escaped beyond |x|+|xi| = 1e6 at t = " + std::to_string(t)),
          t_reached(t) {}
    double t_reached;
};

class flow_newton_error : public std::runtime_error {
  public:
    explicit flow_newton_error(double t)
        : std::runtime_error("implicit midpoint Newton iteration failed at t = " +
                             std::to_string(t)),
          t_reached(t) {}
    double t_reached;
};

namespace detail {

constexpr double kEscapeNorm = 1e6;

// field of p_r, parametrized by r^2 h / 2
struct SymbolField {
    double half_r2h;
    void eval(double x, double xi, double& fx, double& fxi) const {
        fx = x * xi;
        fxi = -1.5 * x * x - 0.5 * xi * xi + half_r2h;
    }
    void jacobian(double x, double xi, double& j11, double& j12, double& j21,
                  double& j22) const {
        j11 = xi;
        j12 = x;
        j21 = -3.0 * x;
        j22 = -xi;
    }
};

// field of the transport symbol -(1/sqrt2)[x(x^2+xi^2)/2 - 4 h x]
struct TransportField {
    double h;
    void eval(double x, double xi, double& fx, double& fxi) const {
        const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
        fx = -x * xi * inv_sqrt2;
        fxi = (1.5 * x * x + 0.5 * xi * xi - 4.0 * h) * inv_sqrt2;
    }
    void jacobian(double x, double xi, double& j11, double& j12, double& j21,
                  double& j22) const {
        const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
        j11 = -xi * inv_sqrt2;
        j12 = -x * inv_sqrt2;
        j21 = 3.0 * x * inv_sqrt2;
        j22 = xi * inv_sqrt2;
    }
};

// One implicit midpoint step z -> 2m - z where m solves
// m = z + (dt/2) F(m), by a full Newton iteration on the 2x2 system.
template <class Field>
inline bool midpoint_step(const Field& field, double& x, double& xi, double dt) {
    double fx, fxi;
    field.eval(x, xi, fx, fxi);
    double mx = x + 0.5 * dt * fx;
    double mxi = xi + 0.5 * dt * fxi;
    const double tol = 1e-13 * std::max(1.0, std::hypot(x, xi));
    bool converged = false;
    for (int it = 0; it < 30; ++it) {
        field.eval(mx, mxi, fx, fxi);
        const double g1 = mx - x - 0.5 * dt * fx;
        const double g2 = mxi - xi - 0.5 * dt * fxi;
        if (std::fabs(g1) + std::fabs(g2) <= tol) {
            converged = true;
            break;
        }
        double j11, j12, j21, j22;
        field.jacobian(mx, mxi, j11, j12, j21, j22);
        const double a11 = 1.0 - 0.5 * dt * j11;
        const double a12 = -0.5 * dt * j12;
        const double a21 = -0.5 * dt * j21;
        const double a22 = 1.0 - 0.5 * dt * j22;
        const double det = a11 * a22 - a12 * a21;
        if (det == 0.0 || !std::isfinite(det)) return false;
        mx -= (a22 * g1 - a12 * g2) / det;
        mxi -= (-a21 * g1 + a11 * g2) / det;
        if (!std::isfinite(mx) || !std::isfinite(mxi)) return false;
    }
    if (!converged) return false;
    x = 2.0 * mx - x;
    xi = 2.0 * mxi - xi;
    return true;
}

template <class Field>
inline FlowOutcome run_flow(const Field& field, PhaseSpaceState seed, double t, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_flow: dt must be positive");
    seed.validate();
    FlowOutcome out;
    out.state = seed;
    if (t == 0.0) return out;
    const double dir = (t > 0.0) ? 1.0 : -1.0;
    const double total = std::fabs(t);
    double done = 0.0;
    while (done < total) {
        const double step = std::min(dt, total - done);
        if (step < 1e-16 * total) break;
        const bool ok = midpoint_step(field, out.state.x, out.state.xi, dir * step);
        if (!ok) {
            // Newton only stalls in the blow-up regime for this field; treat
            // large states as escape, the rest as genuine failure.
            out.status = (std::fabs(out.state.x) + std::fabs(out.state.xi) > 1e3)
                             ? FlowStatus::escaped
                             : FlowStatus::newton_failure;
            out.t_reached = dir * done;
            return out;
        }
        done += step;
        if (std::fabs(out.state.x) + std::fabs(out.state.xi) > kEscapeNorm) {
            out.status = FlowStatus::escaped;
            out.t_reached = dir * done;
            return out;
        }
    }
    out.t_reached = t;
    return out;
}

}  // namespace detail

// Symplectic (implicit midpoint, second order) integration of the Hamilton
// field over [0, t] with fixed step dt.  Status-returning variant; escape
// and Newton failure are reported, not thrown.
inline FlowOutcome integrate_flow_ex(const PhaseSpaceState& seed, double t, double dt) {
    return detail::run_flow(detail::SymbolField{0.5 * seed.r2 * seed.h}, seed, t, dt);
}

// Throwing variant of integrate_flow_ex.
inline PhaseSpaceState integrate_flow(const PhaseSpaceState& seed, double t, double dt) {
    const FlowOutcome out = integrate_flow_ex(seed, t, dt);
    if (out.status == FlowStatus::escaped) throw flow_escape_error(out.t_reached);
    if (out.status == FlowStatus::newton_failure) throw flow_newton_error(out.t_reached);
    return out.state;
}

// ---------------------------------------------------------------------------
// Transport flow: the rescaled conjugate flow that carries LG intensities
// ---------------------------------------------------------------------------

// Flow of p~(x, xi; h) = -(1/sqrt2) [x(x^2+xi^2)/2 - 4 h x], integrated
// directly.  Two alternative routes are exposed below for cross-checking.
inline FlowOutcome transport_flow_ex(const PhaseSpaceState& seed, double t, double dt) {
    return detail::run_flow(detail::TransportField{seed.h}, seed, t, dt);
}

inline PhaseSpaceState transport_flow(const PhaseSpaceState& seed, double t, double dt) {
    const FlowOutcome out = transport_flow_ex(seed, t, dt);
    if (out.status == FlowStatus::escaped) throw flow_escape_error(out.t_reached);
    if (out.status == FlowStatus::newton_failure) throw flow_newton_error(out.t_reached);
    return out.state;
}

// Conjugation route: the transport flow equals M o (r^2 = 4 flow at the
// same t) o M^(-1) with M(x, xi) = (sqrt2 x, -sqrt2 xi).
inline PhaseSpaceState transport_flow_conjugated(const PhaseSpaceState& seed, double t,
                                                 double dt) {
    PhaseSpaceState w = seed;
    w.x = seed.x / std::numbers::sqrt2;
    w.xi = -seed.xi / std::numbers::sqrt2;
    w.r2 = 4.0;
    const PhaseSpaceState moved = integrate_flow(w, t, dt);
    PhaseSpaceState out = seed;
    out.x = std::numbers::sqrt2 * moved.x;
    out.xi = -std::numbers::sqrt2 * moved.xi;
    return out;
}

// Time-rescaling route: the transport flow is the r^2 = 8 symbol flow run
// for time -t/sqrt2.
inline PhaseSpaceState transport_flow_rescaled(const PhaseSpaceState& seed, double t, double dt) {
    PhaseSpaceState w = seed;
    w.r2 = 8.0;
    const PhaseSpaceState moved = integrate_flow(w, -t / std::numbers::sqrt2, dt);
    PhaseSpaceState out = seed;
    out.x = moved.x;
    out.xi = moved.xi;
    return out;
}

// ---------------------------------------------------------------------------
// Flow lines
// ---------------------------------------------------------------------------

struct FlowSample {
    double t = 0.0;
    double x = 0.0;
    double xi = 0.0;
    double C = 0.0;
};

struct FlowLine {
    int id = 0;
    std::vector<FlowSample> points;
    bool escaped = false;
    double escape_time = 0.0;
};

// Largest state norm recorded on a polyline; past this the trajectory is
// three stride-samples from blow-up and the portrait carries no content.
inline constexpr double kFlowLineNorm = 30.0;

// Integrates every seed up to t_max, sampling every `stride` steps.  Fixed
// points are emitted as single-point lines; per-seed escape is recorded on
// the line, never fatal.  The C column carries the line's conserved energy
// (evaluated once at the seed), so it is constant per line by construction;
// integrator conservation quality is tested through the state columns.
inline std::vector<FlowLine> flow_lines(const std::vector<PhaseSpaceState>& seeds, double t_max,
                                        double dt, int stride) {
    if (!(t_max > 0.0)) throw std::invalid_argument("flow_lines: t_max must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("flow_lines: dt must be positive");
    if (stride < 1) throw std::invalid_argument("flow_lines: stride must be at least 1");
    std::vector<FlowLine> lines;
    lines.reserve(seeds.size());
    int id = 0;
    for (const auto& seed : seeds) {
        FlowLine line;
        line.id = id++;
        const TrajectoryClass cls = classify_trajectory(seed);
        line.points.push_back({0.0, seed.x, seed.xi, cls.C});
        if (cls.kind == TrajectoryKind::hyperbolic_fixed ||
            cls.kind == TrajectoryKind::elliptic_fixed) {
            lines.push_back(std::move(line));
            continue;
        }
        PhaseSpaceState state = seed;
        const detail::SymbolField field{0.5 * seed.r2 * seed.h};
        const long nsteps = std::lround(std::ceil(t_max / dt));
        for (long k = 1; k <= nsteps; ++k) {
            const double step = std::min(dt, t_max - (k - 1) * dt);
            if (step <= 0.0) break;
            if (!detail::midpoint_step(field, state.x, state.xi, step) ||
                std::fabs(state.x) + std::fabs(state.xi) > kFlowLineNorm) {
                line.escaped = true;
                line.escape_time = (k - 1) * dt;
                break;
            }
            if (k % stride == 0 || k == nsteps)
                line.points.push_back({std::min(k * dt, t_max), state.x, state.xi, cls.C});
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

}  // namespace sclg
