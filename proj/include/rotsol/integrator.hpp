#pragma once

// Integration of the soliton system and the per-sample diagnostics stored
// with a trajectory.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rotsol/errors.hpp"
#include "rotsol/soliton.hpp"
#include "rotsol/surface.hpp"

namespace rotsol {

enum class Method
{
    rk4,
    rkf45
};

inline const char* to_string(Method m)
{
    return m == Method::rk4 ? "rk4" : "rkf45";
}

struct EventConfig
{
    /// Stop once |u'| < lock_eps and |phi_u| < lock_eps over `lock_window` of arc length.
    bool asymptote_lock = true;
    double lock_eps = 1e-6;
    double lock_window = 5.0;
    /// Stop once |u| > escape_u while moving outwards.
    std::optional<double> escape_u;
};

struct IntegratorConfig
{
    Method method = Method::rkf45;
    /// Fixed step for rk4, initial trial step for rkf45.
    double h = 1e-2;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double safety = 0.9;
    double min_step = 1e-12;
    double max_step = 0.1;
    double s_max = 100.0;
    bool bidirectional = false;
    /// Rescale the tangent onto u'^2 + v'^2 phi^2 = 1 after every step.
    bool renormalize = false;
    EventConfig events;
};

enum class Termination
{
    completed,
    domain_exit,
    non_finite,
    asymptote_lock,
    escaped
};

inline const char* to_string(Termination t)
{
    switch (t) {
    case Termination::completed: return "completed";
    case Termination::domain_exit: return "domain_exit";
    case Termination::non_finite: return "non_finite";
    case Termination::asymptote_lock: return "asymptote_lock";
    case Termination::escaped: return "escaped";
    }
    return "unknown";
}

struct StepStats
{
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
    double min_step = std::numeric_limits<double>::infinity();
    double max_step = 0.0;
};

/// Outcome of integrating one end of the curve.
struct Branch
{
    Termination reason = Termination::completed;
    StepStats stats;
    double s_end = 0.0;
    std::string message;
};

/**
 * Integrated soliton with diagnostics. Samples are ordered by increasing s;
 * for bidirectional runs `origin` is the index of s = 0. `lambda` holds NaN
 * where |u'| is too close to 1 for Lambda to exist.
 */
struct Trajectory
{
    SolitonParams params;
    std::string profile_name;
    std::vector<SolitonState> samples;
    std::vector<double> kappa;
    std::vector<double> dkappa;  // d kappa / ds
    std::vector<double> lambda;
    std::vector<double> f;       // integral of kappa^2 from s = 0
    std::vector<double> theta;
    std::vector<double> drift;   // u'^2 + v'^2 phi^2 - 1
    std::vector<Vec3> embedded;
    std::size_t origin = 0;
    bool bidirectional = false;
    Branch forward;
    Branch backward;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

/**
 * Cumulative integral of kappa^2 from s = 0 over the samples. Each interval
 * uses the trapezoid rule with the endpoint-derivative correction
 * h^2/12 (g'_0 - g'_1), g = kappa^2, g' = 2 kappa kappa'; increments are
 * clipped at zero since the integrand is non-negative. Without `dkappa`
 * the plain trapezoid rule is used.
 */
inline std::vector<double> total_curvature(const Trajectory& traj)
{
    const std::size_t n = traj.samples.size();
    std::vector<double> out(n, 0.0);
    if (n == 0)
        return out;
    const bool corrected = traj.dkappa.size() == n;
    for (std::size_t i = 1; i < n; ++i) {
        const double h = traj.samples[i].s - traj.samples[i - 1].s;
        const double k0 = traj.kappa[i - 1], k1 = traj.kappa[i];
        double inc = 0.5 * h * (k0 * k0 + k1 * k1);
        if (corrected)
            inc += h * h / 12.0 * (2 * k0 * traj.dkappa[i - 1] - 2 * k1 * traj.dkappa[i]);
        out[i] = out[i - 1] + std::max(inc, 0.0);
    }
    const double base = out[std::min(traj.origin, n - 1)];
    for (double& x : out)
        x -= base;
    return out;
}

/**
 * Fills kappa, dkappa, lambda, theta, drift, embedded and f from the samples.
 * u'' is taken from the soliton system unless `upp` supplies it (synthetic
 * curves that are not solitons).
 */
inline void compute_diagnostics(const Profile& p, Trajectory& traj, std::span<const double> upp_in = {})
{
    const std::size_t n = traj.samples.size();
    traj.kappa.resize(n);
    traj.dkappa.resize(n);
    traj.lambda.resize(n);
    traj.theta.resize(n);
    traj.drift.resize(n);
    traj.embedded.resize(n);
    const double a = traj.params.a;
    for (std::size_t i = 0; i < n; ++i) {
        const SolitonState& st = traj.samples[i];
        const ProfileJet j = p.jet(st.u);
        const double upp = upp_in.size() == n ? upp_in[i]
                                              : -a * st.up * st.vp * j.phi * j.phi + st.vp * st.vp * j.phi * j.dphi;
        traj.kappa[i] = a * j.phi * st.up;
        traj.dkappa[i] = a * (j.dphi * st.up * st.up + j.phi * upp);
        traj.lambda[i] = std::abs(st.up) < 1.0 - kLambdaGuard ? lambda_of(st)
                                                              : std::numeric_limits<double>::quiet_NaN();
        traj.theta[i] = meridian_angle(st);
        traj.drift[i] = st.up * st.up + st.vp * st.vp * j.phi * j.phi - 1.0;
        traj.embedded[i] = Vec3(j.phi * std::cos(st.v), j.phi * std::sin(st.v), j.psi);
    }
    traj.f = total_curvature(traj);
}

namespace detail {

using Vec4 = std::array<double, 4>;

inline Vec4 eval_rhs(const Profile& p, SolitonParams par, const Vec4& y, StepStats& stats)
{
    ++stats.rhs_evals;
    const StateDerivative d = rhs(p, par, SolitonState{0.0, y[0], y[1], y[2], y[3]});
    return {d.du, d.dv, d.dup, d.dvp};
}

inline Vec4 axpy(const Vec4& y, double h, std::initializer_list<std::pair<double, const Vec4*>> terms)
{
    Vec4 out = y;
    for (const auto& [c, k] : terms)
        for (int i = 0; i < 4; ++i)
            out[i] += h * c * (*k)[i];
    return out;
}

inline Vec4 rk4_step(const Profile& p, SolitonParams par, const Vec4& y, double h, StepStats& st)
{
    const Vec4 k1 = eval_rhs(p, par, y, st);
    const Vec4 k2 = eval_rhs(p, par, axpy(y, h, {{0.5, &k1}}), st);
    const Vec4 k3 = eval_rhs(p, par, axpy(y, h, {{0.5, &k2}}), st);
    const Vec4 k4 = eval_rhs(p, par, axpy(y, h, {{1.0, &k3}}), st);
    return axpy(y, h, {{1.0 / 6, &k1}, {1.0 / 3, &k2}, {1.0 / 3, &k3}, {1.0 / 6, &k4}});
}

/// Runge-Kutta-Fehlberg 4(5) step; returns the fifth-order solution and the error vector.
inline std::pair<Vec4, Vec4> rkf45_step(const Profile& p, SolitonParams par, const Vec4& y,
                                        double h, StepStats& st)
{
    const Vec4 k1 = eval_rhs(p, par, y, st);
    const Vec4 k2 = eval_rhs(p, par, axpy(y, h, {{1.0 / 4, &k1}}), st);
    const Vec4 k3 = eval_rhs(p, par, axpy(y, h, {{3.0 / 32, &k1}, {9.0 / 32, &k2}}), st);
    const Vec4 k4 = eval_rhs(
        p, par, axpy(y, h, {{1932.0 / 2197, &k1}, {-7200.0 / 2197, &k2}, {7296.0 / 2197, &k3}}), st);
    const Vec4 k5 = eval_rhs(
        p, par,
        axpy(y, h, {{439.0 / 216, &k1}, {-8.0, &k2}, {3680.0 / 513, &k3}, {-845.0 / 4104, &k4}}), st);
    const Vec4 k6 = eval_rhs(p, par,
                             axpy(y, h,
                                  {{-8.0 / 27, &k1},
                                   {2.0, &k2},
                                   {-3544.0 / 2565, &k3},
                                   {1859.0 / 4104, &k4},
                                   {-11.0 / 40, &k5}}),
                             st);
    const Vec4 y5 = axpy(y, h,
                         {{16.0 / 135, &k1},
                          {6656.0 / 12825, &k3},
                          {28561.0 / 56430, &k4},
                          {-9.0 / 50, &k5},
                          {2.0 / 55, &k6}});
    Vec4 err{};
    // Difference of the 5th and 4th order weights.
    const double e1 = 16.0 / 135 - 25.0 / 216, e3 = 6656.0 / 12825 - 1408.0 / 2565,
                 e4 = 28561.0 / 56430 - 2197.0 / 4104, e5 = -9.0 / 50 + 1.0 / 5, e6 = 2.0 / 55;
    for (int i = 0; i < 4; ++i)
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i]);
    return {y5, err};
}

inline bool all_finite(const Vec4& y)
{
    return std::all_of(y.begin(), y.end(), [](double x) { return std::isfinite(x); });
}

/// Integrates one end from `init` (s = 0) up to arc length cfg.s_max.
inline std::vector<SolitonState> integrate_branch(const Profile& p, SolitonParams par,
                                                  const SolitonState& init,
                                                  const IntegratorConfig& cfg, Branch& branch)
{
    std::vector<SolitonState> out{init};
    Vec4 y{init.u, init.v, init.up, init.vp};
    double s = 0.0;
    double h = std::min(cfg.h, cfg.max_step);
    double lock_start = std::numeric_limits<double>::quiet_NaN();
    StepStats& stats = branch.stats;

    auto finish = [&](Termination t, std::string msg = {}) {
        branch.reason = t;
        branch.s_end = s;
        branch.message = std::move(msg);
    };

    while (s < cfg.s_max) {
        double step = std::min(h, cfg.s_max - s);
        // Absorb a round-off remainder into this step rather than leaving a sliver.
        if (cfg.s_max - s - step < 1e-6 * step)
            step = cfg.s_max - s;
        Vec4 next{};
        try {
            if (cfg.method == Method::rk4) {
                next = rk4_step(p, par, y, step, stats);
            } else {
                auto [y5, err] = rkf45_step(p, par, y, step, stats);
                double ratio = 0.0;
                for (int i = 0; i < 4; ++i) {
                    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
                    ratio = std::max(ratio, std::abs(err[i]) / scale);
                }
                if (!std::isfinite(ratio)) {
                    finish(Termination::non_finite, "non-finite error estimate");
                    return out;
                }
                const double grow = ratio == 0.0 ? 5.0 : std::clamp(cfg.safety * std::pow(ratio, -0.2), 0.2, 5.0);
                if (ratio > 1.0) {
                    ++stats.rejected;
                    h = step * grow;
                    if (h < cfg.min_step)
                        throw StepSizeUnderflow("step " + std::to_string(h) + " at s = "
                                                + std::to_string(s));
                    continue;
                }
                next = y5;
                h = std::min(step * grow, cfg.max_step);
            }
        } catch (const DomainError& e) {
            // A stage left the usable domain: shrink towards the boundary.
            if (cfg.method == Method::rk4 || step * 0.25 < cfg.min_step) {
                finish(Termination::domain_exit, e.what());
                return out;
            }
            ++stats.rejected;
            h = step * 0.25;
            continue;
        } catch (const NonFinite& e) {
            finish(Termination::non_finite, e.what());
            return out;
        }

        if (!all_finite(next)) {
            finish(Termination::non_finite, "non-finite state");
            return out;
        }
        if (!p.domain().contains(next[0])) {
            if (cfg.method == Method::rk4 || step * 0.25 < cfg.min_step) {
                finish(Termination::domain_exit, "left the profile domain");
                return out;
            }
            h = step * 0.25;
            ++stats.rejected;
            continue;
        }
        const ProfileJet j = p.jet(next[0]);
        if (cfg.renormalize) {
            const double norm = std::sqrt(next[2] * next[2] + next[3] * next[3] * j.phi * j.phi);
            next[2] /= norm;
            next[3] /= norm;
        }

        s = (step == cfg.s_max - s) ? cfg.s_max : s + step;
        y = next;
        ++stats.accepted;
        stats.min_step = std::min(stats.min_step, step);
        stats.max_step = std::max(stats.max_step, step);
        out.push_back(SolitonState{s, y[0], y[1], y[2], y[3]});

        const EventConfig& ev = cfg.events;
        if (ev.asymptote_lock) {
            const bool near = std::abs(y[2]) < ev.lock_eps && std::abs(j.dphi) < ev.lock_eps;
            if (!near)
                lock_start = std::numeric_limits<double>::quiet_NaN();
            else if (std::isnan(lock_start))
                lock_start = s;
            if (near && s - lock_start >= ev.lock_window) {
                finish(Termination::asymptote_lock);
                return out;
            }
        }
        if (ev.escape_u && std::abs(y[0]) > *ev.escape_u && y[0] * y[2] > 0) {
            finish(Termination::escaped);
            return out;
        }
    }
    finish(Termination::completed);
    return out;
}

} // namespace detail

/**
 * Integrates the soliton system from `init` over s in [0, s_max], and also
 * over [-s_max, 0] when cfg.bidirectional is set. The backward end uses the
 * reversal symmetry of the system: (u', v') -> (-u', -v') maps solutions with
 * rotation speed a onto solutions with the same a traversed backwards.
 */
inline Trajectory integrate(const Profile& p, SolitonParams par, const SolitonState& init,
                            const IntegratorConfig& cfg)
{
    if (!p.unit_speed())
        throw NotUnitSpeed("integrate needs an arc-length profile, got '" + p.name() + "'");
    if (!(cfg.s_max > 0))
        throw InputError("s_max must be positive");
    if (!(cfg.h > 0) || !(cfg.max_step > 0) || !(cfg.min_step > 0))
        throw InputError("step sizes must be positive");
    if (!std::isfinite(par.a))
        throw InputError("rotation speed a must be finite");
    const ProfileJet j0 = detail::soliton_jet(p, init.u);
    const double unit = init.up * init.up + init.vp * init.vp * j0.phi * j0.phi - 1.0;
    if (!(std::abs(unit) <= 1e-12))
        throw InputError("initial state violates the unit-speed constraint by "
                         + std::to_string(unit));

    Trajectory traj;
    traj.params = par;
    traj.profile_name = p.name();
    traj.bidirectional = cfg.bidirectional;

    SolitonState start = init;
    start.s = 0.0;
    std::vector<SolitonState> fwd = detail::integrate_branch(p, par, start, cfg, traj.forward);

    if (cfg.bidirectional) {
        SolitonState flipped = start;
        flipped.up = -flipped.up;
        flipped.vp = -flipped.vp;
        std::vector<SolitonState> bwd = detail::integrate_branch(p, par, flipped, cfg, traj.backward);
        traj.backward.s_end = -traj.backward.s_end;
        traj.samples.reserve(bwd.size() + fwd.size() - 1);
        for (std::size_t i = bwd.size(); i-- > 1;) {
            SolitonState st = bwd[i];
            st.s = -st.s;
            st.up = -st.up;
            st.vp = -st.vp;
            traj.samples.push_back(st);
        }
        traj.origin = traj.samples.size();
    }
    traj.samples.insert(traj.samples.end(), fwd.begin(), fwd.end());
    compute_diagnostics(p, traj);
    return traj;
}

/// The curve R(a t) Phi at flow time t, as rotated embedded samples.
inline std::vector<Vec3> soliton_at_time(const Trajectory& traj, SolitonParams par, double t)
{
    std::vector<Vec3> out;
    out.reserve(traj.embedded.size());
    for (const Vec3& x : traj.embedded)
        out.push_back(rotate_z(x, par.a * t));
    return out;
}

} // namespace rotsol
