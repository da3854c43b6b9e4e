#pragma once

// Explicit discrete curve shortening flow in the (u, v) chart, used to check
// that a soliton really evolves by the rotation R(a t).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rotsol/errors.hpp"
#include "rotsol/integrator.hpp"
#include "rotsol/interp.hpp"
#include "rotsol/soliton.hpp"
#include "rotsol/surface.hpp"

namespace rotsol {

/// Fraction of (min edge)^2 allowed as explicit time step.
inline constexpr double kStabilityFactor = 0.4;

struct ChartPoint
{
    double u = 0.0;
    double v = 0.0;  // unwrapped along the curve
};

struct PolyCurve
{
    std::vector<ChartPoint> vertices;
    bool closed = false;
    double t = 0.0;

    std::size_t size() const { return vertices.size(); }
};

namespace detail {

/// Chart difference b - a; u modulo the profile period, v modulo 2 pi.
inline ChartPoint chart_delta(const Profile& p, const ChartPoint& a, const ChartPoint& b)
{
    double du = b.u - a.u;
    if (p.period())
        du = std::remainder(du, *p.period());
    return {du, std::remainder(b.v - a.v, 2 * std::numbers::pi)};
}

inline Vec3 embed_unchecked(const Profile& p, const ChartPoint& c)
{
    const ProfileJet j = p.jet_unchecked(c.u);
    return {j.phi * std::cos(c.v), j.phi * std::sin(c.v), j.psi};
}

/// Chord lengths of the edges i -> i+1 (and last -> first when closed).
inline std::vector<double> edge_lengths(const Profile& p, const PolyCurve& c)
{
    const std::size_t n = c.size();
    const std::size_t m = c.closed ? n : n - 1;
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i)
        out[i] = (embed_unchecked(p, c.vertices[(i + 1) % n]) - embed_unchecked(p, c.vertices[i])).norm();
    return out;
}

/// First and second derivative at x = 0 of the parabola through (xa, fa), (0, 0), (xb, fb).
inline std::pair<double, double> parabola_derivs(double xa, double fa, double xb, double fb)
{
    // Lagrange form with nodes xa, 0, xb, f(0) = 0.
    const double d1 = fa * (-xb) / (xa * (xa - xb)) + fb * (-xa) / (xb * (xb - xa));
    const double d2 = 2 * (fa / (xa * (xa - xb)) + fb / (xb * (xb - xa)));
    return {d1, d2};
}

struct LocalDerivs
{
    double up, vp, upp, vpp;
};

/// Derivatives of (u, v) with respect to chord length at vertex i.
inline LocalDerivs local_derivs(const Profile& p, const PolyCurve& c, std::size_t i)
{
    const std::size_t n = c.size();
    if (n < 3)
        throw DegenerateEdge("a curve needs at least 3 vertices");
    std::size_t ia, ib;
    bool one_sided = false;
    if (c.closed) {
        ia = (i + n - 1) % n;
        ib = (i + 1) % n;
    } else if (i == 0) {
        ia = 1;
        ib = 2;
        one_sided = true;
    } else if (i == n - 1) {
        ia = n - 2;
        ib = n - 3;
        one_sided = true;
    } else {
        ia = i - 1;
        ib = i + 1;
    }
    const ChartPoint& ci = c.vertices[i];
    const Vec3 xi = embed_unchecked(p, ci);
    const double la = (embed_unchecked(p, c.vertices[ia]) - xi).norm();
    const double lb = (embed_unchecked(p, c.vertices[ib]) - xi).norm();
    if (!(la > 1e-10) || !(lb > 1e-10))
        throw DegenerateEdge("edge shorter than 1e-10 at vertex " + std::to_string(i));
    double xa, xb;
    if (!one_sided) {
        xa = -la;
        xb = lb;
    } else {
        const double lab = (embed_unchecked(p, c.vertices[ib]) - embed_unchecked(p, c.vertices[ia])).norm();
        // Both neighbours lie on the same side; orient so the curve runs forward.
        xa = la;
        xb = la + lab;
        if (i == n - 1) {
            xa = -xa;
            xb = -xb;
        }
    }
    const ChartPoint da = chart_delta(p, ci, c.vertices[ia]);
    const ChartPoint db = chart_delta(p, ci, c.vertices[ib]);
    const auto [up, upp] = parabola_derivs(xa, da.u, xb, db.u);
    const auto [vp, vpp] = parabola_derivs(xa, da.v, xb, db.v);
    return {up, vp, upp, vpp};
}

} // namespace detail

/// Geodesic curvature at vertex i from finite differences along chord length.
inline double discrete_kappa(const Profile& p, const PolyCurve& c, std::size_t i)
{
    if (i >= c.size())
        throw InputError("vertex index out of range");
    const detail::LocalDerivs d = detail::local_derivs(p, c, i);
    const ProfileJet j = p.jet(c.vertices[i].u);
    return (-d.upp * d.vp + d.vpp * d.up) * j.phi + d.vp * (1.0 + d.up * d.up) * j.dphi;
}

enum class ResampleMode
{
    monotone,  // Fritsch-Carlson limited slopes
    hermite    // cubic Hermite with three-point parabolic slopes
};

/// Redistributes vertices uniformly in chord length, keeping the first vertex (and the last when open).
inline PolyCurve resample_uniform(const Profile& p, const PolyCurve& c,
                                  ResampleMode mode = ResampleMode::monotone)
{
    const std::size_t n = c.size();
    // Unwrapped chart coordinates along the curve.
    std::vector<ChartPoint> pts{c.vertices.front()};
    for (std::size_t i = 1; i < n; ++i) {
        const ChartPoint d = detail::chart_delta(p, c.vertices[i - 1], c.vertices[i]);
        pts.push_back({pts.back().u + d.u, pts.back().v + d.v});
    }
    std::vector<double> len = detail::edge_lengths(p, c);
    std::vector<double> sigma{0.0};
    for (std::size_t i = 0; i + 1 < n; ++i)
        sigma.push_back(sigma.back() + len[i]);

    std::size_t ghost = 0;
    double total = sigma.back();
    if (c.closed) {
        // Periodic extension by three vertices on each side.
        const ChartPoint close = detail::chart_delta(p, c.vertices.back(), c.vertices.front());
        const ChartPoint shift{pts.back().u + close.u - pts.front().u, pts.back().v + close.v - pts.front().v};
        total = sigma.back() + len.back();
        ghost = std::min<std::size_t>(3, n - 1);
        std::vector<ChartPoint> ext;
        std::vector<double> es;
        for (std::size_t k = n - ghost; k < n; ++k) {
            ext.push_back({pts[k].u - shift.u, pts[k].v - shift.v});
            es.push_back(sigma[k] - total);
        }
        for (std::size_t k = 0; k < n; ++k) {
            ext.push_back(pts[k]);
            es.push_back(sigma[k]);
        }
        for (std::size_t k = 0; k < ghost; ++k) {
            ext.push_back({pts[k].u + shift.u, pts[k].v + shift.v});
            es.push_back(sigma[k] + total);
        }
        pts = std::move(ext);
        sigma = std::move(es);
    }
    std::vector<double> us, vs;
    for (const ChartPoint& q : pts) {
        us.push_back(q.u);
        vs.push_back(q.v);
    }
    const bool mono = mode == ResampleMode::monotone;
    const HermiteInterpolant iu(sigma, us, mono), iv(sigma, vs, mono);

    PolyCurve out;
    out.closed = c.closed;
    out.t = c.t;
    out.vertices.resize(n);
    const double step = c.closed ? total / static_cast<double>(n) : total / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        const double target = step * static_cast<double>(j);
        out.vertices[j] = {iu(target), iv(target)};
    }
    out.vertices.front() = c.vertices.front();
    if (!c.closed)
        out.vertices.back() = {pts[ghost + n - 1].u, pts[ghost + n - 1].v};
    return out;
}

/**
 * One explicit step of the curve shortening flow: each vertex moves by
 * dt * kappa * eta in the chart, with eta = -v' phi X_u/|X_u| + u' X_v/phi,
 * i.e. du = -dt kappa v' phi, dv = dt kappa u' / phi. Open-curve endpoints
 * stay fixed. The curve is then resampled to uniform chord length.
 */
inline PolyCurve csf_step(const Profile& p, const PolyCurve& c, double dt,
                          ResampleMode mode = ResampleMode::monotone)
{
    if (!(dt > 0))
        throw InputError("dt must be positive");
    if (c.size() < 3)
        throw DegenerateEdge("a curve needs at least 3 vertices");
    const std::vector<double> len = detail::edge_lengths(p, c);
    const double min_edge = *std::min_element(len.begin(), len.end());
    if (dt > kStabilityFactor * min_edge * min_edge)
        throw StabilityViolation("dt = " + std::to_string(dt) + " exceeds 0.4 * (min edge)^2 = "
                                 + std::to_string(kStabilityFactor * min_edge * min_edge));
    const std::size_t n = c.size();
    PolyCurve moved = c;
    moved.t = c.t + dt;
    for (std::size_t i = 0; i < n; ++i) {
        if (!c.closed && (i == 0 || i == n - 1))
            continue;
        const detail::LocalDerivs d = detail::local_derivs(p, c, i);
        const ProfileJet j = p.jet(c.vertices[i].u);
        const double kappa = (-d.upp * d.vp + d.vpp * d.up) * j.phi + d.vp * (1.0 + d.up * d.up) * j.dphi;
        ChartPoint& q = moved.vertices[i];
        q.u += -dt * kappa * d.vp * j.phi;
        q.v += dt * kappa * d.up / j.phi;
        if (!p.domain().contains(q.u) || !(p.jet_unchecked(q.u).phi > kDomainMargin))
            throw DomainExit("vertex " + std::to_string(i) + " left the profile domain");
    }
    return resample_uniform(p, moved, mode);
}

/// Samples a trajectory at uniform arc-length spacing as an open polygon.
inline PolyCurve to_polycurve(const Trajectory& traj, double spacing)
{
    if (traj.size() < 2 || !(spacing > 0))
        throw InputError("to_polycurve needs a trajectory and a positive spacing");
    std::vector<double> s, u, v, up, vp;
    for (const SolitonState& st : traj.samples) {
        s.push_back(st.s);
        u.push_back(st.u);
        v.push_back(st.v);
        up.push_back(st.up);
        vp.push_back(st.vp);
    }
    const HermiteInterpolant iu(s, u, up), iv(s, v, vp);
    const double s0 = s.front(), s1 = s.back();
    const auto segments = static_cast<std::size_t>(std::floor((s1 - s0) / spacing));
    PolyCurve c;
    for (std::size_t k = 0; k <= segments; ++k) {
        const double x = s0 + spacing * static_cast<double>(k);
        c.vertices.push_back({iu(x), iv(x)});
    }
    return c;
}

/// Resamples a trajectory at uniform arc-length spacing, diagnostics recomputed.
inline Trajectory densify(const Profile& p, const Trajectory& traj, double spacing)
{
    std::vector<double> s, u, v, up, vp;
    for (const SolitonState& st : traj.samples) {
        s.push_back(st.s);
        u.push_back(st.u);
        v.push_back(st.v);
        up.push_back(st.up);
        vp.push_back(st.vp);
    }
    const HermiteInterpolant iu(s, u, up), iv(s, v, vp);
    Trajectory out;
    out.params = traj.params;
    out.profile_name = traj.profile_name;
    out.bidirectional = traj.bidirectional;
    const double s0 = s.front();
    const auto segments = static_cast<std::size_t>(std::floor((s.back() - s0) / spacing));
    for (std::size_t k = 0; k <= segments; ++k) {
        const double x = s0 + spacing * static_cast<double>(k);
        out.samples.push_back({x, iu(x), iv(x), iu.prime(x), iv.prime(x)});
    }
    out.origin = 0;
    compute_diagnostics(p, out);
    return out;
}

namespace detail {

inline double point_segment_distance(const Vec3& q, const Vec3& a, const Vec3& b)
{
    const Vec3 ab = b - a;
    const double len2 = ab.squaredNorm();
    double w = len2 > 0 ? (q - a).dot(ab) / len2 : 0.0;
    w = std::clamp(w, 0.0, 1.0);
    return (a + w * ab - q).norm();
}

/// Distance from q to the polyline; coarse scan of every `stride`-th vertex, then local refinement.
inline double point_polyline_distance(const Vec3& q, const std::vector<Vec3>& line, std::size_t stride = 32)
{
    const std::size_t m = line.size();
    if (m == 1)
        return (q - line[0]).norm();
    std::vector<std::pair<double, std::size_t>> coarse;
    for (std::size_t k = 0; k < m; k += stride)
        coarse.emplace_back((q - line[k]).norm(), k);
    coarse.emplace_back((q - line[m - 1]).norm(), m - 1);
    std::sort(coarse.begin(), coarse.end());
    double best = std::numeric_limits<double>::infinity();
    const std::size_t candidates = std::min<std::size_t>(4, coarse.size());
    for (std::size_t c = 0; c < candidates; ++c) {
        const std::size_t k = coarse[c].second;
        const std::size_t lo = k > 2 * stride ? k - 2 * stride : 0;
        const std::size_t hi = std::min(m - 1, k + 2 * stride);
        for (std::size_t j = lo; j < hi; ++j)
            best = std::min(best, point_segment_distance(q, line[j], line[j + 1]));
    }
    return best;
}

/// Embedded points of a cubic (chord-length) interpolant of an open polygon, `per_edge` per edge.
inline std::vector<Vec3> dense_polyline(const Profile& p, const PolyCurve& c, int per_edge,
                                        std::vector<double>* arc = nullptr)
{
    const std::size_t n = c.size();
    std::vector<double> sigma{0.0};
    std::vector<double> us{c.vertices[0].u}, vs{c.vertices[0].v};
    const std::vector<double> len = edge_lengths(p, c);
    for (std::size_t i = 1; i < n; ++i) {
        const ChartPoint d = chart_delta(p, c.vertices[i - 1], c.vertices[i]);
        us.push_back(us.back() + d.u);
        vs.push_back(vs.back() + d.v);
        sigma.push_back(sigma.back() + len[i - 1]);
    }
    const HermiteInterpolant iu(sigma, us), iv(sigma, vs);
    std::vector<Vec3> out;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (int k = 0; k < per_edge; ++k) {
            const double x = sigma[i] + (sigma[i + 1] - sigma[i]) * k / per_edge;
            out.push_back(embed_unchecked(p, {iu(x), iv(x)}));
            if (arc)
                arc->push_back(x);
        }
    }
    out.push_back(embed_unchecked(p, {us.back(), vs.back()}));
    if (arc)
        arc->push_back(sigma.back());
    return out;
}

} // namespace detail

struct DeviationOptions
{
    /// Parabolic ratio dt / h^2 used to pick the vertex spacing h from dt.
    double mesh_ratio = 0.25;
    /// Fixed vertex spacing; overrides mesh_ratio when set.
    std::optional<double> spacing;
    /// Arc length excluded at each end of the open curve.
    double trim = 4.5;
    /// Spacing of the reference soliton samples.
    double reference_spacing = 2e-3;
    /// Rotation rate multiplier of the reference (1 = matched, 2 = negative control).
    double rate_factor = 1.0;
    ResampleMode resample = ResampleMode::monotone;
};

struct DeviationResult
{
    double deviation = 0.0;
    double spacing = 0.0;
    std::size_t vertices = 0;
    std::size_t steps = 0;
};

/**
 * Evolves the sampled soliton by csf_step up to time T and returns the
 * symmetric Hausdorff distance, over the interior away from the open ends,
 * between the evolved polygon and the rotated soliton R(rate_factor a T) Phi.
 */
inline DeviationResult soliton_deviation(const Profile& p, const Trajectory& traj, SolitonParams par,
                                         double T, double dt, const DeviationOptions& opt = {})
{
    if (!(T > 0) || !(dt > 0))
        throw InputError("soliton_deviation needs T > 0 and dt > 0");
    const double steps_real = T / dt;
    const auto steps = static_cast<std::size_t>(std::llround(steps_real));
    if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * steps_real)
        throw InputError("T must be an integer multiple of dt");
    const double h = opt.spacing ? *opt.spacing : std::sqrt(dt / opt.mesh_ratio);

    DeviationResult res;
    res.spacing = h;
    res.steps = steps;
    PolyCurve curve = to_polycurve(traj, h);
    res.vertices = curve.size();
    for (std::size_t k = 0; k < steps; ++k)
        curve = csf_step(p, curve, dt, opt.resample);

    const Trajectory dense = densify(p, traj, opt.reference_spacing);
    const std::vector<Vec3> reference = soliton_at_time(dense, SolitonParams{par.a * opt.rate_factor}, T);
    const double s_lo = dense.samples.front().s + opt.trim;
    const double s_hi = dense.samples.back().s - opt.trim;
    if (!(s_lo < s_hi))
        throw InputError("trajectory too short for the trim margin");

    std::vector<double> arc;
    const int per_edge = std::max(1, static_cast<int>(std::ceil(h / opt.reference_spacing)));
    const std::vector<Vec3> evolved = detail::dense_polyline(p, curve, per_edge, &arc);
    const double total = arc.back();

    double worst = 0.0;
    for (std::size_t k = 0; k < evolved.size(); ++k) {
        if (arc[k] < opt.trim || arc[k] > total - opt.trim)
            continue;
        worst = std::max(worst, detail::point_polyline_distance(evolved[k], reference));
    }
    for (std::size_t k = 0; k < reference.size(); ++k) {
        const double s = dense.samples[k].s;
        if (s < s_lo || s > s_hi)
            continue;
        worst = std::max(worst, detail::point_polyline_distance(reference[k], evolved));
    }
    res.deviation = worst;
    return res;
}

struct ConvergenceRow
{
    double dt = 0.0;
    double spacing = 0.0;
    double deviation = std::numeric_limits<double>::quiet_NaN();
    bool ok = false;
    std::string error;
};

struct ConvergenceStudy
{
    std::vector<ConvergenceRow> rows;
    /// Least-squares slope of log(deviation) against log(dt) over the successful rows.
    std::optional<double> order;
    bool monotone = false;
};

inline std::optional<double> fitted_order(const std::vector<double>& dt, const std::vector<double>& dev)
{
    if (dt.size() != dev.size() || dt.size() < 2)
        return std::nullopt;
    double mx = 0, my = 0;
    const double n = static_cast<double>(dt.size());
    for (std::size_t i = 0; i < dt.size(); ++i) {
        if (!(dt[i] > 0) || !(dev[i] > 0))
            return std::nullopt;
        mx += std::log(dt[i]) / n;
        my += std::log(dev[i]) / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < dt.size(); ++i) {
        const double x = std::log(dt[i]) - mx;
        sxy += x * (std::log(dev[i]) - my);
        sxx += x * x;
    }
    if (!(sxx > 0))
        return std::nullopt;
    return sxy / sxx;
}

/// soliton_deviation for each dt; failures (e.g. StabilityViolation) mark the row.
inline ConvergenceStudy convergence_study(const Profile& p, const Trajectory& traj, SolitonParams par,
                                          double T, const std::vector<double>& dts,
                                          const DeviationOptions& opt = {})
{
    ConvergenceStudy out;
    std::vector<double> xs, ys;
    for (double dt : dts) {
        ConvergenceRow row;
        row.dt = dt;
        try {
            const DeviationResult r = soliton_deviation(p, traj, par, T, dt, opt);
            row.spacing = r.spacing;
            row.deviation = r.deviation;
            row.ok = true;
            xs.push_back(dt);
            ys.push_back(r.deviation);
        } catch (const Error& e) {
            row.error = e.what();
        }
        out.rows.push_back(std::move(row));
    }
    out.order = fitted_order(xs, ys);
    // Deviations ordered by decreasing dt must decrease.
    std::vector<std::pair<double, double>> ok;
    for (std::size_t i = 0; i < xs.size(); ++i)
        ok.emplace_back(xs[i], ys[i]);
    std::sort(ok.begin(), ok.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    out.monotone = ok.size() >= 2;
    for (std::size_t i = 1; i < ok.size(); ++i)
        out.monotone = out.monotone && ok[i].second < ok[i - 1].second;
    return out;
}

} // namespace rotsol
