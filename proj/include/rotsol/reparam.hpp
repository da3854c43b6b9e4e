#pragma once

// Arc-length reparametrisation of a generating curve.

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <memory>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rotsol/errors.hpp"
#include "rotsol/surface.hpp"

namespace rotsol {

namespace detail {

inline double profile_speed(const ProfileJet& j)
{
    return std::hypot(j.dphi, j.dpsi);
}

/// Arc length S(u) tabulated at knots, inverted by safeguarded Newton.
struct ArcLengthTable
{
    Profile source;
    std::vector<double> u;  // knots
    std::vector<double> s;  // S(knot), S(anchor) = 0
    double period_u = 0;    // > 0 when the source is periodic
    double period_s = 0;
    double tol = 0;

    double speed(double x) const { return profile_speed(source.jet_unchecked(x)); }

    double partial(double a, double b) const
    {
        return boost::math::quadrature::gauss<double, 20>::integrate(
            [this](double x) { return speed(x); }, a, b);
    }

    /// Integral of the speed over [a, b], bisected until a Gauss and a Kronrod rule agree within tol.
    double accurate(double a, double b, double tol, int depth, double& err) const
    {
        const auto f = [this](double x) { return speed(x); };
        const double g = partial(a, b);
        const double k = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0);
        err = std::abs(g - k);
        if (err <= tol || depth == 0)
            return g;
        const double m = 0.5 * (a + b);
        double e1 = 0, e2 = 0;
        const double r = accurate(a, m, 0.5 * tol, depth - 1, e1) + accurate(m, b, 0.5 * tol, depth - 1, e2);
        err = e1 + e2;
        return r;
    }

    /// Parameter u on the source curve at arc length t.
    double invert(double t) const
    {
        double shift_u = 0;
        if (period_s > 0) {
            const double k = std::floor((t - s.front()) / period_s);
            t -= k * period_s;
            shift_u = k * period_u;
        }
        const std::size_t k = segment_of(s, t);
        double lo = u[k], hi = u[k + 1];
        double x = lo + (hi - lo) * (t - s[k]) / (s[k + 1] - s[k]);
        for (int it = 0; it < 60; ++it) {
            const double g = s[k] + partial(u[k], x) - t;
            if (g > 0)
                hi = x;
            else
                lo = x;
            const double sp = speed(x);
            double next = x - g / sp;
            if (!(next > lo && next < hi))
                next = 0.5 * (lo + hi);
            const double dx = next - x;
            x = next;
            if (std::abs(dx) * sp <= 1e-3 * tol || hi - lo <= 1e-15 * (1 + std::abs(x)))
                return x + shift_u;
        }
        throw ToleranceNotMet("arc-length inversion did not converge at t = " + std::to_string(t));
    }
};

} // namespace detail

/**
 * Reparametrises `p` by arc length. The arc length is measured from
 * u_ref = 0 when it lies in the domain, else from the lower domain end, so
 * the new parameter t satisfies t(u_ref) = 0. Periodic profiles are handled
 * on one period and extended; otherwise the domain must be bounded.
 * Profiles already flagged as unit speed are returned unchanged.
 */
inline Profile arclength_reparametrize(const Profile& p, double tol = 1e-12)
{
    if (!(tol > 0))
        throw InputError("arclength_reparametrize: tol must be positive");
    if (p.unit_speed())
        return p;

    auto table = std::make_shared<detail::ArcLengthTable>(detail::ArcLengthTable{p, {}, {}, 0, 0, tol});
    const Interval& d = p.domain();
    double lo = d.lo, hi = d.hi;
    if (p.period()) {
        table->period_u = *p.period();
        lo = d.contains(0.0) ? 0.0 : d.lo;
        hi = lo + table->period_u;
    } else if (!d.bounded()) {
        throw DomainError("arclength_reparametrize needs a bounded domain or a periodic profile");
    }
    const double anchor = (d.contains(0.0) && !p.period()) ? 0.0 : lo;

    constexpr int kSegments = 512;
    table->u.resize(kSegments + 1);
    table->s.assign(kSegments + 1, 0.0);
    for (int i = 0; i <= kSegments; ++i)
        table->u[i] = lo + (hi - lo) * i / kSegments;
    table->u.back() = hi;

    for (int i = 1; i <= kSegments; ++i) {
        double err = 0;
        const double piece = table->accurate(table->u[i - 1], table->u[i], tol / kSegments, 20, err);
        if (!std::isfinite(piece) || err > tol / kSegments) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "arc-length quadrature error %.3e exceeds %.3e on [%.17g, %.17g]", err,
                          tol / kSegments, table->u[i - 1], table->u[i]);
            throw ToleranceNotMet(buf);
        }
        table->s[i] = table->s[i - 1] + piece;
    }
    // Shift so that S(anchor) = 0.
    {
        const std::size_t k = detail::segment_of(table->u, anchor);
        const double s_anchor = table->s[k] + table->partial(table->u[k], anchor);
        for (double& v : table->s)
            v -= s_anchor;
    }
    if (p.period())
        table->period_s = table->s.back() - table->s.front();

    Interval t_domain{};
    if (!p.period())
        t_domain = Interval{table->s.front(), table->s.back()};

    Profile::Evaluator jet = [table](double t) {
        const double x = table->invert(t);
        const ProfileJet j = table->source.jet_unchecked(x);
        const double sp = detail::profile_speed(j);
        const double dsp = (j.dphi * j.ddphi + j.dpsi * j.ddpsi) / sp;
        const double sp2 = sp * sp, sp3 = sp2 * sp;
        return ProfileJet{j.phi,
                          j.dphi / sp,
                          j.ddphi / sp2 - j.dphi * dsp / sp3,
                          j.psi,
                          j.dpsi / sp,
                          j.ddpsi / sp2 - j.dpsi * dsp / sp3};
    };
    std::optional<double> period;
    if (p.period())
        period = table->period_s;
    return Profile(p.name() + "_arclength", std::move(jet), t_domain, true, period);
}

} // namespace rotsol
