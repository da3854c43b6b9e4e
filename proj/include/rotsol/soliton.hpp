#pragma once

// Pointwise quantities of rotational solitons of the curve shortening flow:
// the second-order system for (u, v), the two expressions for the geodesic
// curvature, Lambda and the meridian angle.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rotsol/errors.hpp"
#include "rotsol/surface.hpp"

namespace rotsol {

/// States with |u'| >= 1 - kLambdaGuard are refused by Lambda.
inline constexpr double kLambdaGuard = 1e-9;

/// Rotation speed a = xi'(0) of the soliton. a = 0 gives geodesics.
struct SolitonParams
{
    double a = 0.0;
};

/// Phase point of an arc-length parametrised curve Phi(s) = X(u(s), v(s)).
struct SolitonState
{
    double s = 0.0;
    double u = 0.0;
    double v = 0.0;  // unwrapped
    double up = 0.0;
    double vp = 0.0;
};

struct StateDerivative
{
    double du = 0.0;
    double dv = 0.0;
    double dup = 0.0;
    double dvp = 0.0;
};

namespace detail {

inline ProfileJet soliton_jet(const Profile& p, double u)
{
    if (!p.unit_speed())
        throw NotUnitSpeed("soliton system needs an arc-length profile, got '" + p.name() + "'");
    const ProfileJet j = p.jet(u);
    if (!(j.phi > kDomainMargin))
        throw DomainError("phi(" + std::to_string(u) + ") = " + std::to_string(j.phi)
                          + " is too close to the axis");
    return j;
}

} // namespace detail

/**
 * Right-hand side of the soliton system
 *
 *   u'' = -a u' v' phi^2 + v'^2 phi phi_u
 *   v'' =  a u'^2 - 2 u' v' phi_u / phi
 *
 * on an arc-length profile. With a = 0 this is the geodesic system.
 */
inline StateDerivative rhs(const Profile& p, SolitonParams par, const SolitonState& st)
{
    const ProfileJet j = detail::soliton_jet(p, st.u);
    const double a = par.a;
    StateDerivative d;
    d.du = st.up;
    d.dv = st.vp;
    d.dup = -a * st.up * st.vp * j.phi * j.phi + st.vp * st.vp * j.phi * j.dphi;
    d.dvp = a * st.up * st.up - 2.0 * st.up * st.vp * j.dphi / j.phi;
    if (!std::isfinite(d.dup) || !std::isfinite(d.dvp))
        throw NonFinite("soliton right-hand side at s = " + std::to_string(st.s));
    return d;
}

/// Rescales (up0, vp0) so that u'^2 g_uu + v'^2 phi^2 = 1; s is set to 0.
inline SolitonState normalize_initial(const Profile& p, double u0, double v0, double up0,
                                      double vp0)
{
    if (up0 == 0.0 && vp0 == 0.0)
        throw ZeroTangent("initial tangent (u', v') = (0, 0)");
    const ProfileJet j = p.jet(u0);
    if (!(j.phi > kDomainMargin))
        throw DomainError("initial point u0 = " + std::to_string(u0) + " is on the axis");
    const double g_uu = j.dphi * j.dphi + j.dpsi * j.dpsi;
    const double norm = std::sqrt(g_uu * up0 * up0 + j.phi * j.phi * vp0 * vp0);
    return SolitonState{0.0, u0, v0, up0 / norm, vp0 / norm};
}

/// Geodesic curvature of a soliton, kappa = a phi u'.
inline double kappa_soliton(const Profile& p, SolitonParams par, const SolitonState& st)
{
    if (par.a == 0.0 || st.up == 0.0)
        return 0.0;
    return par.a * p.jet(st.u).phi * st.up;
}

/// Geodesic curvature <T', eta> of any arc-length curve from (u', v', u'', v'').
inline double kappa_darboux(const Profile& p, const SolitonState& st, double upp, double vpp)
{
    const ProfileJet j = p.jet(st.u);
    return (-upp * st.vp + vpp * st.up) * j.phi + st.vp * (1.0 + st.up * st.up) * j.dphi;
}

inline double lambda_of(const SolitonState& st)
{
    if (!(std::abs(st.up) < 1.0 - kLambdaGuard))
        throw NearSingular("|u'| = " + std::to_string(std::abs(st.up)) + " at s = "
                           + std::to_string(st.s));
    return st.up / std::sqrt(1.0 - st.up * st.up);
}

/// Angle between the curve and the meridians; cos(theta) = u'.
inline double meridian_angle(const SolitonState& st)
{
    return std::acos(std::clamp(st.up, -1.0, 1.0));
}

inline Vec3 rotate_z(const Vec3& x, double angle)
{
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * x.x() - s * x.y(), s * x.x() + c * x.y(), x.z()};
}

} // namespace rotsol
