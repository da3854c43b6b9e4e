#pragma once

// Profile definitions read from JSON:
//
//   {"name": "...", "kind": "builtin" | "tabulated", "params": {...},
//    "domain": [lo, hi] (null for an infinite end), "unit_speed": bool}
//
// Builtins: torus {R, r}, torus_angular {R, r}, plane, sphere, catenoid,
// catenoid_angular. Tabulated profiles give params.rows = [[u, phi, psi], ...]
// and are interpolated by natural cubic splines.

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "rotsol/errors.hpp"
#include "rotsol/interp.hpp"
#include "rotsol/reparam.hpp"
#include "rotsol/soliton.hpp"
#include "rotsol/surface.hpp"

namespace rotsol {

using json = nlohmann::json;

struct ProfileSpec
{
    std::string name = "torus";
    std::string kind = "builtin";
    json params = json::object();
    std::optional<Interval> domain;
    std::optional<bool> unit_speed;
};

inline json to_json(const ProfileSpec& s)
{
    json j{{"name", s.name}, {"kind", s.kind}, {"params", s.params}};
    if (s.domain) {
        auto end = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
        j["domain"] = json::array({end(s.domain->lo), end(s.domain->hi)});
    }
    if (s.unit_speed)
        j["unit_speed"] = *s.unit_speed;
    return j;
}

inline ProfileSpec profile_spec_from_json(const json& j)
{
    if (!j.is_object())
        throw InputError("profile: expected an object");
    ProfileSpec s;
    try {
        s.name = j.value("name", s.name);
        s.kind = j.value("kind", s.kind);
        s.params = j.value("params", json::object());
        if (j.contains("domain") && !j["domain"].is_null()) {
            const json& d = j["domain"];
            if (!d.is_array() || d.size() != 2)
                throw InputError("profile.domain: expected [lo, hi]");
            const double inf = std::numeric_limits<double>::infinity();
            s.domain = Interval{d[0].is_null() ? -inf : d[0].get<double>(),
                                d[1].is_null() ? inf : d[1].get<double>()};
            if (!(s.domain->lo < s.domain->hi))
                throw InputError("profile.domain: lo must be below hi");
        }
        if (j.contains("unit_speed"))
            s.unit_speed = j["unit_speed"].get<bool>();
    } catch (const json::exception& e) {
        throw InputError(std::string("profile: ") + e.what());
    }
    if (s.kind != "builtin" && s.kind != "tabulated")
        throw InputError("profile.kind: expected builtin or tabulated, got '" + s.kind + "'");
    return s;
}

namespace detail {

inline double param_or(const json& params, const char* key, double fallback)
{
    if (!params.contains(key))
        return fallback;
    if (!params[key].is_number())
        throw InputError(std::string("profile.params.") + key + ": expected a number");
    return params[key].get<double>();
}

inline Profile tabulated_profile(const ProfileSpec& s)
{
    if (!s.params.contains("rows") || !s.params["rows"].is_array())
        throw InputError("profile.params.rows: expected [[u, phi, psi], ...]");
    std::vector<double> u, phi, psi;
    for (const json& row : s.params["rows"]) {
        if (!row.is_array() || row.size() != 3)
            throw InputError("profile.params.rows: each row must be [u, phi, psi]");
        u.push_back(row[0].get<double>());
        phi.push_back(row[1].get<double>());
        psi.push_back(row[2].get<double>());
    }
    for (double x : phi)
        if (!(x > 0))
            throw InputError("profile.params.rows: phi must be positive");
    auto sp_phi = std::make_shared<CubicSpline>(u, phi);
    auto sp_psi = std::make_shared<CubicSpline>(u, psi);
    Profile::Evaluator jet = [sp_phi, sp_psi](double x) {
        return ProfileJet{(*sp_phi)(x), sp_phi->prime(x), sp_phi->double_prime(x),
                          (*sp_psi)(x), sp_psi->prime(x), sp_psi->double_prime(x)};
    };
    Interval dom{u.front(), u.back()};
    if (s.domain)
        dom = Interval{std::max(dom.lo, s.domain->lo), std::min(dom.hi, s.domain->hi)};
    return Profile(s.name, std::move(jet), dom, s.unit_speed.value_or(false));
}

} // namespace detail

/// The profile exactly as defined, in its own parameter.
inline Profile make_profile(const ProfileSpec& s)
{
    if (s.kind == "tabulated")
        return detail::tabulated_profile(s);
    const double R = detail::param_or(s.params, "R", 2.0);
    const double r = detail::param_or(s.params, "r", 1.0);
    const double margin = detail::param_or(s.params, "margin", kDomainMargin);
    Profile p = [&]() -> Profile {
        if (s.name == "torus")
            return profiles::torus(R, r);
        if (s.name == "torus_angular")
            return profiles::torus_angular(R, r);
        if (s.name == "plane")
            return profiles::plane(margin);
        if (s.name == "sphere")
            return profiles::sphere(margin);
        if (s.name == "catenoid")
            return profiles::catenoid();
        if (s.name == "catenoid_angular")
            return profiles::catenoid_angular();
        throw InputError("profile.name: unknown builtin '" + s.name + "'");
    }();
    if (s.domain)
        p = p.with_domain(*s.domain);
    return p;
}

/// The arc-length profile on which solitons are integrated. Builtins with a
/// closed-form arc-length version use it; others are reparametrised numerically.
inline Profile soliton_profile(const ProfileSpec& s, double tol = 1e-12)
{
    if (s.kind == "builtin" && !s.domain) {
        if (s.name == "torus_angular")
            return profiles::torus(detail::param_or(s.params, "R", 2.0), detail::param_or(s.params, "r", 1.0));
        if (s.name == "catenoid_angular")
            return profiles::catenoid();
    }
    return arclength_reparametrize(make_profile(s), tol);
}

/// Initial point and tangent in some chart of the profile.
struct ChartState
{
    double u = 0.0;
    double v = 0.0;
    double up = 0.0;
    double vp = 0.0;
};

/**
 * Maps (u, u') given in the profile's own parameter to the arc-length
 * parameter t used by soliton_profile: t = S(u), t' = |X_u|(u) u'. v and v'
 * are unchanged.
 */
inline ChartState to_arclength_chart(const ProfileSpec& s, const ChartState& c)
{
    if (s.kind == "builtin" && !s.domain) {
        if (s.name == "torus_angular") {
            const double r = detail::param_or(s.params, "r", 1.0);
            return {r * c.u, c.v, r * c.up, c.vp};
        }
        if (s.name == "catenoid_angular")
            return {std::sinh(c.u), c.v, std::cosh(c.u) * c.up, c.vp};
    }
    const Profile p = make_profile(s);
    if (p.unit_speed())
        return c;
    p.require_in_domain(c.u);
    const Interval& d = p.domain();
    // Same anchor as arclength_reparametrize.
    const double anchor = d.contains(0.0) ? 0.0 : d.lo;
    auto speed = [&p](double x) { return detail::profile_speed(p.jet_unchecked(x)); };
    double err = 0;
    const double t = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(speed, anchor, c.u, 15,
                                                                                 1e-14, &err);
    return {t, c.v, speed(c.u) * c.up, c.vp};
}

} // namespace rotsol
