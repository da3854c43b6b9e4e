#pragma once

// Surfaces of revolution X(u, v) = (phi(u) cos v, phi(u) sin v, psi(u)) and
// the pointwise geometry built from the generating curve (phi, 0, psi).

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "rotsol/errors.hpp"

namespace rotsol {

using Vec3 = Eigen::Vector3d;

/// Margin kept away from points where phi vanishes (plane origin, sphere poles).
inline constexpr double kDomainMargin = 1e-6;

/// Values and first two derivatives of the generating curve at one u.
struct ProfileJet
{
    double phi = 0, dphi = 0, ddphi = 0;
    double psi = 0, dpsi = 0, ddpsi = 0;
};

/// Closed interval of the profile parameter; either end may be infinite.
struct Interval
{
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double u) const { return u >= lo && u <= hi; }
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

/**
 * Generating curve of a surface of revolution.
 *
 * A Profile is an immutable value: the evaluator is a pure function of u and
 * can be shared across threads. `domain` is the usable parameter range, with
 * any axis-touching endpoints already pulled in by kDomainMargin. `period`
 * is set when the profile is periodic in u (the torus), which lets closure
 * checks compare u modulo the period.
 */
class Profile
{
public:
    using Evaluator = std::function<ProfileJet(double)>;

    Profile(std::string name, Evaluator jet, Interval domain, bool unit_speed,
            std::optional<double> period = std::nullopt)
        : name_(std::move(name))
        , jet_(std::move(jet))
        , domain_(domain)
        , unit_speed_(unit_speed)
        , period_(period)
    {
        if (!jet_)
            throw InputError("profile '" + name_ + "' has no evaluator");
        if (!(domain_.lo < domain_.hi))
            throw InputError("profile '" + name_ + "' has an empty domain");
    }

    const std::string& name() const { return name_; }
    const Interval& domain() const { return domain_; }
    bool unit_speed() const { return unit_speed_; }
    std::optional<double> period() const { return period_; }

    /// Evaluates the profile; throws DomainError outside the usable domain.
    ProfileJet jet(double u) const
    {
        require_in_domain(u);
        return jet_(u);
    }

    /// Evaluates without the domain check (hot loops that already checked).
    ProfileJet jet_unchecked(double u) const { return jet_(u); }

    double phi(double u) const { return jet(u).phi; }
    double dphi(double u) const { return jet(u).dphi; }
    double ddphi(double u) const { return jet(u).ddphi; }
    double psi(double u) const { return jet(u).psi; }
    double dpsi(double u) const { return jet(u).dpsi; }
    double ddpsi(double u) const { return jet(u).ddpsi; }

    void require_in_domain(double u) const
    {
        if (!std::isfinite(u) || !domain_.contains(u)) {
            std::ostringstream os;
            os.precision(17);
            os << "u = " << u << " outside domain [" << domain_.lo << ", " << domain_.hi
               << "] of profile '" << name_ << "'";
            throw DomainError(os.str());
        }
    }

    /// Copy of this profile with a different usable domain.
    Profile with_domain(Interval d) const
    {
        return Profile(name_, jet_, d, unit_speed_, period_);
    }

private:
    std::string name_;
    Evaluator jet_;
    Interval domain_;
    bool unit_speed_;
    std::optional<double> period_;
};

/// Orthonormal frame {e1, e2, n} of the surface at a point.
struct Frame
{
    Vec3 e1, e2, n;
};

struct MetricCoeffs
{
    double g_uu = 0;
    double g_vv = 0;
};

inline Vec3 embed(const Profile& p, double u, double v)
{
    const ProfileJet j = p.jet(u);
    return {j.phi * std::cos(v), j.phi * std::sin(v), j.psi};
}

inline MetricCoeffs metric_coeffs(const Profile& p, double u)
{
    const ProfileJet j = p.jet(u);
    return {j.dphi * j.dphi + j.dpsi * j.dpsi, j.phi * j.phi};
}

/// Frame e1 = X_u, e2 = X_v / phi, n = e1 x e2 of an arc-length profile.
inline Frame frame_at(const Profile& p, double u, double v)
{
    if (!p.unit_speed())
        throw NotUnitSpeed("frame_at needs an arc-length profile, got '" + p.name() + "'");
    const ProfileJet j = p.jet(u);
    const double c = std::cos(v), s = std::sin(v);
    return {Vec3(j.dphi * c, j.dphi * s, j.dpsi), Vec3(-s, c, 0.0),
            Vec3(-j.dpsi * c, -j.dpsi * s, j.dphi)};
}

/// Gauss curvature K = -phi''/phi of an arc-length profile.
inline double gauss_curvature(const Profile& p, double u)
{
    if (!p.unit_speed())
        throw NotUnitSpeed("gauss_curvature needs an arc-length profile, got '" + p.name() + "'");
    const ProfileJet j = p.jet(u);
    return -j.ddphi / j.phi;
}

/// Step used for finite-difference derivatives of user-supplied curves.
inline double fd_step(double u)
{
    static const double base = std::pow(std::numeric_limits<double>::epsilon(), 0.2);
    return base * (std::abs(u) + 1.0);
}

/// Profile from phi and psi alone; derivatives by 4th-order central differences.
inline Profile from_functions(std::string name, std::function<double(double)> phi,
                              std::function<double(double)> psi, Interval domain,
                              bool unit_speed = false,
                              std::optional<double> period = std::nullopt)
{
    auto d1 = [](const std::function<double(double)>& f, double u, double h) {
        return (f(u - 2 * h) - 8 * f(u - h) + 8 * f(u + h) - f(u + 2 * h)) / (12 * h);
    };
    auto d2 = [](const std::function<double(double)>& f, double u, double h) {
        return (-f(u - 2 * h) + 16 * f(u - h) - 30 * f(u) + 16 * f(u + h) - f(u + 2 * h))
               / (12 * h * h);
    };
    Profile::Evaluator jet = [phi = std::move(phi), psi = std::move(psi), d1, d2](double u) {
        const double h = fd_step(u);
        return ProfileJet{phi(u), d1(phi, u, h), d2(phi, u, h),
                          psi(u), d1(psi, u, h), d2(psi, u, h)};
    };
    return Profile(std::move(name), std::move(jet), domain, unit_speed, period);
}

namespace profiles {

inline void require_torus_radii(double R, double r)
{
    if (!(r > 0 && r < R))
        throw InputError("torus radii need 0 < r < R");
}

/// Torus in arc-length form: phi = R + r cos(t/r), psi = r sin(t/r).
inline Profile torus(double R = 2.0, double r = 1.0)
{
    require_torus_radii(R, r);
    auto jet = [R, r](double t) {
        const double c = std::cos(t / r), s = std::sin(t / r);
        return ProfileJet{R + r * c, -s, -c / r, r * s, c, -s / r};
    };
    return Profile("torus", jet, Interval{}, true, 2 * std::numbers::pi * r);
}

/// Torus parametrised by the tube angle: phi = R + r cos u, psi = r sin u.
inline Profile torus_angular(double R = 2.0, double r = 1.0)
{
    require_torus_radii(R, r);
    auto jet = [R, r](double u) {
        const double c = std::cos(u), s = std::sin(u);
        return ProfileJet{R + r * c, -r * s, -r * c, r * s, r * c, -r * s};
    };
    return Profile("torus_angular", jet, Interval{}, false, 2 * std::numbers::pi);
}

/// The plane z = 0 seen as a surface of revolution: phi = u, psi = 0.
inline Profile plane(double margin = kDomainMargin)
{
    auto jet = [](double u) { return ProfileJet{u, 1.0, 0.0, 0.0, 0.0, 0.0}; };
    return Profile("plane", jet, Interval{margin, std::numeric_limits<double>::infinity()}, true);
}

/// Unit sphere: phi = sin u, psi = -cos u, poles excluded.
inline Profile sphere(double margin = kDomainMargin)
{
    auto jet = [](double u) {
        const double c = std::cos(u), s = std::sin(u);
        return ProfileJet{s, c, -s, -c, s, c};
    };
    return Profile("sphere", jet, Interval{margin, std::numbers::pi - margin}, true);
}

/// Catenoid in arc-length form: phi = sqrt(1 + t^2), psi = asinh t.
inline Profile catenoid()
{
    auto jet = [](double t) {
        const double w = 1.0 + t * t;
        const double sw = std::sqrt(w);
        const double w32 = w * sw;
        return ProfileJet{sw, t / sw, 1.0 / w32, std::asinh(t), 1.0 / sw, -t / w32};
    };
    return Profile("catenoid", jet, Interval{}, true);
}

/// Catenoid in its classical form: phi = cosh u, psi = u.
inline Profile catenoid_angular()
{
    auto jet = [](double u) {
        const double c = std::cosh(u), s = std::sinh(u);
        return ProfileJet{c, s, c, u, 1.0, 0.0};
    };
    return Profile("catenoid_angular", jet, Interval{}, false);
}

} // namespace profiles
} // namespace rotsol
