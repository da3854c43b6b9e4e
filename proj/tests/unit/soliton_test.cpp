#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "rotsol/soliton.hpp"

using namespace rotsol;
using std::numbers::pi;

namespace {

// Soliton system on the torus in its angular parameter theta, written out
// directly: phi = R + r cos theta.
struct AngularTorusRhs
{
    double R, r, a;
    std::pair<double, double> operator()(double th, double thp, double vp) const
    {
        const double phi = R + r * std::cos(th);
        const double vpp = a * r * r * thp * thp + 2 * thp * vp * r * std::sin(th) / phi;
        const double thpp = -vp * phi * (vp * std::sin(th) / r + a * phi * thp);
        return {thpp, vpp};
    }
};

SolitonState random_unit_state(const Profile& p, std::mt19937_64& rng, double u_lo, double u_hi)
{
    std::uniform_real_distribution<double> U(u_lo, u_hi), A(0, 2 * pi), V(-5, 5);
    const double u = U(rng), th = A(rng);
    return normalize_initial(p, u, V(rng), std::cos(th), std::sin(th));
}

} // namespace

TEST(Rhs, OuterEquatorIsFixed)
{
    const StateDerivative d = rhs(profiles::torus(), {0.5}, {0, 0, 0, 0, 1.0 / 3});
    EXPECT_EQ(d.dup, 0.0);
    EXPECT_EQ(d.dvp, 0.0);
    EXPECT_EQ(d.du, 0.0);
    EXPECT_NEAR(d.dv, 1.0 / 3, 1e-16);
}

TEST(Rhs, MeridiansAreGeodesics)
{
    for (const Profile& p : {profiles::torus(), profiles::catenoid(), profiles::sphere()})
        for (double up : {1.0, -1.0}) {
            const StateDerivative d = rhs(p, {0.0}, {0, 1.0, 0.2, up, 0.0});
            EXPECT_EQ(d.dup, 0.0);
            EXPECT_EQ(d.dvp, 0.0);
        }
}

TEST(Rhs, HandEvaluatedTorusState)
{
    const StateDerivative d = rhs(profiles::torus(), {1.0}, {0, pi / 2, 0, 0.6, 0.4});
    EXPECT_NEAR(d.dup, -1.28, 1e-14);
    EXPECT_NEAR(d.dvp, 0.6, 1e-14);
}

TEST(Rhs, AgreesWithAngularTorusSystem)
{
    std::mt19937_64 rng(23);
    for (double r : {1.0, 0.5, 1.7}) {
        const double R = 2.0 + r;
        const Profile p = profiles::torus(R, r);
        for (double a : {0.0, 0.5, -2.0, 10.0}) {
            const AngularTorusRhs ang{R, r, a};
            for (int k = 0; k < 200; ++k) {
                const SolitonState st = random_unit_state(p, rng, -10, 10);
                // t = r theta, so theta' = u'/r and theta'' = u''/r.
                const auto [thpp, vpp] = ang(st.u / r, st.up / r, st.vp);
                const StateDerivative d = rhs(p, {a}, st);
                EXPECT_NEAR(d.dup, r * thpp, 1e-12 * (1 + std::abs(a)));
                EXPECT_NEAR(d.dvp, vpp, 1e-12 * (1 + std::abs(a)));
            }
        }
    }
}

TEST(Rhs, ErrorsNearAxisAndForAngularProfiles)
{
    EXPECT_THROW(rhs(profiles::torus_angular(), {1}, {0, 0, 0, 1, 0}), NotUnitSpeed);
    EXPECT_THROW(rhs(profiles::plane(), {1}, {0, 1e-7, 0, 1, 0}), DomainError);
    EXPECT_THROW(rhs(profiles::plane(), {1}, {0, -1.0, 0, 1, 0}), DomainError);
}

TEST(Rhs, ReversalMapsSolutionsToSolutions)
{
    // s -> -s sends (u', v') to (-u', -v') and leaves (u'', v'') unchanged.
    std::mt19937_64 rng(29);
    const Profile p = profiles::torus();
    for (double a : {0.5, -3.0}) {
        for (int k = 0; k < 100; ++k) {
            const SolitonState st = random_unit_state(p, rng, -4, 4);
            SolitonState back = st;
            back.up = -st.up;
            back.vp = -st.vp;
            const StateDerivative d = rhs(p, {a}, st), e = rhs(p, {a}, back);
            EXPECT_NEAR(d.dup, e.dup, 1e-13);
            EXPECT_NEAR(d.dvp, e.dvp, 1e-13);
        }
    }
}

TEST(Normalize, Examples)
{
    const Profile t = profiles::torus();
    const SolitonState a = normalize_initial(t, pi / 4, pi / 4, 0, 1);
    EXPECT_NEAR(a.vp, 1.0 / (2 + std::sqrt(2.0) / 2), 1e-15);
    EXPECT_EQ(a.up, 0.0);
    EXPECT_EQ(a.s, 0.0);
    const SolitonState b = normalize_initial(t, 1.3, 0, 1, 0);
    EXPECT_EQ(b.up, 1.0);
    EXPECT_EQ(b.vp, 0.0);
    const SolitonState c = normalize_initial(t, pi, 0, 1, 1);
    EXPECT_NEAR(c.up, 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(c.vp, 1 / std::sqrt(2.0), 1e-15);
    EXPECT_THROW(normalize_initial(t, 0, 0, 0, 0), ZeroTangent);
}

TEST(Normalize, UsesMetricOfNonUnitProfile)
{
    const Profile p = profiles::torus_angular(2.0, 0.5);
    const SolitonState s = normalize_initial(p, 0.4, 0, 1, 1);
    const ProfileJet j = p.jet(0.4);
    EXPECT_NEAR(0.25 * s.up * s.up + j.phi * j.phi * s.vp * s.vp, 1.0, 1e-15);
}

TEST(Kappa, SolitonFormulaExamples)
{
    const Profile t = profiles::torus();
    EXPECT_EQ(kappa_soliton(t, {2.0}, {0, 0.3, 0, 0.0, 0.4}), 0.0);
    EXPECT_EQ(kappa_soliton(t, {0.0}, {0, 0.3, 0, 0.5, 0.4}), 0.0);
    EXPECT_NEAR(kappa_soliton(t, {2.0}, {0, pi / 2, 0, 0.5, 0.1}), 2.0, 1e-15);
}

TEST(Kappa, DarbouxVanishesOnGeodesicStates)
{
    const Profile t = profiles::torus();
    EXPECT_EQ(kappa_darboux(t, {0, 0.0, 0, 0.0, 1.0 / 3}, 0.0, 0.0), 0.0);
    EXPECT_EQ(kappa_darboux(t, {0, 1.1, 0, 1.0, 0.0}, 0.3, 0.0), 0.0);
}

TEST(Kappa, DarbouxEqualsSolitonCurvatureOnConstraint)
{
    std::mt19937_64 rng(31);
    for (const Profile& p : {profiles::torus(), profiles::torus(5, 2), profiles::catenoid()}) {
        for (double a : {0.5, 2.0, -0.1, 10.0}) {
            for (int k = 0; k < 300; ++k) {
                const SolitonState st = random_unit_state(p, rng, -6, 6);
                const StateDerivative d = rhs(p, {a}, st);
                EXPECT_NEAR(kappa_darboux(p, st, d.dup, d.dvp), kappa_soliton(p, {a}, st), 1e-10);
            }
        }
    }
}

TEST(Kappa, DarbouxDefectOffConstraint)
{
    // Off the unit-speed set the two expressions differ by (a phi u' - v' phi_u)(N - 1),
    // N = u'^2 + v'^2 phi^2.
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> U(-3, 3), D(-1, 1);
    const Profile p = profiles::torus();
    for (int k = 0; k < 200; ++k) {
        const SolitonState st{0, U(rng), 0, D(rng), D(rng)};
        const double a = 1.5;
        const StateDerivative d = rhs(p, {a}, st);
        const ProfileJet j = p.jet(st.u);
        const double N = st.up * st.up + st.vp * st.vp * j.phi * j.phi;
        const double expected = (a * j.phi * st.up - st.vp * j.dphi) * (N - 1);
        EXPECT_NEAR(kappa_darboux(p, st, d.dup, d.dvp) - kappa_soliton(p, {a}, st), expected, 1e-12);
    }
}

TEST(Lambda, Examples)
{
    EXPECT_EQ(lambda_of({0, 0, 0, 0.0, 0}), 0.0);
    EXPECT_NEAR(lambda_of({0, 0, 0, 1 / std::sqrt(2.0), 0}), 1.0, 1e-15);
    EXPECT_NEAR(lambda_of({0, 0, 0, -0.6, 0}), -0.75, 1e-15);
    EXPECT_THROW(lambda_of({0, 0, 0, 1.0, 0}), NearSingular);
    EXPECT_THROW(lambda_of({0, 0, 0, -(1 - 1e-10), 0}), NearSingular);
}

TEST(MeridianAngle, Examples)
{
    EXPECT_NEAR(meridian_angle({0, 0, 0, 0.0, 0}), pi / 2, 1e-15);
    EXPECT_EQ(meridian_angle({0, 0, 0, 1.0, 0}), 0.0);
    EXPECT_NEAR(meridian_angle({0, 0, 0, 0.5, 0}), pi / 3, 1e-15);
    EXPECT_EQ(meridian_angle({0, 0, 0, 1.0 + 1e-15, 0}), 0.0);
}

TEST(RotateZ, Examples)
{
    const Vec3 a = rotate_z({1, 0, 0}, pi / 2);
    EXPECT_NEAR(a.x(), 0, 1e-16);
    EXPECT_NEAR(a.y(), 1, 1e-16);
    const Vec3 x{0.3, -2, 5};
    EXPECT_EQ(rotate_z(x, 0.0), x);
    const Vec3 b = rotate_z({3, 0, 0}, 2 * pi);
    EXPECT_LE((b - Vec3{3, 0, 0}).norm(), 1e-12);
}

TEST(RotateZ, PreservesHeightAndNorm)
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> D(-5, 5);
    for (int k = 0; k < 100; ++k) {
        const Vec3 x{D(rng), D(rng), D(rng)};
        const Vec3 y = rotate_z(x, D(rng));
        EXPECT_EQ(y.z(), x.z());
        EXPECT_NEAR(y.norm(), x.norm(), 1e-13);
    }
}
