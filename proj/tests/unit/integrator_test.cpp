#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "rotsol/integrator.hpp"

using namespace rotsol;
using std::numbers::pi;

namespace {

IntegratorConfig adaptive(double s_max, bool both = false)
{
    IntegratorConfig c;
    c.s_max = s_max;
    c.bidirectional = both;
    c.events.asymptote_lock = false;
    return c;
}

IntegratorConfig fixed(double h, double s_max)
{
    IntegratorConfig c;
    c.method = Method::rk4;
    c.h = h;
    c.max_step = h;
    c.s_max = s_max;
    c.events.asymptote_lock = false;
    return c;
}

SolitonState torus_state(double u, double up, double vp)
{
    return normalize_initial(profiles::torus(), u, 0.3, up, vp);
}

// Composite Simpson rule of kappa^2 from a fixed-step run with an even number of steps.
double simpson_f(const Trajectory& t)
{
    const std::size_t n = t.size() - 1;
    const double h = t.samples[1].s - t.samples[0].s;
    double acc = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        acc += w * t.kappa[i] * t.kappa[i];
    }
    return acc * h / 3;
}

} // namespace

TEST(Integrate, OuterEquatorGeodesicStaysPut)
{
    const Profile p = profiles::torus();
    const Trajectory t = integrate(p, {0.0}, {0, 0, 0, 0, 1.0 / 3}, adaptive(50));
    for (const SolitonState& st : t.samples) {
        EXPECT_EQ(st.u, 0.0);
        EXPECT_EQ(st.up, 0.0);
        EXPECT_NEAR(st.v, st.s / 3, 1e-12 * (1 + st.s));
    }
    for (double f : t.f)
        EXPECT_EQ(f, 0.0);
}

TEST(Integrate, SamplesStrictlyIncreaseAndOriginIsZero)
{
    const Trajectory t = integrate(profiles::torus(), {0.5}, torus_state(pi / 4, 0, 1), adaptive(30, true));
    ASSERT_TRUE(t.bidirectional);
    for (std::size_t i = 1; i < t.size(); ++i)
        EXPECT_LT(t.samples[i - 1].s, t.samples[i].s);
    EXPECT_EQ(t.samples[t.origin].s, 0.0);
    EXPECT_EQ(t.f[t.origin], 0.0);
    EXPECT_NEAR(t.samples.front().s, -30, 1e-12);
    EXPECT_NEAR(t.samples.back().s, 30, 1e-12);
}

TEST(Integrate, UnitSpeedDriftBelowTolerance)
{
    const Profile p = profiles::torus();
    for (double a : {0.0, 0.5, 2.0, -0.1, 10.0})
        for (const SolitonState& init : {torus_state(pi / 4, 0, 1), torus_state(pi, 1, 1), torus_state(0.3, -1, 2)}) {
            IntegratorConfig c = adaptive(100);
            c.abs_tol = c.rel_tol = 1e-11;
            const Trajectory t = integrate(p, {a}, init, c);
            double worst = 0;
            for (double d : t.drift)
                worst = std::max(worst, std::abs(d));
            EXPECT_LE(worst, 1e-8) << "a=" << a;
        }
}

TEST(Integrate, KappaConsistencyWithRenormalization)
{
    const Profile p = profiles::torus();
    IntegratorConfig cfg = adaptive(100, true);
    cfg.renormalize = true;
    for (double a : {0.5, 2.0, 10.0}) {
        const Trajectory t = integrate(p, {a}, torus_state(pi / 4, 0, 1), cfg);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const StateDerivative d = rhs(p, {a}, t.samples[i]);
            EXPECT_NEAR(kappa_darboux(p, t.samples[i], d.dup, d.dvp), t.kappa[i], 1e-10);
        }
    }
}

TEST(Integrate, ClairautDefectLawByFiniteDifferences)
{
    // d/ds (phi^2 v') = a phi^2 u'^2, checked with five-point central differences at step 1e-3.
    const Profile p = profiles::torus();
    const double h = 1e-3;
    for (double a : {0.0, 0.5, -2.0}) {
        const Trajectory t = integrate(p, {a}, torus_state(pi / 4, 0.4, 1), fixed(h, 10));
        ASSERT_EQ(t.size(), 10001u);
        auto c = [&](std::size_t i) { return std::pow(p.phi(t.samples[i].u), 2) * t.samples[i].vp; };
        double worst = 0;
        for (std::size_t i = 2; i + 2 < t.size(); ++i) {
            const double lhs = (c(i - 2) - 8 * c(i - 1) + 8 * c(i + 1) - c(i + 2)) / (12 * h);
            const SolitonState& st = t.samples[i];
            worst = std::max(worst, std::abs(lhs - a * std::pow(p.phi(st.u), 2) * st.up * st.up));
        }
        EXPECT_LE(worst, 1e-6) << "a=" << a;
    }
}

TEST(Integrate, GeodesicClairautDrift)
{
    const Profile p = profiles::torus();
    const SolitonState init = torus_state(0.7, 0.5, 0.2);
    const double c0 = std::pow(p.phi(init.u), 2) * init.vp;
    const Trajectory t = integrate(p, {0.0}, init, adaptive(100));
    for (const SolitonState& st : t.samples)
        EXPECT_NEAR(std::pow(p.phi(st.u), 2) * st.vp, c0, 1e-8);
}

TEST(Integrate, BackwardBranchRetracesForward)
{
    const Profile p = profiles::torus();
    // The forward end is attracted to the equator, so the return run amplifies errors; hence the tight tolerance.
    const SolitonState init = torus_state(1.0, 0.3, 0.5);
    IntegratorConfig c = adaptive(3);
    c.abs_tol = c.rel_tol = 1e-13;
    const Trajectory fwd = integrate(p, {0.8}, init, c);
    const SolitonState& e = fwd.samples.back();
    const SolitonState end = normalize_initial(p, e.u, e.v, -e.up, -e.vp);
    const Trajectory back = integrate(p, {0.8}, end, c);
    EXPECT_NEAR(back.samples.back().u, init.u, 1e-8);
    EXPECT_NEAR(back.samples.back().v, init.v, 1e-8);
    EXPECT_NEAR(back.samples.back().up, -init.up, 1e-8);
    EXPECT_NEAR(back.samples.back().vp, -init.vp, 1e-8);
}

TEST(Integrate, BidirectionalMatchesSeparateRuns)
{
    const Profile p = profiles::torus();
    const SolitonState init = torus_state(1.0, 0.3, 0.5);
    const Trajectory both = integrate(p, {0.8}, init, adaptive(5, true));
    SolitonState flipped = init;
    flipped.up = -init.up;
    flipped.vp = -init.vp;
    const Trajectory back = integrate(p, {0.8}, flipped, adaptive(5));
    EXPECT_EQ(both.samples.front().u, back.samples.back().u);
    EXPECT_EQ(both.samples.front().up, -back.samples.back().up);
    EXPECT_EQ(both.samples.front().s, -back.samples.back().s);
}

TEST(Integrate, Rk4SelfConvergenceRatio)
{
    const Profile p = profiles::torus();
    const SolitonState init = torus_state(pi / 4, 0, 1);
    IntegratorConfig ref = adaptive(10);
    ref.abs_tol = ref.rel_tol = 1e-12;
    ref.max_step = 0.01;
    const SolitonState r = integrate(p, {0.5}, init, ref).samples.back();
    auto err = [&](double h) {
        const SolitonState e = integrate(p, {0.5}, init, fixed(h, 10)).samples.back();
        return std::max({std::abs(e.u - r.u), std::abs(e.v - r.v), std::abs(e.up - r.up), std::abs(e.vp - r.vp)});
    };
    const double ratio = err(0.1) / err(0.05);
    EXPECT_GE(ratio, 12.0);
    EXPECT_LE(ratio, 20.0);
}

TEST(TotalCurvature, GeodesicIsZero)
{
    const Trajectory t = integrate(profiles::torus(), {0.0}, torus_state(1, 1, 1), adaptive(20, true));
    for (double f : t.f)
        EXPECT_EQ(f, 0.0);
}

TEST(TotalCurvature, ConstantCurvatureSynthetic)
{
    Trajectory t;
    const double c = 0.7;
    for (int i = 0; i <= 37; ++i) {
        t.samples.push_back({0.13 * i * i / 37.0 + 0.1 * i, 0, 0, 0, 0});
        t.kappa.push_back(c);
    }
    const std::vector<double> f = total_curvature(t);
    EXPECT_NEAR(f.back(), c * c * t.samples.back().s, 1e-13);
    for (std::size_t i = 1; i < f.size(); ++i)
        EXPECT_GE(f[i], f[i - 1]);
}

TEST(TotalCurvature, AgreesWithSimpsonOracle)
{
    const Profile p = profiles::torus();
    const SolitonState init = torus_state(pi / 4, 0, 1);
    IntegratorConfig cfg = adaptive(60);
    const Trajectory t = integrate(p, {0.5}, init, cfg);
    const Trajectory fine = integrate(p, {0.5}, init, fixed(5e-3, 60));
    EXPECT_NEAR(t.f.back(), simpson_f(fine), 1e-6);
    const Trajectory finer = integrate(p, {0.5}, init, fixed(2.5e-3, 60));
    EXPECT_NEAR(simpson_f(fine), simpson_f(finer), 1e-8);
}

TEST(TotalCurvature, NonDecreasing)
{
    for (double a : {0.5, -0.5, 10.0}) {
        const Trajectory t = integrate(profiles::torus(), {a}, torus_state(2.0, 1, 1), adaptive(50, true));
        for (std::size_t i = 1; i < t.f.size(); ++i)
            EXPECT_GE(t.f[i], t.f[i - 1]);
    }
}

TEST(Integrate, InputValidation)
{
    const Profile p = profiles::torus();
    EXPECT_THROW(integrate(p, {0.5}, torus_state(0, 0, 1), adaptive(0)), InputError);
    EXPECT_THROW(integrate(p, {0.5}, {0, 0, 0, 0.5, 0.5}, adaptive(1)), InputError);
    EXPECT_THROW(integrate(p, {std::nan("")}, torus_state(0, 0, 1), adaptive(1)), InputError);
    EXPECT_THROW(integrate(profiles::torus_angular(), {0.5}, {0, 0, 0, 1, 0}, adaptive(1)), NotUnitSpeed);
}

TEST(Integrate, StepSizeUnderflow)
{
    IntegratorConfig cfg = adaptive(10);
    cfg.abs_tol = cfg.rel_tol = 1e-18;
    cfg.h = 0.1;
    cfg.min_step = 0.05;
    EXPECT_THROW(integrate(profiles::torus(), {2.0}, torus_state(1, 1, 1), cfg), StepSizeUnderflow);
}

TEST(Integrate, DomainExitIsReportedNotThrown)
{
    // A meridian of the plane runs into the axis.
    const Profile p = profiles::plane();
    const Trajectory t = integrate(p, {0.0}, {0, 1.0, 0, -1.0, 0}, adaptive(5));
    EXPECT_EQ(t.forward.reason, Termination::domain_exit);
    EXPECT_LT(t.samples.back().u, 1e-3);
    EXPECT_GT(t.samples.back().u, 0.0);
}

TEST(Integrate, AsymptoteLockOnGalleryIc)
{
    IntegratorConfig cfg = adaptive(3000, true);
    cfg.events.asymptote_lock = true;
    const Trajectory t = integrate(profiles::torus(), {0.5}, torus_state(pi / 4, 0, 1), cfg);
    EXPECT_EQ(t.forward.reason, Termination::asymptote_lock);
    EXPECT_EQ(t.backward.reason, Termination::asymptote_lock);
    EXPECT_LT(std::abs(t.samples.back().up), 1e-3);
    EXPECT_LT(std::abs(std::remainder(t.samples.back().u, 2 * pi)), 1e-3);
}

TEST(Integrate, CatenoidEndsEscape)
{
    IntegratorConfig cfg = adaptive(3000, true);
    cfg.events.escape_u = 10.0;
    const SolitonState init = normalize_initial(profiles::catenoid(), std::sinh(1.0), 1, 2 * std::cosh(1.0), 1);
    const Trajectory t = integrate(profiles::catenoid(), {1.0}, init, cfg);
    EXPECT_EQ(t.forward.reason, Termination::escaped);
    EXPECT_EQ(t.backward.reason, Termination::escaped);
    EXPECT_GT(std::abs(t.samples.back().u), 10.0);
    EXPECT_LT(t.samples.back().s, 3000.0);
}

TEST(SolitonAtTime, RotatesEmbeddedSamples)
{
    const Trajectory t = integrate(profiles::torus(), {0.5}, torus_state(pi / 4, 0, 1), adaptive(10));
    const auto same = soliton_at_time(t, {0.5}, 0.0);
    const auto still = soliton_at_time(t, {0.0}, 3.0);
    const auto turned = soliton_at_time(t, {0.5}, 1.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(same[i], t.embedded[i]);
        EXPECT_EQ(still[i], t.embedded[i]);
        EXPECT_EQ(turned[i].z(), t.embedded[i].z());
        const double before = std::atan2(t.embedded[i].y(), t.embedded[i].x());
        const double after = std::atan2(turned[i].y(), turned[i].x());
        EXPECT_NEAR(std::remainder(after - before - 0.5, 2 * pi), 0.0, 1e-12);
    }
}
