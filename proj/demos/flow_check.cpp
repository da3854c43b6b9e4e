// Evolves a sampled soliton by the discrete curve shortening flow and
// compares it with the rigidly rotated curve, at the matched rotation rate
// and at twice that rate.
//
//   demo_flow_check [dt]

#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "rotsol/rotsol.hpp"

int main(int argc, char** argv)
{
    using namespace rotsol;
    const double dt = argc > 1 ? std::atof(argv[1]) : 5e-4;
    const double a = 0.5, T = 0.5;

    const Profile torus = profiles::torus();
    IntegratorConfig cfg;
    cfg.s_max = 8;
    cfg.bidirectional = true;
    cfg.renormalize = true;
    cfg.max_step = 0.02;
    cfg.events.asymptote_lock = false;
    const Trajectory t = integrate(torus, {a}, normalize_initial(torus, std::numbers::pi / 4, 0.0, 0.0, 1.0), cfg);

    DeviationOptions wrong;
    wrong.rate_factor = 2.0;
    const DeviationResult m = soliton_deviation(torus, t, {a}, T, dt);
    const DeviationResult w = soliton_deviation(torus, t, {a}, T, dt, wrong);
    std::printf("dt %.2e, spacing %.4f, %zu vertices, %zu steps\n", dt, m.spacing, m.vertices, m.steps);
    std::printf("deviation from R(a T) curve:   %.3e\n", m.deviation);
    std::printf("deviation from R(2 a T) curve: %.3e\n", w.deviation);
}
