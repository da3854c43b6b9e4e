// rotsol: integrate, verify and cross-check rotational solitons of the curve
// shortening flow on surfaces of revolution.
//
// Exit codes: 0 ok, 1 usage or input error, 2 numerical failure, 3 verification failure.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rotsol/rotsol.hpp"

namespace {

using namespace rotsol;

int fail(const std::exception& e)
{
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
}

int cmd_integrate(const std::string& manifest_path, const std::string& out)
{
    RunManifest m = load_manifest(manifest_path);
    if (!out.empty()) {
        m.output_dir = out;
        m = seal(m);
    }
    const RunResult r = execute_run(m);
    std::cout << "wrote " << r.directory.string() << " (" << r.trajectory.size() << " samples, forward "
              << to_string(r.trajectory.forward.reason);
    if (r.trajectory.bidirectional)
        std::cout << ", backward " << to_string(r.trajectory.backward.reason);
    std::cout << ")\n";
    for (const AsymptoteRecord& a : r.report.asymptotes)
        if (a.u_star_reduced)
            std::cout << "asymptote " << to_string(a.end) << " u*=" << fmt17(*a.u_star_reduced) << '\n';
    return r.exit_code;
}

struct GalleryRow
{
    std::string id;
    int code = exit_ok;
    std::string forward, backward, u_fwd, u_bwd, message;
    bool checks = false;
};

int cmd_gallery(const std::string& surface, const std::string& out, unsigned jobs, double R, double r,
                bool mesh)
{
    const std::vector<GalleryEntry> entries = gallery_for(surface);
    fs::create_directories(out);
    std::vector<GalleryRow> rows(entries.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t k; (k = next.fetch_add(1)) < entries.size();) {
            GalleryRow& row = rows[k];
            row.id = entries[k].id;
            try {
                RunManifest m = gallery_manifest(entries[k], (fs::path(out) / entries[k].id).string(), R, r);
                m.exports.mesh = mesh;
                const RunResult res = execute_run(seal(m));
                row.code = res.exit_code;
                row.checks = res.report.all_passed();
                row.forward = to_string(res.trajectory.forward.reason);
                row.backward = to_string(res.trajectory.backward.reason);
                row.u_fwd = row.u_bwd = "none";
                for (const AsymptoteRecord& a : res.report.asymptotes)
                    if (a.u_star_reduced)
                        (a.end == CurveEnd::forward ? row.u_fwd : row.u_bwd) = fmt17(*a.u_star_reduced);
            } catch (const std::exception& e) {
                row.code = exit_code_for(e);
                row.message = e.what();
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(entries.size())));
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < jobs; ++i)
        pool.emplace_back(worker);
    pool.clear();

    std::ostringstream table;
    table << "id,forward,backward,u_star_forward,u_star_backward,checks,exit\n";
    int code = exit_ok;
    for (const GalleryRow& row : rows) {
        table << row.id << ',' << row.forward << ',' << row.backward << ',' << row.u_fwd << ',' << row.u_bwd
              << ',' << (row.checks ? "PASS" : "FAIL") << ',' << row.code << '\n';
        if (!row.message.empty())
            std::cerr << row.id << ": " << row.message << '\n';
        code = std::max(code, row.code);
    }
    write_text(fs::path(out) / "summary.csv", table.str());
    std::cout << table.str();
    return code;
}

int cmd_verify(const std::string& manifest_path, const std::string& run_dir)
{
    if (!run_dir.empty()) {
        const std::vector<std::string> problems = check_run_dir(run_dir);
        for (const std::string& p : problems)
            std::cout << "integrity FAIL " << p << '\n';
        if (!problems.empty())
            return exit_verification;
        std::cout << "integrity PASS " << run_dir << '\n';
        if (manifest_path.empty())
            return exit_ok;
    }
    if (manifest_path.empty())
        throw InputError("verify needs a manifest or --run-dir");
    const RunResult r = execute_run(load_manifest(manifest_path), false);
    for (const CheckRecord& c : r.report.checks)
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " residual=" << fmt17(c.residual)
                  << " tolerance=" << fmt17(c.tolerance) << (c.detail.empty() ? "" : " (" + c.detail + ")")
                  << '\n';
    if (r.exit_code != exit_ok)
        return r.exit_code;
    return r.report.all_passed() ? exit_ok : exit_verification;
}

RunManifest manifest_or_gallery(const std::string& manifest_path, const std::string& gallery_id)
{
    if (!manifest_path.empty())
        return load_manifest(manifest_path);
    return gallery_manifest(gallery_entry(gallery_id.empty() ? "torus-1a" : gallery_id), "unused");
}

int cmd_evolve_check(const std::string& manifest_path, const std::string& gallery_id, double T,
                     std::vector<double> dts, double s_max, std::optional<double> spacing, double ratio)
{
    RunManifest m = manifest_or_gallery(manifest_path, gallery_id);
    m.integrator.s_max = s_max;
    m.integrator.bidirectional = true;
    m.integrator.renormalize = true;
    m.integrator.max_step = std::min(m.integrator.max_step, 0.02);
    m.integrator.events.asymptote_lock = false;
    m.integrator.events.escape_u.reset();
    const PreparedRun prep = prepare_run(m);
    const Trajectory traj = integrate(prep.profile, m.params, prep.init, m.integrator);
    DeviationOptions opt;
    opt.spacing = spacing;
    opt.mesh_ratio = ratio;
    const ConvergenceStudy study = convergence_study(prep.profile, traj, m.params, T, dts, opt);
    std::printf("dt,spacing,deviation,status\n");
    bool any_failed = false;
    for (const ConvergenceRow& row : study.rows) {
        std::printf("%s,%s,%s,%s\n", fmt17(row.dt).c_str(), fmt17(row.spacing).c_str(),
                    fmt17(row.deviation).c_str(), row.ok ? "ok" : ("failed: " + row.error).c_str());
        any_failed = any_failed || !row.ok;
    }
    if (study.order)
        std::printf("fitted_order %.6f\n", *study.order);
    else
        std::printf("fitted_order n/a\n");
    std::printf("monotone %s\n", study.monotone ? "yes" : "no");
    return any_failed ? exit_numerical : exit_ok;
}

int cmd_probe(double a, int n_u, int n_dir, std::optional<std::uint64_t> seed, int samples, double R,
              double r, double arc)
{
    const Profile p = profiles::torus(R, r);
    std::vector<InitialCondition> ics;
    if (seed) {
        std::mt19937_64 rng(*seed);
        std::uniform_real_distribution<double> uu(0.0, 2 * std::numbers::pi * r), ang(0.0, 2 * std::numbers::pi);
        for (int k = 0; k < samples; ++k) {
            const double u = uu(rng), th = ang(rng);
            ics.push_back({u, 0.0, std::cos(th), std::sin(th)});
        }
    } else {
        ics = ic_grid(p, n_u, n_dir);
    }
    IntegratorConfig cfg;
    const ProbeReport rep = constant_curvature_probe(p, a, ics, cfg, arc);
    std::printf("a %s\n", fmt17(a).c_str());
    std::printf("initial_conditions %zu non_null %zu\n", rep.entries.size(), rep.non_null);
    std::printf("min_relative_variation %s threshold %s\n", fmt17(rep.min_relative_variation).c_str(),
                fmt17(rep.threshold).c_str());
    std::printf("%s\n", rep.consistent
                            ? "result: no constant non-zero curvature soliton found; consistent with their non-existence on the torus"
                            : "result: a near-constant curvature trajectory was found; inspect it");
    return rep.consistent ? exit_ok : exit_verification;
}

int cmd_make_manifest(const std::string& gallery_id, const std::string& out_dir, const std::string& file)
{
    RunManifest m = gallery_id.empty() ? RunManifest{} : gallery_manifest(gallery_entry(gallery_id), out_dir);
    m.output_dir = out_dir;
    m = seal(m);
    const std::string text = serialize(m);
    if (file.empty() || file == "-")
        std::cout << text;
    else
        write_text(file, text);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rotational solitons of the curve shortening flow on surfaces of revolution"};
    app.require_subcommand(1);
    app.set_version_flag("--version", rotsol::kVersion);

    std::string manifest, out, surface = "torus", run_dir, gallery_id, file;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    double R = 2.0, r = 1.0, T = 0.5, s_max = 8.0, ratio = 0.25, a = 0.5, arc = 20.0;
    std::vector<double> dts{1e-3, 5e-4, 2.5e-4};
    std::optional<double> spacing;
    std::optional<std::uint64_t> seed;
    int n_u = 8, n_dir = 8, samples = 64;
    bool mesh = false;

    auto* integ = app.add_subcommand("integrate", "Integrate one manifest and write its run directory");
    integ->add_option("manifest", manifest, "Run manifest (JSON)")->required();
    integ->add_option("--out", out, "Override the manifest's output directory");

    auto* gal = app.add_subcommand("gallery", "Run every gallery initial condition");
    gal->add_option("--surface", surface, "torus, catenoid or all")->check(CLI::IsMember({"torus", "catenoid", "all"}));
    gal->add_option("--out", out, "Output directory")->required();
    gal->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);
    gal->add_option("--R", R, "Torus major radius");
    gal->add_option("--r", r, "Torus minor radius");
    gal->add_flag("--mesh", mesh, "Also export surface.obj");

    auto* ver = app.add_subcommand("verify", "Run the invariant suite; non-zero exit if any check fails");
    ver->add_option("manifest", manifest, "Run manifest (JSON)");
    ver->add_option("--run-dir", run_dir, "Check the content hashes of an existing run directory");

    auto* evo = app.add_subcommand("evolve-check", "Cross-check a soliton against the discrete flow");
    evo->add_option("manifest", manifest, "Run manifest (JSON); default is gallery torus-1a");
    evo->add_option("--gallery", gallery_id, "Gallery id instead of a manifest");
    evo->add_option("--T", T, "Flow time")->check(CLI::PositiveNumber);
    evo->add_option("--dt", dts, "Time steps")->expected(1, -1);
    evo->add_option("--s-max", s_max, "Arc length of the sampled curve on each side")->check(CLI::PositiveNumber);
    evo->add_option("--spacing", spacing, "Fixed vertex spacing (default: sqrt(dt / ratio))");
    evo->add_option("--ratio", ratio, "dt / spacing^2 when the spacing follows dt")->check(CLI::PositiveNumber);

    auto* pro = app.add_subcommand("probe", "Search the torus for constant non-zero curvature solitons");
    pro->add_option("--a", a, "Rotation speed (non-zero)");
    pro->add_option("--n-u", n_u, "Grid points in u")->check(CLI::PositiveNumber);
    pro->add_option("--n-dir", n_dir, "Grid directions")->check(CLI::PositiveNumber);
    pro->add_option("--seed", seed, "Use random initial conditions from this seed");
    pro->add_option("--samples", samples, "Random initial conditions with --seed")->check(CLI::PositiveNumber);
    pro->add_option("--arc", arc, "Arc length per trajectory")->check(CLI::PositiveNumber);
    pro->add_option("--R", R, "Torus major radius");
    pro->add_option("--r", r, "Torus minor radius");

    auto* mk = app.add_subcommand("make-manifest", "Print a manifest (a gallery entry or the default template)");
    mk->add_option("--gallery", gallery_id, "Gallery id");
    mk->add_option("--out-dir", out, "output_dir recorded in the manifest")->default_str("run");
    mk->add_option("--file", file, "Write to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? rotsol::exit_ok : rotsol::exit_input;
    }

    try {
        if (*integ)
            return cmd_integrate(manifest, out);
        if (*gal)
            return cmd_gallery(surface, out, jobs, R, r, mesh);
        if (*ver)
            return cmd_verify(manifest, run_dir);
        if (*evo)
            return cmd_evolve_check(manifest, gallery_id, T, dts, s_max, spacing, ratio);
        if (*pro)
            return cmd_probe(a, n_u, n_dir, seed, samples, R, r, arc);
        if (*mk)
            return cmd_make_manifest(gallery_id, out.empty() ? "run" : out, file);
    } catch (const std::exception& e) {
        return fail(e);
    }
    return rotsol::exit_input;
}
