#pragma once

// Executes a RunManifest and writes the run directory:
//
//   trajectory.csv      s,u,v,up,vp,x,y,z,kappa,lambda,f,theta (17 significant digits)
//   report.txt          one record per verification check
//   curve.obj           polyline (v / l records), optional
//   surface.obj         quad mesh over (u, v), optional
//   manifest_echo.json  the manifest, normalised IC, outcome and SHA-256 of every file above

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "rotsol/analysis.hpp"
#include "rotsol/errors.hpp"
#include "rotsol/integrator.hpp"
#include "rotsol/manifest.hpp"
#include "rotsol/profile_io.hpp"

namespace rotsol {

namespace fs = std::filesystem;

enum ExitCode : int
{
    exit_ok = 0,
    exit_input = 1,
    exit_numerical = 2,
    exit_verification = 3
};

/// Exit code for an exception escaping a command.
inline int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const InputError*>(&e) || dynamic_cast<const DomainError*>(&e)
        || dynamic_cast<const ZeroTangent*>(&e) || dynamic_cast<const NotUnitSpeed*>(&e)
        || dynamic_cast<const NoValidInterval*>(&e) || dynamic_cast<const NotClosed*>(&e))
        return exit_input;
    if (dynamic_cast<const Error*>(&e))
        return exit_numerical;
    return exit_input;
}

inline std::string fmt17(double x)
{
    if (std::isnan(x))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Profile and normalised initial state described by a manifest.
struct PreparedRun
{
    Profile profile;
    ChartState raw_arclength;  // initial values in the arc-length chart, before normalisation
    SolitonState init;
};

inline PreparedRun prepare_run(const RunManifest& m)
{
    if (!(m.integrator.s_max > 0))
        throw InputError("integrator.s_max: must be positive, got " + fmt17(m.integrator.s_max));
    if (!std::isfinite(m.params.a))
        throw InputError("params.a: must be finite");
    for (double x : {m.initial.u0, m.initial.v0, m.initial.up0, m.initial.vp0})
        if (!std::isfinite(x))
            throw InputError("initial: values must be finite");
    Profile p = soliton_profile(m.profile);
    ChartState c{m.initial.u0, m.initial.v0, m.initial.up0, m.initial.vp0};
    if (m.initial.chart == "original") {
        const Profile raw = make_profile(m.profile);
        if (!raw.domain().contains(c.u))
            throw InputError("initial.u0: " + fmt17(c.u) + " is outside the profile domain");
        c = to_arclength_chart(m.profile, c);
    }
    if (!p.domain().contains(c.u) || !(p.jet(c.u).phi > kDomainMargin))
        throw InputError("initial.u0: " + fmt17(m.initial.u0) + " is outside the profile domain");
    SolitonState init;
    try {
        init = normalize_initial(p, c.u, c.v, c.up, c.vp);
    } catch (const ZeroTangent&) {
        throw InputError("initial.up0, initial.vp0: tangent must be non-zero");
    }
    return {std::move(p), c, init};
}

/// Keeps only the checks requested by the manifest, in suite order.
inline VerificationReport filter_checks(VerificationReport rep, const std::vector<std::string>& wanted)
{
    std::vector<CheckRecord> kept;
    for (CheckRecord& c : rep.checks)
        if (std::find(wanted.begin(), wanted.end(), c.name) != wanted.end())
            kept.push_back(std::move(c));
    rep.checks = std::move(kept);
    return rep;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& t)
{
    os << "s,u,v,up,vp,x,y,z,kappa,lambda,f,theta\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        const SolitonState& st = t.samples[i];
        const Vec3& x = t.embedded[i];
        os << fmt17(st.s) << ',' << fmt17(st.u) << ',' << fmt17(st.v) << ',' << fmt17(st.up) << ','
           << fmt17(st.vp) << ',' << fmt17(x.x()) << ',' << fmt17(x.y()) << ',' << fmt17(x.z()) << ','
           << fmt17(t.kappa[i]) << ',' << fmt17(t.lambda[i]) << ',' << fmt17(t.f[i]) << ','
           << fmt17(t.theta[i]) << '\n';
    }
}

inline std::string trajectory_csv(const Trajectory& t)
{
    std::ostringstream os;
    write_trajectory_csv(os, t);
    return os.str();
}

inline std::string curve_obj(const std::vector<Vec3>& pts)
{
    std::ostringstream os;
    os << "# polyline, " << pts.size() << " vertices\n";
    for (const Vec3& x : pts)
        os << "v " << fmt17(x.x()) << ' ' << fmt17(x.y()) << ' ' << fmt17(x.z()) << '\n';
    if (pts.size() >= 2) {
        os << 'l';
        for (std::size_t i = 1; i <= pts.size(); ++i)
            os << ' ' << i;
        os << '\n';
    }
    return os.str();
}

/// Quad mesh of the surface over [u_lo, u_hi] x [0, 2 pi), nv columns wrapping around.
inline std::string surface_obj(const Profile& p, double u_lo, double u_hi, int nu, int nv)
{
    if (nu < 2 || nv < 3 || !(u_lo < u_hi))
        throw InputError("surface mesh needs nu >= 2, nv >= 3 and a non-empty u range");
    std::ostringstream os;
    os << "# surface " << p.name() << ", " << nu << " x " << nv << " vertices\n";
    for (int i = 0; i < nu; ++i) {
        const double u = u_lo + (u_hi - u_lo) * i / (nu - 1);
        for (int k = 0; k < nv; ++k) {
            const Vec3 x = embed(p, u, 2 * std::numbers::pi * k / nv);
            os << "v " << fmt17(x.x()) << ' ' << fmt17(x.y()) << ' ' << fmt17(x.z()) << '\n';
        }
    }
    for (int i = 0; i + 1 < nu; ++i)
        for (int k = 0; k < nv; ++k) {
            const int a = i * nv + k + 1, b = i * nv + (k + 1) % nv + 1;
            os << "f " << a << ' ' << b << ' ' << b + nv << ' ' << a + nv << '\n';
        }
    return os.str();
}

inline std::string format_report(const RunManifest& m, const PreparedRun& prep, const Trajectory& t,
                                 const VerificationReport& rep)
{
    std::ostringstream os;
    os << "label " << m.label << '\n';
    os << "profile " << prep.profile.name() << '\n';
    os << "a " << fmt17(m.params.a) << '\n';
    os << "initial_raw u0=" << fmt17(m.initial.u0) << " v0=" << fmt17(m.initial.v0)
       << " up0=" << fmt17(m.initial.up0) << " vp0=" << fmt17(m.initial.vp0) << " chart=" << m.initial.chart
       << '\n';
    os << "initial_normalized u=" << fmt17(prep.init.u) << " v=" << fmt17(prep.init.v)
       << " up=" << fmt17(prep.init.up) << " vp=" << fmt17(prep.init.vp) << '\n';
    auto branch = [&](const char* name, const Branch& b) {
        os << "branch " << name << " termination=" << to_string(b.reason) << " s_end=" << fmt17(b.s_end)
           << " accepted=" << b.stats.accepted << " rejected=" << b.stats.rejected;
        if (!b.message.empty())
            os << " message=\"" << b.message << '"';
        os << '\n';
    };
    branch("forward", t.forward);
    if (t.bidirectional)
        branch("backward", t.backward);
    for (const CheckRecord& c : rep.checks) {
        os << "check " << c.name << " status=" << (c.passed ? "PASS" : "FAIL") << " residual=" << fmt17(c.residual)
           << " tolerance=" << fmt17(c.tolerance) << " interval=[" << fmt17(c.s_lo) << ", " << fmt17(c.s_hi)
           << "]";
        if (!c.detail.empty())
            os << " note=\"" << c.detail << '"';
        os << '\n';
    }
    for (const AsymptoteRecord& a : rep.asymptotes) {
        os << "asymptote end=" << to_string(a.end) << " termination=" << a.termination;
        if (a.u_star)
            os << " u_star=" << fmt17(*a.u_star) << " u_star_reduced=" << fmt17(a.u_star_reduced.value_or(*a.u_star));
        else
            os << " u_star=none";
        os << '\n';
    }
    if (rep.closure)
        os << "closure closed period=" << fmt17(rep.closure->period)
           << " parallel=" << (rep.closure->parallel ? "yes" : "no") << '\n';
    else
        os << "closure open\n";
    os << "summary " << (rep.all_passed() ? "PASS" : "FAIL") << '\n';
    return os.str();
}

inline json report_summary(const VerificationReport& rep)
{
    json checks = json::array();
    for (const CheckRecord& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"residual", std::isfinite(c.residual) ? json(c.residual) : json(nullptr)},
                          {"tolerance", c.tolerance}});
    json asym = json::array();
    for (const AsymptoteRecord& a : rep.asymptotes)
        asym.push_back({{"end", to_string(a.end)},
                        {"termination", a.termination},
                        {"u_star", a.u_star_reduced ? json(*a.u_star_reduced) : json(nullptr)}});
    return {{"all_passed", rep.all_passed()}, {"checks", checks}, {"asymptotes", asym},
            {"closed", rep.closure.has_value()}};
}

struct RunResult
{
    RunManifest manifest;
    Trajectory trajectory;
    VerificationReport report;
    std::map<std::string, std::string> files;  // name -> sha256
    fs::path directory;
    int exit_code = exit_ok;
};

inline void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write '" + path.string() + "'");
    out << text;
    if (!out)
        throw InputError("write failed for '" + path.string() + "'");
}

/**
 * Integrates, verifies and writes the run directory. Input problems throw
 * InputError; integrator failures propagate. A branch ending on a non-finite
 * state gives exit_numerical; failed checks are recorded but do not change
 * the exit code (cmd_verify decides that).
 */
inline RunResult execute_run(const RunManifest& manifest, bool write = true)
{
    RunResult res;
    res.manifest = manifest.content_hash.empty() ? seal(manifest) : manifest;
    const RunManifest& m = res.manifest;
    const PreparedRun prep = prepare_run(m);
    res.trajectory = integrate(prep.profile, m.params, prep.init, m.integrator);
    const Trajectory& t = res.trajectory;
    res.report = filter_checks(run_verification(prep.profile, t), m.checks);
    if (t.forward.reason == Termination::non_finite
        || (t.bidirectional && t.backward.reason == Termination::non_finite))
        res.exit_code = exit_numerical;
    if (!write)
        return res;

    res.directory = m.output_dir;
    fs::create_directories(res.directory);
    std::map<std::string, std::string> outputs;
    outputs["trajectory.csv"] = trajectory_csv(t);
    outputs["report.txt"] = format_report(m, prep, t, res.report);
    if (m.exports.obj)
        outputs["curve.obj"] = curve_obj(t.embedded);
    if (m.exports.mesh) {
        double lo, hi;
        if (prep.profile.period()) {
            lo = -0.5 * *prep.profile.period();
            hi = 0.5 * *prep.profile.period();
        } else {
            const auto [mn, mx] = std::minmax_element(t.samples.begin(), t.samples.end(),
                                                      [](const auto& x, const auto& y) { return x.u < y.u; });
            lo = std::max(mn->u - 0.5, prep.profile.domain().lo);
            hi = std::min(mx->u + 0.5, prep.profile.domain().hi);
        }
        outputs["surface.obj"] = surface_obj(prep.profile, lo, hi, m.exports.mesh_nu, m.exports.mesh_nv);
    }
    json files = json::object();
    for (const auto& [name, text] : outputs) {
        write_text(res.directory / name, text);
        res.files[name] = sha256_hex(text);
        files[name] = res.files[name];
    }
    json echo{{"manifest", to_json(m)},
              {"normalized_initial",
               {{"u", prep.init.u}, {"v", prep.init.v}, {"up", prep.init.up}, {"vp", prep.init.vp}}},
              {"arclength_initial",
               {{"u", prep.raw_arclength.u},
                {"v", prep.raw_arclength.v},
                {"up", prep.raw_arclength.up},
                {"vp", prep.raw_arclength.vp}}},
              {"termination",
               {{"forward", to_string(t.forward.reason)},
                {"backward", t.bidirectional ? json(to_string(t.backward.reason)) : json(nullptr)}}},
              {"verification", report_summary(res.report)},
              {"files", files}};
    write_text(res.directory / "manifest_echo.json", echo.dump(2) + "\n");
    return res;
}

/// Problems found when re-hashing the files listed in a run directory's manifest echo.
inline std::vector<std::string> check_run_dir(const fs::path& dir)
{
    std::vector<std::string> problems;
    json echo;
    try {
        echo = json::parse(read_file((dir / "manifest_echo.json").string()));
    } catch (const json::parse_error& e) {
        return {std::string("manifest_echo.json: ") + e.what()};
    }
    if (!echo.contains("files") || !echo["files"].is_object())
        return {"manifest_echo.json: no file list"};
    for (const auto& [name, hash] : echo["files"].items()) {
        const fs::path path = dir / name;
        if (!fs::exists(path)) {
            problems.push_back(name + ": missing");
            continue;
        }
        if (sha256_hex(read_file(path.string())) != hash.get<std::string>())
            problems.push_back(name + ": content hash mismatch");
    }
    try {
        const RunManifest m = manifest_from_json(echo.at("manifest"));
        (void)m;
    } catch (const std::exception& e) {
        problems.push_back(std::string("manifest: ") + e.what());
    }
    return problems;
}

} // namespace rotsol
