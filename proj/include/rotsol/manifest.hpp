#pragma once

// RunManifest: everything needed to reproduce one integration, serialised as
// JSON. The content hash is the SHA-256 of the compact dump with the
// "content_hash" key removed; keys are sorted, so the dump is canonical.

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "rotsol/analysis.hpp"
#include "rotsol/errors.hpp"
#include "rotsol/gallery.hpp"
#include "rotsol/integrator.hpp"
#include "rotsol/profile_io.hpp"

namespace rotsol {

inline constexpr const char* kVersion = "0.1.0";

inline std::string sha256_hex(const std::string& data)
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 digest failed");
    std::string out;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        out += buf;
    }
    return out;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct InitialSpec
{
    /// "arclength": values in the soliton profile's parameter;
    /// "original": values in the profile's own parameter, converted first.
    std::string chart = "arclength";
    double u0 = 0.0;
    double v0 = 0.0;
    double up0 = 0.0;
    double vp0 = 1.0;
};

struct ExportSpec
{
    bool obj = true;
    bool mesh = false;
    int mesh_nu = 64;
    int mesh_nv = 128;
};

struct RunManifest
{
    std::string label = "run";
    ProfileSpec profile;
    SolitonParams params;
    InitialSpec initial;
    IntegratorConfig integrator;
    std::vector<std::string> checks = verification_check_names();
    ExportSpec exports;
    std::string output_dir = "run";
    std::string tool_version = kVersion;
    std::string content_hash;  // filled by seal()
};

namespace detail {

inline json config_to_json(const IntegratorConfig& c)
{
    return json{{"method", to_string(c.method)},
                {"h", c.h},
                {"abs_tol", c.abs_tol},
                {"rel_tol", c.rel_tol},
                {"safety", c.safety},
                {"min_step", c.min_step},
                {"max_step", c.max_step},
                {"s_max", c.s_max},
                {"bidirectional", c.bidirectional},
                {"renormalize", c.renormalize},
                {"events",
                 {{"asymptote_lock", c.events.asymptote_lock},
                  {"lock_eps", c.events.lock_eps},
                  {"lock_window", c.events.lock_window},
                  {"escape_u", c.events.escape_u ? json(*c.events.escape_u) : json(nullptr)}}}};
}

template <class T>
void read_field(const json& j, const char* key, T& out, const std::string& where)
{
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InputError(where + "." + key + ": wrong type");
    }
}

inline IntegratorConfig config_from_json(const json& j)
{
    IntegratorConfig c;
    if (!j.is_object())
        throw InputError("integrator: expected an object");
    std::string method = to_string(c.method);
    read_field(j, "method", method, "integrator");
    if (method == "rk4")
        c.method = Method::rk4;
    else if (method == "rkf45")
        c.method = Method::rkf45;
    else
        throw InputError("integrator.method: expected rk4 or rkf45, got '" + method + "'");
    read_field(j, "h", c.h, "integrator");
    read_field(j, "abs_tol", c.abs_tol, "integrator");
    read_field(j, "rel_tol", c.rel_tol, "integrator");
    read_field(j, "safety", c.safety, "integrator");
    read_field(j, "min_step", c.min_step, "integrator");
    read_field(j, "max_step", c.max_step, "integrator");
    read_field(j, "s_max", c.s_max, "integrator");
    read_field(j, "bidirectional", c.bidirectional, "integrator");
    read_field(j, "renormalize", c.renormalize, "integrator");
    if (j.contains("events")) {
        const json& e = j["events"];
        read_field(e, "asymptote_lock", c.events.asymptote_lock, "integrator.events");
        read_field(e, "lock_eps", c.events.lock_eps, "integrator.events");
        read_field(e, "lock_window", c.events.lock_window, "integrator.events");
        if (e.contains("escape_u") && !e["escape_u"].is_null()) {
            double x = 0;
            read_field(e, "escape_u", x, "integrator.events");
            c.events.escape_u = x;
        }
    }
    return c;
}

} // namespace detail

inline json to_json(const RunManifest& m, bool with_hash = true)
{
    json j{{"label", m.label},
           {"profile", to_json(m.profile)},
           {"params", {{"a", m.params.a}}},
           {"initial",
            {{"chart", m.initial.chart},
             {"u0", m.initial.u0},
             {"v0", m.initial.v0},
             {"up0", m.initial.up0},
             {"vp0", m.initial.vp0}}},
           {"integrator", detail::config_to_json(m.integrator)},
           {"checks", m.checks},
           {"exports",
            {{"obj", m.exports.obj},
             {"mesh", m.exports.mesh},
             {"mesh_nu", m.exports.mesh_nu},
             {"mesh_nv", m.exports.mesh_nv}}},
           {"output_dir", m.output_dir},
           {"tool_version", m.tool_version}};
    if (with_hash)
        j["content_hash"] = m.content_hash;
    return j;
}

inline std::string manifest_hash(const RunManifest& m)
{
    return sha256_hex(to_json(m, false).dump());
}

/// Returns m with content_hash set.
inline RunManifest seal(RunManifest m)
{
    m.content_hash = manifest_hash(m);
    return m;
}

inline std::string serialize(const RunManifest& m)
{
    return to_json(m).dump(2) + "\n";
}

/// Parses a manifest; a present, non-empty content_hash must match the content.
inline RunManifest manifest_from_json(const json& j)
{
    if (!j.is_object())
        throw InputError("manifest: expected a JSON object");
    RunManifest m;
    detail::read_field(j, "label", m.label, "manifest");
    if (j.contains("profile"))
        m.profile = profile_spec_from_json(j["profile"]);
    if (j.contains("params"))
        detail::read_field(j["params"], "a", m.params.a, "params");
    if (j.contains("initial")) {
        const json& i = j["initial"];
        detail::read_field(i, "chart", m.initial.chart, "initial");
        detail::read_field(i, "u0", m.initial.u0, "initial");
        detail::read_field(i, "v0", m.initial.v0, "initial");
        detail::read_field(i, "up0", m.initial.up0, "initial");
        detail::read_field(i, "vp0", m.initial.vp0, "initial");
        if (m.initial.chart != "arclength" && m.initial.chart != "original")
            throw InputError("initial.chart: expected arclength or original");
    }
    if (j.contains("integrator"))
        m.integrator = detail::config_from_json(j["integrator"]);
    detail::read_field(j, "checks", m.checks, "manifest");
    for (const std::string& c : m.checks)
        if (std::find(verification_check_names().begin(), verification_check_names().end(), c)
            == verification_check_names().end())
            throw InputError("checks: unknown check '" + c + "'");
    if (j.contains("exports")) {
        const json& e = j["exports"];
        detail::read_field(e, "obj", m.exports.obj, "exports");
        detail::read_field(e, "mesh", m.exports.mesh, "exports");
        detail::read_field(e, "mesh_nu", m.exports.mesh_nu, "exports");
        detail::read_field(e, "mesh_nv", m.exports.mesh_nv, "exports");
        if (m.exports.mesh_nu < 2 || m.exports.mesh_nv < 3)
            throw InputError("exports.mesh_nu must be >= 2 and exports.mesh_nv >= 3");
    }
    detail::read_field(j, "output_dir", m.output_dir, "manifest");
    detail::read_field(j, "tool_version", m.tool_version, "manifest");
    detail::read_field(j, "content_hash", m.content_hash, "manifest");
    if (!m.content_hash.empty() && m.content_hash != manifest_hash(m))
        throw InputError("content_hash: does not match the manifest content");
    return m;
}

inline RunManifest parse_manifest(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("manifest: ") + e.what());
    }
    return manifest_from_json(j);
}

inline RunManifest load_manifest(const std::string& path)
{
    return parse_manifest(read_file(path));
}

/// Manifest for one gallery entry on a torus (R, r) or the catenoid.
inline RunManifest gallery_manifest(const GalleryEntry& e, const std::string& out_dir, double R = 2.0,
                                    double r = 1.0)
{
    RunManifest m;
    m.label = e.id;
    m.profile.kind = "builtin";
    if (e.surface == "torus") {
        m.profile.name = "torus_angular";
        m.profile.params = {{"R", R}, {"r", r}};
    } else {
        m.profile.name = "catenoid_angular";
    }
    m.params.a = e.a;
    m.initial = InitialSpec{"original", e.u0, e.v0, e.up0, e.vp0};
    m.integrator.s_max = 3000.0;
    m.integrator.bidirectional = true;
    m.integrator.renormalize = true;
    if (e.surface == "catenoid")
        m.integrator.events.escape_u = 10.0;
    m.output_dir = out_dir;
    return seal(m);
}

} // namespace rotsol
