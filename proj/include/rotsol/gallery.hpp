#pragma once

// Initial conditions of the torus and catenoid soliton gallery. Values are in
// the angular torus parameter and in the classical (cosh u, u) catenoid
// parameter; tangents are normalised before integration.

#include <string>
#include <vector>

#include "rotsol/errors.hpp"

namespace rotsol {

struct GalleryEntry
{
    std::string id;
    std::string surface;  // "torus" or "catenoid"
    double u0, v0, up0, vp0;
    double a;
};

inline const std::vector<GalleryEntry>& gallery_entries()
{
    constexpr double pi = 3.14159265358979323846;
    static const std::vector<GalleryEntry> entries{
        {"torus-1a", "torus", pi / 4, pi / 4, 0, 1, 0.5},
        {"torus-1b", "torus", pi / 4, pi / 4, 0, 1, 2.0},
        {"torus-2a", "torus", pi, pi / 4, 1, 1, 0.5},
        {"torus-2b", "torus", pi, pi / 4, 1, 1, 2.0},
        {"torus-3a", "torus", 0, pi, 1, 1, -0.1},
        {"torus-3b", "torus", 0, pi, 1, 1, 10.0},
        {"torus-4a", "torus", pi, pi, 1, 0, 1.0},
        {"torus-4b", "torus", pi, pi, 1, 0, -0.5},
        {"catenoid-1", "catenoid", 1, 1, 2, 1, 1.0},
        {"catenoid-2", "catenoid", 2, 1, -1, 1, 1.0},
        {"catenoid-3", "catenoid", 0, 0, 0.2, 0.9, 0.5},
        {"catenoid-4", "catenoid", 4, 0, 0.25, 0.55, 0.2},
    };
    return entries;
}

inline std::vector<GalleryEntry> gallery_for(const std::string& surface)
{
    if (surface != "torus" && surface != "catenoid" && surface != "all")
        throw InputError("surface: expected torus, catenoid or all, got '" + surface + "'");
    std::vector<GalleryEntry> out;
    for (const GalleryEntry& e : gallery_entries())
        if (surface == "all" || e.surface == surface)
            out.push_back(e);
    return out;
}

inline const GalleryEntry& gallery_entry(const std::string& id)
{
    for (const GalleryEntry& e : gallery_entries())
        if (e.id == id)
            return e;
    throw InputError("unknown gallery id '" + id + "'");
}

} // namespace rotsol
