#pragma once

#include "cubecvx/certify.hpp"
#include "cubecvx/subdivision.hpp"

namespace cubecvx {

/// Equivalence class of parallel edges (relation generated by opposite edges
/// of a square), with the cubes it crosses and the crossing axis per cube.
struct Wall {
    int id = -1;
    std::vector<CubeId> edges;
    std::vector<std::pair<CubeId, int>> crossings; // (cube, axis)
    /// Cubes met in two crossing directions; must be empty when X is CAT(0).
    std::vector<CubeId> self_intersections;

    nlohmann::json to_json() const;
};

/// Union-find over edges, one union per square per opposite-edge pair.
/// Walls partition the edges of X.
std::vector<Wall> wall_classes(const CubicalComplex& X);

nlohmann::json walls_inventory(const CubicalComplex& X);

/// The union of midcubes of the wall realized as a subcomplex of the first
/// subdivision; verified connected.
/// Errors: SelfIntersecting.
SubcomplexRef hyperplane(const Subdivision& S, const Wall& w);

/// Per-wall structural report: one midcube per crossed cube and exactly two
/// complement components. Carries pass/fail, never throws on failure (the
/// annulus controls exercise the failing case).
struct SageevReport {
    bool one_midcube_per_cube = false;
    int components = 0;
    bool pass = false;
    std::vector<int> component_label; // per X'-cell: 0/1, or -1 on hyperplane cells
    nlohmann::json to_json() const;
};

SageevReport check_sageev(const Subdivision& S, const Wall& w);

/// Halfspace decomposition with convexity certificates for the hyperplane
/// and both closed sides, plus the S^0-join link decomposition at every
/// hyperplane vertex.
/// Errors: SageevViolation.
struct HalfspaceBundle {
    int wall_id = -1;
    SubcomplexRef sigma, side_a, side_b;
    Certificate cert_sigma, cert_a, cert_b;
    nlohmann::json sageev;
    nlohmann::json join_check;
    bool cover_ok = false; // side_a u side_b = X', side_a n side_b = sigma

    bool all_convex() const { return cert_sigma.holds && cert_a.holds && cert_b.holds; }
    nlohmann::json to_json() const;
};

HalfspaceBundle halfspaces(const Subdivision& S, const LinkTable& prime_links, const Wall& w,
                           Cat0Evidence evidence = Cat0Evidence::InheritedFromBase);

} // namespace cubecvx
