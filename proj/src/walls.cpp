#include "cubecvx/walls.hpp"

#include <algorithm>
#include <numeric>

namespace cubecvx {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) { parent[x] = parent[parent[x]]; x = parent[x]; }
        return x;
    }
    void unite(int a, int b) {
        a = find(a); b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

nlohmann::json Wall::to_json() const {
    nlohmann::json j;
    j["id"] = id;
    j["edges"] = edges;
    nlohmann::json cr = nlohmann::json::array();
    for (const auto& [cube, axis] : crossings) cr.push_back({{"cube", cube}, {"axis", axis}});
    j["crossings"] = std::move(cr);
    j["self_intersections"] = self_intersections;
    return j;
}

std::vector<Wall> wall_classes(const CubicalComplex& X) {
    UnionFind uf(X.cubes.size());
    for (CubeId s = 0; s < static_cast<CubeId>(X.cubes.size()); ++s) {
        if (X.cubes[s].dim != 2) continue;
        // Opposite edges of the square: direction j edges are the faces
        // pinning the other axis.
        uf.unite(X.faces[s][2 * 1 + 0].cell, X.faces[s][2 * 1 + 1].cell); // direction-0 pair
        uf.unite(X.faces[s][2 * 0 + 0].cell, X.faces[s][2 * 0 + 1].cell); // direction-1 pair
    }

    std::map<int, Wall> by_root;
    for (CubeId e = 0; e < static_cast<CubeId>(X.cubes.size()); ++e) {
        if (X.cubes[e].dim != 1) continue;
        by_root[uf.find(e)].edges.push_back(e);
    }
    std::vector<Wall> walls;
    for (auto& [root, w] : by_root) {
        w.id = static_cast<int>(walls.size());
        walls.push_back(std::move(w));
    }
    std::map<int, int> wall_of_root;
    for (const auto& w : walls) wall_of_root[uf.find(w.edges.front())] = w.id;

    for (CubeId c = 0; c < static_cast<CubeId>(X.cubes.size()); ++c) {
        const int k = X.cubes[c].dim;
        if (k < 1) continue;
        for (int axis = 0; axis < k; ++axis) {
            int ax[1] = {axis};
            SpanResult e = X.span_face(c, 0, ax);
            walls[wall_of_root.at(uf.find(e.cell))].crossings.push_back({c, axis});
        }
    }
    for (auto& w : walls) {
        std::map<CubeId, int> per_cube;
        for (const auto& [cube, axis] : w.crossings) ++per_cube[cube];
        for (const auto& [cube, count] : per_cube)
            if (count > 1) w.self_intersections.push_back(cube);
    }
    return walls;
}

nlohmann::json walls_inventory(const CubicalComplex& X) {
    nlohmann::json j;
    j["input_sha"] = X.canonical_digest();
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& w : wall_classes(X)) arr.push_back(w.to_json());
    j["walls"] = std::move(arr);
    return j;
}

SubcomplexRef hyperplane(const Subdivision& S, const Wall& w) {
    if (!w.self_intersections.empty())
        raise(ErrorCode::SelfIntersecting,
              "wall " + std::to_string(w.id) + " meets cube " +
                  std::to_string(w.self_intersections.front()) + " in two midcubes");
    std::set<CubeId> cells;
    for (const auto& [cube, axis] : w.crossings)
        for (CubeId c : S.midcube_cells(cube, axis)) cells.insert(c);
    int added = 0;
    SubcomplexRef sigma = SubcomplexRef::from_cubes(
        S.prime, std::vector<CubeId>(cells.begin(), cells.end()), &added);
    if (added != 0) raise(ErrorCode::Internal, "midcube union was not face-closed");
    if (!is_connected(sigma))
        raise(ErrorCode::Internal, "hyperplane of a single wall must be connected");
    return sigma;
}

nlohmann::json SageevReport::to_json() const {
    nlohmann::json j;
    j["one_midcube_per_cube"] = one_midcube_per_cube;
    j["components"] = components;
    j["pass"] = pass;
    return j;
}

SageevReport check_sageev(const Subdivision& S, const Wall& w) {
    SageevReport rep;
    rep.one_midcube_per_cube = w.self_intersections.empty();

    // Complement components: cells of X' off the hyperplane, adjacency
    // through codimension-1 faces also off the hyperplane.
    std::set<CubeId> sigma_cells;
    for (const auto& [cube, axis] : w.crossings)
        for (CubeId c : S.midcube_cells(cube, axis)) sigma_cells.insert(c);

    const CubicalComplex& Xp = S.prime;
    UnionFind uf(Xp.cubes.size());
    for (CubeId c = 0; c < static_cast<CubeId>(Xp.cubes.size()); ++c) {
        if (sigma_cells.count(c)) continue;
        for (const auto& emb : Xp.faces[c])
            if (!sigma_cells.count(emb.cell)) uf.unite(c, emb.cell);
    }
    std::map<int, int> roots;
    for (CubeId c = 0; c < static_cast<CubeId>(Xp.cubes.size()); ++c) {
        if (sigma_cells.count(c)) continue;
        int r = uf.find(c);
        if (!roots.count(r)) roots[r] = static_cast<int>(roots.size());
    }
    rep.components = static_cast<int>(roots.size());
    rep.component_label.assign(Xp.cubes.size(), -1);
    for (CubeId c = 0; c < static_cast<CubeId>(Xp.cubes.size()); ++c)
        if (!sigma_cells.count(c)) rep.component_label[c] = roots.at(uf.find(c));
    rep.pass = rep.one_midcube_per_cube && rep.components == 2;
    return rep;
}

namespace {

nlohmann::json join_decomposition_check(const LinkTable& prime_links, const SubcomplexRef& sigma) {
    const CubicalComplex& Xp = *sigma.parent;
    nlohmann::json rep;
    int checked = 0;
    nlohmann::json failure;
    for (VertexId v = 0; v < Xp.vertex_count; ++v) {
        if (Xp.vertex_cell[v] == kNoCube || !sigma.contains(Xp.vertex_cell[v])) continue;
        ++checked;
        const SphericalComplex& L = prime_links.at(v);
        SphericalComplex K = restrict_link(L, sigma);
        std::vector<int> poles;
        for (int id : L.dir_ids)
            if (!K.has_vertex(id)) poles.push_back(id);
        auto fail = [&](const std::string& why, nlohmann::json detail) {
            if (failure.is_null())
                failure = {{"vertex", v}, {"why", why}, {"detail", std::move(detail)}};
        };
        if (poles.size() != 2) {
            fail("pole_count", {{"poles", poles}});
            continue;
        }
        bool ok = true;
        for (const auto& s : L.simplices) {
            int npoles = 0;
            std::vector<int> rest;
            for (int id : s)
                (id == poles[0] || id == poles[1]) ? void(++npoles) : rest.push_back(id);
            if (npoles >= 2) { fail("simplex_joins_both_poles", {{"simplex", s}}); ok = false; break; }
            if (npoles == 1 && !rest.empty() && !K.has_simplex(rest)) {
                fail("pole_joined_to_non_sigma_simplex", {{"simplex", s}});
                ok = false;
                break;
            }
            if (npoles == 0 && !K.has_simplex(s)) {
                fail("pole_free_simplex_outside_sigma", {{"simplex", s}});
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        // Completeness of the join: each pole joins every sigma-simplex.
        for (int p : poles) {
            for (const auto& s : K.simplices) {
                std::vector<int> joined = s;
                joined.push_back(p);
                std::sort(joined.begin(), joined.end());
                if (!L.simplices.count(joined)) {
                    fail("missing_join_simplex", {{"pole", p}, {"simplex", s}});
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
            if (!L.has_vertex(p)) { fail("missing_pole_vertex", {{"pole", p}}); break; }
        }
    }
    rep["vertices_checked"] = checked;
    rep["pass"] = failure.is_null();
    if (!failure.is_null()) rep["failure"] = failure;
    return rep;
}

} // namespace

nlohmann::json HalfspaceBundle::to_json() const {
    nlohmann::json j;
    j["wall"] = wall_id;
    j["sigma_cells"] = sigma.cube_ids;
    j["side_a_cells"] = side_a.cube_ids.size();
    j["side_b_cells"] = side_b.cube_ids.size();
    j["cover_ok"] = cover_ok;
    j["sageev"] = sageev;
    j["join_check"] = join_check;
    j["certificates"] = {{"sigma", cert_sigma.to_json()},
                         {"side_a", cert_a.to_json()},
                         {"side_b", cert_b.to_json()}};
    j["all_convex"] = all_convex();
    return j;
}

HalfspaceBundle halfspaces(const Subdivision& S, const LinkTable& prime_links, const Wall& w,
                           Cat0Evidence evidence) {
    SageevReport sr = check_sageev(S, w);
    if (!sr.pass)
        raise(ErrorCode::SageevViolation,
              "wall " + std::to_string(w.id) + ": midcube/component structure failed (" +
                  std::to_string(sr.components) + " components)");

    HalfspaceBundle hb;
    hb.wall_id = w.id;
    hb.sageev = sr.to_json();
    hb.sigma = hyperplane(S, w);

    std::vector<CubeId> comp_a, comp_b;
    for (CubeId c = 0; c < static_cast<CubeId>(S.prime.cubes.size()); ++c) {
        if (sr.component_label[c] == 0) comp_a.push_back(c);
        else if (sr.component_label[c] == 1) comp_b.push_back(c);
    }
    hb.side_a = SubcomplexRef::from_cubes(S.prime, comp_a);
    hb.side_b = SubcomplexRef::from_cubes(S.prime, comp_b);

    // Cover identities over cell sets.
    hb.cover_ok = true;
    for (CubeId c = 0; c < static_cast<CubeId>(S.prime.cubes.size()); ++c) {
        bool in_a = hb.side_a.contains(c), in_b = hb.side_b.contains(c), in_s = hb.sigma.contains(c);
        if (!(in_a || in_b)) hb.cover_ok = false;
        if ((in_a && in_b) != in_s) hb.cover_ok = false;
    }

    hb.cert_sigma = is_convex(prime_links, hb.sigma, evidence);
    hb.cert_a = is_convex(prime_links, hb.side_a, evidence);
    hb.cert_b = is_convex(prime_links, hb.side_b, evidence);
    hb.join_check = join_decomposition_check(prime_links, hb.sigma);
    return hb;
}

} // namespace cubecvx
