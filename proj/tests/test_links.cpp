#include "doctest.h"

#include "cubecvx/generators.hpp"
#include "cubecvx/links.hpp"

#include <algorithm>

using namespace cubecvx;

namespace {

/// Hand-built all-right complex from top simplices on vertex ids 0..n-1.
SphericalComplex make_spherical(int n, const std::vector<std::vector<int>>& tops) {
    SphericalComplex L;
    L.base_vertex = -1;
    for (int i = 0; i < n; ++i) {
        L.dirs.push_back({i, 0});
        L.dir_ids.push_back(i);
    }
    for (const auto& t : tops) {
        SphericalComplex::RawTop raw;
        raw.verts = t;
        std::sort(raw.verts.begin(), raw.verts.end());
        raw.source_cube = kNoCube;
        L.raw.push_back(raw);
        const std::size_t sz = raw.verts.size();
        for (unsigned mask = 1; mask < (1u << sz); ++mask) {
            std::vector<int> sub;
            for (std::size_t i = 0; i < sz; ++i)
                if (mask & (1u << i)) sub.push_back(raw.verts[i]);
            L.simplices.insert(sub);
        }
    }
    return L;
}

SphericalComplex restrict_to(const SphericalComplex& L, const std::vector<int>& verts,
                             const std::vector<std::vector<int>>& simplices) {
    SphericalComplex K;
    K.base_vertex = L.base_vertex;
    K.dirs = L.dirs;
    K.dir_ids = verts;
    std::sort(K.dir_ids.begin(), K.dir_ids.end());
    for (auto s : simplices) {
        std::sort(s.begin(), s.end());
        const std::size_t sz = s.size();
        for (unsigned mask = 1; mask < (1u << sz); ++mask) {
            std::vector<int> sub;
            for (std::size_t i = 0; i < sz; ++i)
                if (mask & (1u << i)) sub.push_back(s[i]);
            K.simplices.insert(sub);
        }
    }
    return K;
}

} // namespace

TEST_CASE("link of a square corner: 2 vertices, 1 edge") {
    CubicalComplex X = make_named("square");
    SphericalComplex L = link(X, 0);
    CHECK(L.dir_ids.size() == 2);
    int edges = 0;
    for (const auto& s : L.simplices) edges += s.size() == 2;
    CHECK(edges == 1);
    CHECK(L.simplicial);
    CHECK_THROWS_WITH_AS(link(X, 99), doctest::Contains("NotAVertex"), Error);
}

TEST_CASE("link of a solid cube corner: filled triangle") {
    CubicalComplex X = make_named("cube3");
    SphericalComplex L = link(X, 0);
    CHECK(L.dir_ids.size() == 3);
    int edges = 0, triangles = 0;
    for (const auto& s : L.simplices) {
        edges += s.size() == 2;
        triangles += s.size() == 3;
    }
    CHECK(edges == 3);
    CHECK(triangles == 1);
}

TEST_CASE("link at a cube-boundary corner: empty 3-cycle") {
    CubicalComplex X = make_named("cube_boundary");
    SphericalComplex L = link(X, 0);
    CHECK(L.dir_ids.size() == 3);
    int edges = 0, triangles = 0;
    for (const auto& s : L.simplices) {
        edges += s.size() == 2;
        triangles += s.size() == 3;
    }
    CHECK(edges == 3);
    CHECK(triangles == 0);
    FlagResult fr = is_flag(L);
    CHECK_FALSE(fr.flag);
    CHECK(fr.empty_clique.size() == 3);
}

TEST_CASE("L-shape reflex link is a 3-edge path; restriction isolates the inner directions") {
    CubicalComplex X = make_named("lshape");
    const VertexId reflex = 3; // (1,1)
    SphericalComplex L = link(X, reflex);
    CHECK(L.dir_ids.size() == 4);
    int edges = 0;
    for (const auto& s : L.simplices) edges += s.size() == 2;
    CHECK(edges == 3);
    CHECK(is_flag(L).flag); // a path has no empty cliques

    // W = the two inner boundary edges at the reflex vertex:
    // [(1,1),(2,1)] and [(1,1),(1,2)].
    std::vector<CubeId> inner;
    for (CubeId c = 0; c < static_cast<CubeId>(X.cubes.size()); ++c) {
        if (X.cubes[c].dim != 1) continue;
        std::vector<VertexId> v = X.cubes[c].corners;
        std::sort(v.begin(), v.end());
        if (v == std::vector<VertexId>{3, 5} || v == std::vector<VertexId>{3, 7})
            inner.push_back(c);
    }
    REQUIRE(inner.size() == 2);
    SubcomplexRef W = SubcomplexRef::from_cubes(X, inner);
    SphericalComplex K = restrict_link(L, W);
    CHECK(K.dir_ids.size() == 2);
    int kedges = 0;
    for (const auto& s : K.simplices) kedges += s.size() == 2;
    CHECK(kedges == 0);
    CHECK(is_full(K, L).full);
}

TEST_CASE("restrict_link with W = X returns the whole link") {
    CubicalComplex X = make_named("lshape");
    SubcomplexRef W = SubcomplexRef::whole(X);
    for (VertexId v = 0; v < X.vertex_count; ++v) {
        SphericalComplex L = link(X, v);
        SphericalComplex K = restrict_link(L, W);
        CHECK(K.dir_ids == L.dir_ids);
        CHECK(K.simplices == L.simplices);
    }
}

TEST_CASE("restrict_link requires the base vertex in W") {
    CubicalComplex X = make_named("square");
    SphericalComplex L = link(X, 0);
    SubcomplexRef W = SubcomplexRef::from_cubes(X, {X.vertex_cell[3]});
    CHECK_THROWS_WITH_AS(restrict_link(L, W), doctest::Contains("VertexNotInSubcomplex"), Error);
}

TEST_CASE("is_flag on hand-built complexes") {
    // Filled triangle.
    CHECK(is_flag(make_spherical(3, {{0, 1, 2}})).flag);
    // Empty 3-cycle: minimal witness is the whole cycle.
    FlagResult fr = is_flag(make_spherical(3, {{0, 1}, {1, 2}, {0, 2}}));
    CHECK_FALSE(fr.flag);
    CHECK(fr.empty_clique == std::vector<int>{0, 1, 2});
    // Path of 3 edges: no 3-cliques at all.
    CHECK(is_flag(make_spherical(4, {{0, 1}, {1, 2}, {2, 3}})).flag);
    // Empty tetrahedron boundary: 2-skeleton full, no 3-simplex.
    FlagResult fr3 = is_flag(
        make_spherical(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}));
    CHECK_FALSE(fr3.flag);
    CHECK(fr3.empty_clique.size() == 4);
}

TEST_CASE("is_full witnesses and subcomplex checks") {
    SphericalComplex L = make_spherical(2, {{0, 1}});
    // K = the two endpoints without the edge.
    SphericalComplex K = restrict_to(L, {0, 1}, {});
    FullResult fr = is_full(K, L);
    CHECK_FALSE(fr.full);
    CHECK(fr.witness == std::vector<int>{0, 1});

    CHECK(is_full(L, L).full);

    // Path a-b-c-d; K = {a, d} is full (no simplex of L has both).
    SphericalComplex P = make_spherical(4, {{0, 1}, {1, 2}, {2, 3}});
    SphericalComplex K2 = restrict_to(P, {0, 3}, {});
    CHECK(is_full(K2, P).full);

    // Not a subcomplex: K has a vertex outside L.
    SphericalComplex K3 = restrict_to(P, {0, 7}, {});
    CHECK_THROWS_WITH_AS(is_full(K3, P), doctest::Contains("NotASubcomplex"), Error);
}

TEST_CASE("minimal fullness witness descends to a face with boundary in K") {
    // L = filled triangle; K = its boundary: witness must be the 3-simplex.
    SphericalComplex L = make_spherical(3, {{0, 1, 2}});
    SphericalComplex K = restrict_to(L, {0, 1, 2}, {{0, 1}, {1, 2}, {0, 2}});
    FullResult fr = is_full(K, L);
    CHECK_FALSE(fr.full);
    CHECK(fr.witness.size() == 3);

    // L = filled triangle; K = three vertices only: the minimal witness is an edge.
    SphericalComplex K2 = restrict_to(L, {0, 1, 2}, {});
    FullResult fr2 = is_full(K2, L);
    CHECK_FALSE(fr2.full);
    CHECK(fr2.witness.size() == 2);
}

TEST_CASE("flag and full checks are invariant under relabeling") {
    auto relabel = [](const std::vector<std::vector<int>>& tops, const std::vector<int>& perm) {
        std::vector<std::vector<int>> out;
        for (const auto& t : tops) {
            std::vector<int> s;
            for (int v : t) s.push_back(perm[v]);
            out.push_back(s);
        }
        return out;
    };
    std::vector<std::vector<int>> tops{{0, 1}, {1, 2}, {0, 2}};
    std::vector<int> perm{2, 0, 1};
    FlagResult a = is_flag(make_spherical(3, tops));
    FlagResult b = is_flag(make_spherical(3, relabel(tops, perm)));
    CHECK(a.flag == b.flag);
    CHECK(a.empty_clique.size() == b.empty_clique.size());
}

TEST_CASE("links of every vertex of a cubical complex are simplicial") {
    for (const char* name : {"square", "lshape", "cube3", "cube_boundary"}) {
        CubicalComplex X = make_named(name);
        for (VertexId v = 0; v < X.vertex_count; ++v) CHECK(link(X, v).simplicial);
    }
}
