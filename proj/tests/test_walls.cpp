#include "doctest.h"

#include "cubecvx/generators.hpp"
#include "cubecvx/walls.hpp"

#include <algorithm>

using namespace cubecvx;

TEST_CASE("wall classes of the named instances") {
    // Crossing counts below are over top-dimensional cubes; every cell with
    // an edge in the class (including the edges themselves) is crossed.
    auto top_crossings = [](const CubicalComplex& X, const Wall& w) {
        std::size_t n = 0;
        for (const auto& [cube, axis] : w.crossings)
            if (X.cubes[cube].dim == X.dim) ++n;
        return n;
    };
    {
        CubicalComplex X = make_named("square");
        auto walls = wall_classes(X);
        CHECK(walls.size() == 2);
        for (const auto& w : walls) {
            CHECK(w.edges.size() == 2);
            CHECK(top_crossings(X, w) == 1);
            CHECK(w.self_intersections.empty());
        }
    }
    {
        CubicalComplex X = make_named("lshape");
        auto walls = wall_classes(X);
        CHECK(walls.size() == 4);
        std::vector<std::size_t> crossing_counts;
        for (const auto& w : walls) crossing_counts.push_back(top_crossings(X, w));
        std::sort(crossing_counts.begin(), crossing_counts.end());
        CHECK(crossing_counts == std::vector<std::size_t>{1, 1, 2, 2});
    }
    {
        CubicalComplex X = make_named("cube3");
        auto walls = wall_classes(X);
        CHECK(walls.size() == 3);
        for (const auto& w : walls) CHECK(w.edges.size() == 4);
    }
}

TEST_CASE("walls partition the edges") {
    for (const char* name : {"square", "lshape", "cube3", "cube_boundary"}) {
        CubicalComplex X = make_named(name);
        auto walls = wall_classes(X);
        std::vector<CubeId> all;
        for (const auto& w : walls)
            all.insert(all.end(), w.edges.begin(), w.edges.end());
        std::sort(all.begin(), all.end());
        CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
        CHECK(all.size() == X.cell_count(1));
    }
}

TEST_CASE("hyperplane of a square wall: a segment of two prime edges") {
    CubicalComplex X = make_named("square");
    Subdivision S = cubical_subdivision(X);
    auto walls = wall_classes(X);
    for (const auto& w : walls) {
        SubcomplexRef sigma = hyperplane(S, w);
        CHECK(sigma.cell_count(0) == 3);
        CHECK(sigma.cell_count(1) == 2);
        CHECK(sigma.cell_count(2) == 0);
        CHECK(is_connected(sigma));
    }
}

TEST_CASE("hyperplane of a cube wall is a subdivided midcube square") {
    CubicalComplex X = make_named("cube3");
    Subdivision S = cubical_subdivision(X);
    auto walls = wall_classes(X);
    for (const auto& w : walls) {
        SubcomplexRef sigma = hyperplane(S, w);
        CHECK(sigma.cell_count(2) == 4); // the midcube square, subdivided
        CHECK(sigma.cell_count(1) == 12);
        CHECK(sigma.cell_count(0) == 9);
    }
}

TEST_CASE("hyperplane rejects self-intersecting walls") {
    CubicalComplex X = make_named("square");
    Subdivision S = cubical_subdivision(X);
    Wall fake = wall_classes(X)[0];
    fake.self_intersections = {0};
    CHECK_THROWS_WITH_AS(hyperplane(S, fake), doctest::Contains("SelfIntersecting"), Error);
}

TEST_CASE("check_sageev passes on CAT(0) instances with two components") {
    for (const char* name : {"square", "lshape", "cube3"}) {
        CubicalComplex X = make_named(name);
        Subdivision S = cubical_subdivision(X);
        for (const auto& w : wall_classes(X)) {
            SageevReport rep = check_sageev(S, w);
            CHECK(rep.one_midcube_per_cube);
            CHECK(rep.components == 2);
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("check_sageev on the annulus: a rung wall leaves one component") {
    // Precondition-violation demo: the complex is not CAT(0), and some wall
    // fails the two-component conclusion.
    GeneratorSpec s;
    s.kind = GeneratorSpec::Kind::Annulus;
    s.n = 4;
    CubicalComplex X = generate(s);
    Subdivision S = cubical_subdivision(X);
    int one_component_walls = 0, two_component_walls = 0;
    for (const auto& w : wall_classes(X)) {
        SageevReport rep = check_sageev(S, w);
        CHECK(rep.one_midcube_per_cube);
        if (rep.components == 1) ++one_component_walls;
        if (rep.components == 2) ++two_component_walls;
        if (rep.components == 1) CHECK_FALSE(rep.pass);
    }
    // The four rung walls cut the ring without separating it; the core wall
    // (all vertical edges) splits it into two rings.
    CHECK(one_component_walls == 4);
    CHECK(two_component_walls == 1);
}

TEST_CASE("halfspaces of the square: both sides convex, join links") {
    CubicalComplex X = make_named("square");
    Subdivision S = cubical_subdivision(X);
    LinkTable prime_links(S.prime);
    for (const auto& w : wall_classes(X)) {
        HalfspaceBundle hb = halfspaces(S, prime_links, w);
        CHECK(hb.all_convex());
        CHECK(hb.cover_ok);
        CHECK(hb.join_check.at("pass") == true);
        CHECK(hb.side_a.cell_count(2) == 2);
        CHECK(hb.side_b.cell_count(2) == 2);
    }
}

TEST_CASE("halfspaces of the L-shape single-square walls split 2 + 10") {
    CubicalComplex X = make_named("lshape");
    Subdivision S = cubical_subdivision(X);
    LinkTable prime_links(S.prime);
    int split_2_10 = 0;
    for (const auto& w : wall_classes(X)) {
        HalfspaceBundle hb = halfspaces(S, prime_links, w);
        CHECK(hb.all_convex());
        CHECK(hb.cover_ok);
        CHECK(hb.join_check.at("pass") == true);
        std::size_t a = hb.side_a.cell_count(2), b = hb.side_b.cell_count(2);
        if (std::min(a, b) == 2 && std::max(a, b) == 10) ++split_2_10;
        CHECK(a + b == 12);
    }
    CHECK(split_2_10 == 2); // the two walls crossing a single square
}

TEST_CASE("halfspaces of the cube: two convex slabs") {
    CubicalComplex X = make_named("cube3");
    Subdivision S = cubical_subdivision(X);
    LinkTable prime_links(S.prime);
    for (const auto& w : wall_classes(X)) {
        HalfspaceBundle hb = halfspaces(S, prime_links, w);
        CHECK(hb.all_convex());
        CHECK(hb.side_a.cell_count(3) == 4);
        CHECK(hb.side_b.cell_count(3) == 4);
        CHECK(hb.join_check.at("pass") == true);
    }
}

TEST_CASE("midcube counts match crossed cubes on CAT(0) instances") {
    GeneratorSpec s;
    s.kind = GeneratorSpec::Kind::GridRegion;
    s.dims = {3, 2};
    CubicalComplex X = generate(s);
    Subdivision S = cubical_subdivision(X);
    for (const auto& w : wall_classes(X)) {
        std::set<CubeId> crossed;
        for (const auto& [cube, axis] : w.crossings) crossed.insert(cube);
        CHECK(w.crossings.size() == crossed.size());
        // Top-dimensional midcube cells: one per crossed top cube.
        SubcomplexRef sigma = hyperplane(S, w);
        std::size_t top_mid = 0;
        for (CubeId c : sigma.cube_ids)
            if (S.prime.cubes[c].dim == X.dim - 1 &&
                X.cubes[S.carrier(c)].dim == X.dim)
                ++top_mid;
        std::size_t crossed_tops = 0;
        for (CubeId c : crossed)
            if (X.cubes[c].dim == X.dim) ++crossed_tops;
        CHECK(top_mid == (std::size_t(1) << (X.dim - 1)) * crossed_tops);
    }
}
