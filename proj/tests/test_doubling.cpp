#include "doctest.h"

#include "cubecvx/doubling.hpp"
#include "cubecvx/generators.hpp"

#include <algorithm>

using namespace cubecvx;

namespace {

SubcomplexRef edges_by_verts(const CubicalComplex& X,
                             const std::vector<std::vector<VertexId>>& wanted) {
    std::vector<CubeId> ids;
    for (CubeId c = 0; c < static_cast<CubeId>(X.cubes.size()); ++c) {
        if (X.cubes[c].dim != 1) continue;
        std::vector<VertexId> v = X.cubes[c].corners;
        std::sort(v.begin(), v.end());
        if (std::find(wanted.begin(), wanted.end(), v) != wanted.end()) ids.push_back(c);
    }
    return SubcomplexRef::from_cubes(X, ids);
}

} // namespace

TEST_CASE("double of a square along one edge is a 2x1 strip") {
    CubicalComplex X = make_named("square");
    SubcomplexRef W = edges_by_verts(X, {{2, 3}});
    DoubledComplex D = make_double(X, W);
    CHECK(D.simple());
    CHECK(D.dbl.cell_count(0) == 6);
    CHECK(D.dbl.cell_count(1) == 7);
    CHECK(D.dbl.cell_count(2) == 2);
    nlohmann::json rep = double_flag_report(X, W, &D);
    CHECK(rep.at("all_links_flag") == true);
    CHECK(rep.at("cell_count_identity") == true);
    CHECK(rep.at("involution_ok") == true);
}

TEST_CASE("double along two adjacent edges has a bigon link") {
    CubicalComplex X = make_named("square");
    SubcomplexRef W = edges_by_verts(X, {{1, 3}, {2, 3}});
    DoubledComplex D = make_double(X, W);
    nlohmann::json rep = double_flag_report(X, W, &D);
    CHECK(rep.at("all_links_flag") == false);
    REQUIRE(rep.contains("witness"));
    CHECK(rep.at("witness").contains("duplicate_simplex")); // the bigon
    // The failing vertex is the shared corner, in double numbering.
    CHECK(rep.at("witness").at("vertex") == D.vfold1[3]);
    CHECK(rep.at("cell_count_identity") == true);
}

TEST_CASE("double of an edge along both endpoints is a non-simple 2-cycle") {
    CubicalComplex X = make_named("edge");
    SubcomplexRef W = SubcomplexRef::from_cubes(X, {X.vertex_cell[0], X.vertex_cell[1]});
    DoubledComplex D = make_double(X, W);
    CHECK_FALSE(D.simple());
    nlohmann::json rep = D.simplicity_report();
    CHECK(rep.at("simple") == false);
    REQUIRE(rep.contains("duplicate_pair"));
    CHECK(D.dbl.cell_count(0) == 2);
    CHECK(D.dbl.cell_count(1) == 2);
}

TEST_CASE("double link verdict equals CLC across designed cases") {
    CubicalComplex l = make_named("lshape");
    SubcomplexRef reflex = edges_by_verts(l, {{3, 5}, {3, 7}});
    REQUIRE(is_clc(l, reflex).holds);
    CHECK(double_flag_report(l, reflex).at("all_links_flag") == true);

    CubicalComplex sq = make_named("square");
    SubcomplexRef bad = edges_by_verts(sq, {{1, 3}, {2, 3}});
    REQUIRE_FALSE(is_clc(sq, bad).holds);
    CHECK(double_flag_report(sq, bad).at("all_links_flag") == false);

    // W = X: the double is X itself and the report reduces to is_npc.
    SubcomplexRef whole = SubcomplexRef::whole(l);
    DoubledComplex D = make_double(l, whole);
    CHECK(D.dbl.cell_count() == l.cell_count());
    CHECK(double_flag_report(l, whole, &D).at("all_links_flag") == is_npc(l).holds);
}

TEST_CASE("involution is an order-two automorphism fixing exactly W") {
    CubicalComplex l = make_named("lshape");
    SubcomplexRef W = edges_by_verts(l, {{3, 5}, {3, 7}});
    DoubledComplex D = make_double(l, W);
    int fixed = 0;
    for (CubeId c = 0; c < static_cast<CubeId>(D.dbl.cubes.size()); ++c) {
        CHECK(D.involution[D.involution[c]] == c);
        if (D.involution[c] == c) ++fixed;
    }
    CHECK(fixed == static_cast<int>(W.cube_ids.size()));
    // The involution respects the face structure.
    for (CubeId c = 0; c < static_cast<CubeId>(D.dbl.cubes.size()); ++c)
        for (std::size_t f = 0; f < D.dbl.faces[c].size(); ++f)
            CHECK(D.involution[D.dbl.faces[c][f].cell] == D.dbl.faces[D.involution[c]][f].cell);
}

TEST_CASE("cell count identity 2|X| - |W| per dimension on random subcomplexes") {
    GeneratorSpec s;
    s.kind = GeneratorSpec::Kind::Staircase;
    s.n = 4;
    s.dim = 2;
    CubicalComplex X = generate(s);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        SubcomplexRef W = random_subcomplex(X, seed, 0.5);
        DoubledComplex D = make_double(X, W);
        for (int d = 0; d <= X.dim; ++d)
            CHECK(D.dbl.cell_count(d) == 2 * X.cell_count(d) - W.cell_count(d));
    }
}

TEST_CASE("reflection test on the reflex L-shape subcomplex") {
    CubicalComplex l = make_named("lshape");
    SubcomplexRef W = edges_by_verts(l, {{3, 5}, {3, 7}});
    nlohmann::json rep = double_geodesic_reflection_test(l, W, 30, 8, 5);
    CHECK(rep.at("pass") == true);
    CHECK(rep.at("fold_vertex_isometry") == true);
    CHECK(rep.at("involution_vertex_isometry") == true);
    CHECK(rep.at("symmetry_failures") == 0);
    CHECK(rep.at("near_W_failures") == 0);
}

TEST_CASE("reflection test rejects non-CLC preconditions") {
    CubicalComplex sq = make_named("square");
    SubcomplexRef bad = edges_by_verts(sq, {{1, 3}, {2, 3}});
    CHECK_THROWS_WITH_AS(double_geodesic_reflection_test(sq, bad, 10, 8, 1),
                         doctest::Contains("PreconditionFailed"), Error);
}

TEST_CASE("trivial geodesic cases in the double") {
    // W = one edge of the square: the geodesic between the endpoints of W is
    // the edge itself (it lies in the fixed set).
    CubicalComplex sq = make_named("square");
    SubcomplexRef W = edges_by_verts(sq, {{2, 3}});
    nlohmann::json rep = double_geodesic_reflection_test(sq, W, 20, 8, 3);
    CHECK(rep.at("pass") == true);
    CHECK(rep.at("max_escape_from_W").get<double>() <= 1e-9);
}
