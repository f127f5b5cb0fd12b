#include "doctest.h"

#include "cubecvx/complex.hpp"
#include "cubecvx/generators.hpp"

using namespace cubecvx;

namespace {

// Square on vertices (0,1,2,3), binary-corner order, with full closure.
std::vector<Cube> square_cells() {
    return {
        {0, {0}}, {0, {1}}, {0, {2}}, {0, {3}},
        {0, {0, 1}}, {0, {2, 3}}, {0, {0, 2}}, {0, {1, 3}},
        {0, {0, 1, 2, 3}},
    };
}

} // namespace

TEST_CASE("validate accepts a square with closure, 9 cells") {
    CubicalComplex X = CubicalComplex::validate(4, square_cells());
    CHECK(X.cell_count() == 9);
    CHECK(X.cell_count(0) == 4);
    CHECK(X.cell_count(1) == 4);
    CHECK(X.cell_count(2) == 1);
    CHECK(X.dim == 2);
    // Every face of every cube is present (exhaustive loop).
    for (CubeId c = 0; c < static_cast<CubeId>(X.cubes.size()); ++c)
        for (const auto& emb : X.faces[c]) CHECK(emb.cell != kNoCube);
}

TEST_CASE("validate rejects a square with a missing edge") {
    auto cells = square_cells();
    cells.erase(cells.begin() + 5); // drop edge {2,3}
    CHECK_THROWS_WITH_AS(CubicalComplex::validate(4, cells), doctest::Contains("MissingFace"),
                         Error);
}

TEST_CASE("validate rejects a degenerate tuple") {
    std::vector<Cube> cells{{0, {0}}, {0, {1}}, {0, {2}}, {0, {0, 1, 1, 2}}};
    CHECK_THROWS_WITH_AS(CubicalComplex::validate(3, cells), doctest::Contains("DegenerateCube"),
                         Error);
}

TEST_CASE("validate rejects duplicate cubes and dimension overflow") {
    std::vector<Cube> cells{{0, {0}}, {0, {1}}, {0, {0, 1}}, {0, {1, 0}}};
    CHECK_THROWS_AS(CubicalComplex::validate(2, cells), Error);

    // A 5-cube exceeds the default cap.
    std::vector<Cube> big;
    std::vector<VertexId> corners(32);
    for (int i = 0; i < 32; ++i) corners[i] = i;
    big.push_back({0, corners});
    CHECK_THROWS_WITH_AS(CubicalComplex::validate(32, big), doctest::Contains("DimensionExceeded"),
                         Error);
}

TEST_CASE("canonicalize descends to minimal carriers and is idempotent") {
    CubicalComplex X = CubicalComplex::validate(4, square_cells());
    const CubeId sq = 8;

    AmbientPoint interior{sq, {Rational(3, 10), Rational(2, 5)}};
    AmbientPoint ci = X.canonicalize(interior);
    CHECK(ci.cube == sq);
    CHECK(ci == X.canonicalize(ci));

    // (square, (1, 1/2)) lies on the edge {1,3}.
    AmbientPoint on_edge{sq, {Rational(1), Rational(1, 2)}};
    AmbientPoint ce = X.canonicalize(on_edge);
    CHECK(X.cubes[ce.cube].dim == 1);
    std::vector<VertexId> ev = X.cubes[ce.cube].corners;
    std::sort(ev.begin(), ev.end());
    CHECK(ev == std::vector<VertexId>{1, 3});
    CHECK(ce.coords.size() == 1);
    CHECK(ce.coords[0] == Rational(1, 2));
    CHECK(ce == X.canonicalize(ce));

    // (edge, (0)) is a vertex.
    AmbientPoint end{ce.cube, {Rational(0)}};
    AmbientPoint cv = X.canonicalize(end);
    CHECK(X.cubes[cv.cube].dim == 0);
    CHECK(cv.coords.empty());

    AmbientPoint bad{sq, {Rational(3, 2), Rational(0)}};
    CHECK_THROWS_WITH_AS(X.canonicalize(bad), doctest::Contains("CoordOutOfRange"), Error);
}

TEST_CASE("point equality via canonical forms across charts") {
    CubicalComplex X = make_named("lshape");
    // The shared edge between two squares: same point reached from both sides.
    // Find the two squares and their common edge.
    std::vector<CubeId> squares;
    for (CubeId c = 0; c < static_cast<CubeId>(X.cubes.size()); ++c)
        if (X.cubes[c].dim == 2) squares.push_back(c);
    REQUIRE(squares.size() == 3);
    CubeId shared = X.common_face(squares[0], squares[1]);
    REQUIRE(shared != kNoCube);
    CHECK(X.cubes[shared].dim == 1);

    auto from = [&](CubeId sq) {
        std::vector<Rational> x = X.coords_in(sq, AmbientPoint{shared, {Rational(1, 3)}});
        return X.canonicalize(AmbientPoint{sq, x});
    };
    CHECK(from(squares[0]) == from(squares[1]));
}

TEST_CASE("is_connected on subcomplexes") {
    CubicalComplex X = CubicalComplex::validate(4, square_cells());

    SubcomplexRef one_vertex = SubcomplexRef::from_cubes(X, {0});
    CHECK(is_connected(one_vertex));

    SubcomplexRef two_vertices = SubcomplexRef::from_cubes(X, {0, 1});
    CHECK_FALSE(is_connected(two_vertices));

    // Two edges sharing the corner vertex 3.
    SubcomplexRef two_edges = SubcomplexRef::from_cubes(X, {5, 7});
    CHECK(is_connected(two_edges));

    SubcomplexRef empty;
    empty.parent = &X;
    empty.member.assign(X.cubes.size(), 0);
    CHECK_THROWS_WITH_AS(is_connected(empty), doctest::Contains("EmptySubcomplex"), Error);
}

TEST_CASE("subcomplex closure completion reports added faces") {
    CubicalComplex X = CubicalComplex::validate(4, square_cells());
    int added = 0;
    SubcomplexRef W = SubcomplexRef::from_cubes(X, {8}, &added); // just the 2-cell
    CHECK(added == 8);
    CHECK(W.cube_ids.size() == 9);
}

TEST_CASE("complex JSON round trip and digest stability") {
    CubicalComplex X = make_named("lshape");
    nlohmann::json j = X.to_json();
    CubicalComplex Y = CubicalComplex::from_json(j);
    CHECK(Y.cell_count() == X.cell_count());
    CHECK(X.canonical_digest() == Y.canonical_digest());

    CHECK_THROWS_AS(CubicalComplex::from_json(nlohmann::json{{"vertices", 2}}), Error);
}

TEST_CASE("span_face reaches edges with correct endpoints") {
    CubicalComplex X = make_named("cube3");
    // Corner 0 of the 3-cube; axis j edge must join vertices 0 and 2^j.
    CubeId cube = kNoCube;
    for (CubeId c = 0; c < static_cast<CubeId>(X.cubes.size()); ++c)
        if (X.cubes[c].dim == 3) cube = c;
    REQUIRE(cube != kNoCube);
    for (int axis = 0; axis < 3; ++axis) {
        int ax[1] = {axis};
        SpanResult e = X.span_face(cube, 0, ax);
        CHECK(X.cubes[e.cell].dim == 1);
        CHECK(X.cubes[e.cell].corners[e.corner] == X.cubes[cube].corners[0]);
    }
}
