#include "doctest.h"

#include "cubecvx/generators.hpp"
#include "cubecvx/subdivision.hpp"

using namespace cubecvx;

TEST_CASE("subdividing an edge gives a 2-edge path") {
    CubicalComplex X = make_named("edge");
    Subdivision S = cubical_subdivision(X);
    CHECK(S.prime.cell_count(0) == 3);
    CHECK(S.prime.cell_count(1) == 2);
    CHECK(S.prime.metric_scale == doctest::Approx(0.5));
}

TEST_CASE("subdividing a square gives 4 squares, 9 vertices, 12 edges") {
    CubicalComplex X = make_named("square");
    Subdivision S = cubical_subdivision(X);
    CHECK(S.prime.cell_count(0) == 9);
    CHECK(S.prime.cell_count(1) == 12);
    CHECK(S.prime.cell_count(2) == 4);
}

TEST_CASE("subdividing the L-shape gives 12 squares and 21 vertices") {
    CubicalComplex X = make_named("lshape");
    Subdivision S = cubical_subdivision(X);
    CHECK(S.prime.cell_count(0) == 21);
    CHECK(S.prime.cell_count(1) == 32);
    CHECK(S.prime.cell_count(2) == 12);
}

TEST_CASE("subdivision count identity: 2^k subcubes per k-cube") {
    for (const char* name : {"square", "lshape", "cube3", "cube_boundary"}) {
        CubicalComplex X = make_named(name);
        Subdivision S = cubical_subdivision(X);
        for (int k = 0; k <= X.dim; ++k) {
            std::size_t carrier_dim_k = 0;
            for (CubeId c = 0; c < static_cast<CubeId>(S.prime.cubes.size()); ++c)
                if (S.prime.cubes[c].dim == k && X.cubes[S.carrier(c)].dim == k) ++carrier_dim_k;
            CHECK(carrier_dim_k == (std::size_t(1) << k) * X.cell_count(k));
        }
    }
}

TEST_CASE("subdivision point maps invert each other") {
    CubicalComplex X = make_named("lshape");
    Subdivision S = cubical_subdivision(X);
    std::vector<AmbientPoint> pts;
    for (CubeId c = 0; c < static_cast<CubeId>(X.cubes.size()); ++c) {
        if (X.cubes[c].dim != 2) continue;
        pts.push_back(X.canonicalize({c, {Rational(1, 3), Rational(2, 3)}}));
        pts.push_back(X.canonicalize({c, {Rational(1, 2), Rational(1, 5)}}));
        pts.push_back(X.canonicalize({c, {Rational(0), Rational(1, 2)}}));
    }
    for (const auto& p : pts) {
        AmbientPoint q = S.to_prime(p);
        AmbientPoint back = S.to_base(q);
        CHECK(back == p);
    }
    // And the other direction, from X'-vertices.
    for (VertexId v = 0; v < S.prime.vertex_count; ++v) {
        if (S.prime.vertex_cell[v] == kNoCube) continue;
        AmbientPoint q{S.prime.vertex_cell[v], {}};
        AmbientPoint p = S.to_base(q);
        CHECK(S.to_prime(p) == S.prime.canonicalize(q));
    }
}

TEST_CASE("carriers track the open cells of the base") {
    CubicalComplex X = make_named("square");
    Subdivision S = cubical_subdivision(X);
    for (CubeId c = 0; c < static_cast<CubeId>(S.prime.cubes.size()); ++c) {
        CubeId f = S.carrier(c);
        CHECK(S.prime.cubes[c].dim <= X.cubes[f].dim);
    }
}
