#include "doctest.h"

#include "cubecvx/generators.hpp"
#include "cubecvx/oracle.hpp"

#include <cmath>
#include <random>

using namespace cubecvx;

TEST_CASE("grid counts: single edge at pitch 1/2") {
    CubicalComplex X = make_named("edge");
    GridGraph G = GridGraph::build(X, 2);
    CHECK(G.node_count() == 3);
    CHECK(G.edge_count() == 2);
}

TEST_CASE("grid counts: square at pitch 1/2 has 9 nodes and diagonal chords") {
    CubicalComplex X = make_named("square");
    GridGraph G = GridGraph::build(X, 2);
    CHECK(G.node_count() == 9);
    CHECK(G.edge_count() == 20); // 12 axis edges + 8 diagonals
    AmbientPoint corner{X.vertex_cell[0], {}};
    AmbientPoint center = X.canonicalize({8, {Rational(1, 2), Rational(1, 2)}});
    int a = G.snap(corner), b = G.snap(center);
    auto sp = G.shortest(a, b);
    CHECK(sp.length == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(sp.nodes.size() == 2);
}

TEST_CASE("grid counts: L-shape at pitch 1/4") {
    CubicalComplex X = make_named("lshape");
    GridGraph G = GridGraph::build(X, 4);
    CHECK(G.node_count() == 65); // lattice points of the L domain
}

TEST_CASE("oracle distance: square diagonal is exact on the grid") {
    CubicalComplex X = make_named("square");
    GridGraph G = GridGraph::build(X, 8);
    AmbientPoint a{X.vertex_cell[0], {}};
    AmbientPoint b{X.vertex_cell[3], {}};
    DistanceResult res = oracle_distance(G, a, b);
    CHECK(res.length == doctest::Approx(std::sqrt(2.0)));
    CHECK(res.snap_a == 0.0);
    CHECK(res.path.length(X) == doctest::Approx(res.length));
    CHECK(oracle_distance(G, a, a).length == 0.0);
}

TEST_CASE("oracle distance: L-shape geodesic bends at the reflex vertex") {
    CubicalComplex X = make_named("lshape");
    GridGraph G = GridGraph::build(X, 8);
    AmbientPoint a{X.vertex_cell[7], {}}; // (1,2)
    AmbientPoint b{X.vertex_cell[5], {}}; // (2,1)
    DistanceResult res = oracle_distance(G, a, b);
    CHECK(res.length == doctest::Approx(2.0).epsilon(0.02));
    bool through_reflex = false;
    for (const auto& p : res.path.pts)
        if (p.cube == X.vertex_cell[3]) through_reflex = true;
    CHECK(through_reflex);
}

TEST_CASE("polypath length equals the grid length and never beats the metric") {
    CubicalComplex X = make_named("lshape");
    GridGraph G = GridGraph::build(X, 8);
    std::mt19937_64 rng(3);
    for (int it = 0; it < 20; ++it) {
        int a = static_cast<int>(rng() % G.node_count());
        int b = static_cast<int>(rng() % G.node_count());
        auto sp = G.shortest(a, b);
        REQUIRE(sp.reachable);
        PolyPath path = G.path_of(sp.nodes);
        CHECK(path.length(X) == doctest::Approx(sp.length));
        PolyPath refined = straighten(X, path);
        CHECK(refined.length(X) <= sp.length + 1e-9);
    }
}

TEST_CASE("straighten pulls a zigzag across one square to the diagonal") {
    CubicalComplex X = make_named("square");
    CubeId sq = 8;
    PolyPath zig;
    auto pf = [&](double x, double y) { return PointF{sq, {x, y}}; };
    zig.pts = {pf(0, 0), pf(0.25, 0.5), pf(0.5, 0.25), pf(0.75, 0.75), pf(1, 1)};
    zig.seg_cube = {sq, sq, sq, sq};
    PolyPath out = straighten(X, zig);
    CHECK(out.length(X) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("straighten converges to the bent L-shape geodesic of length 2") {
    CubicalComplex X = make_named("lshape");
    GridGraph G = GridGraph::build(X, 4);
    AmbientPoint a{X.vertex_cell[7], {}};
    AmbientPoint b{X.vertex_cell[5], {}};
    DistanceResult res = oracle_distance(G, a, b);
    PolyPath refined = straighten(X, res.path);
    CHECK(refined.length(X) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("straighten leaves a straight segment unchanged") {
    CubicalComplex X = make_named("square");
    CubeId sq = 8;
    PolyPath seg;
    seg.pts = {PointF{sq, {0.1, 0.1}}, PointF{sq, {0.5, 0.5}}, PointF{sq, {0.9, 0.9}}};
    seg.seg_cube = {sq, sq};
    double before = seg.length(X);
    PolyPath out = straighten(X, seg);
    CHECK(out.length(X) == doctest::Approx(before).epsilon(1e-9));
}

TEST_CASE("refined oracle distance matches in-cube Euclidean distance") {
    CubicalComplex X = make_named("cube3");
    GridGraph G = GridGraph::build(X, 8);
    CubeId cube = kNoCube;
    for (CubeId c = 0; c < static_cast<CubeId>(X.cubes.size()); ++c)
        if (X.cubes[c].dim == 3) cube = c;
    std::mt19937_64 rng(5);
    for (int it = 0; it < 10; ++it) {
        std::vector<Rational> xa, xb;
        for (int j = 0; j < 3; ++j) {
            xa.push_back(Rational(static_cast<long long>(rng() % 9), 8));
            xb.push_back(Rational(static_cast<long long>(rng() % 9), 8));
        }
        AmbientPoint a = X.canonicalize({cube, xa});
        AmbientPoint b = X.canonicalize({cube, xb});
        double euclid = 0;
        for (int j = 0; j < 3; ++j) {
            double d = to_double(xa[j] - xb[j]);
            euclid += d * d;
        }
        euclid = std::sqrt(euclid);
        double refined = refined_distance(G, a, b);
        CHECK(refined <= euclid + 1e-6);
        CHECK(refined == doctest::Approx(euclid).epsilon(1e-6));
    }
}

TEST_CASE("monotone refinement: halving the pitch never lengthens distances") {
    CubicalComplex X = make_named("lshape");
    GridGraph G8 = GridGraph::build(X, 8);
    GridGraph G16 = GridGraph::build(X, 16);
    std::mt19937_64 rng(11);
    for (int it = 0; it < 15; ++it) {
        int a = static_cast<int>(rng() % G8.node_count());
        int b = static_cast<int>(rng() % G8.node_count());
        const AmbientPoint& pa = G8.node_point(a);
        const AmbientPoint& pb = G8.node_point(b);
        double d8 = oracle_distance(G8, pa, pb).length;
        double d16 = oracle_distance(G16, pa, pb).length;
        CHECK(d16 <= d8 + 1e-12);
    }
}

TEST_CASE("grid metric is symmetric and satisfies the triangle inequality") {
    CubicalComplex X = make_named("lshape");
    GridGraph G = GridGraph::build(X, 4);
    std::mt19937_64 rng(13);
    for (int it = 0; it < 10; ++it) {
        int a = static_cast<int>(rng() % G.node_count());
        int b = static_cast<int>(rng() % G.node_count());
        int m = static_cast<int>(rng() % G.node_count());
        double ab = G.shortest(a, b).length;
        double ba = G.shortest(b, a).length;
        CHECK(ab == doctest::Approx(ba));
        double am = G.shortest(a, m).length;
        double mb = G.shortest(m, b).length;
        CHECK(ab <= am + mb + 1e-12);
    }
}

TEST_CASE("ball-cone isometry on the square corner and the reflex corner") {
    {
        CubicalComplex X = make_named("square");
        nlohmann::json rep = ball_cone_isometry_test(X, 0, 100, 16, 42);
        CHECK(rep.at("max_deviation").get<double>() <= 0.05);
        CHECK(rep.at("max_radial_deviation").get<double>() <= 1e-6);
    }
    {
        CubicalComplex X = make_named("lshape");
        nlohmann::json rep = ball_cone_isometry_test(X, 3, 100, 16, 42);
        CHECK(rep.at("max_deviation").get<double>() <= 0.05);
    }
}

TEST_CASE("ball-cone example: edge points at t = 0.4 around the square corner") {
    CubicalComplex X = make_named("square");
    GridGraph G = GridGraph::build(X, 10);
    std::vector<AmbientPoint> pts;
    for (CubeId c = 0; c < static_cast<CubeId>(X.cubes.size()); ++c) {
        if (X.cubes[c].dim != 1) continue;
        const auto& e = X.cubes[c].corners;
        if (e[0] == 0) pts.push_back(X.canonicalize({c, {Rational(2, 5)}}));
        else if (e[1] == 0) pts.push_back(X.canonicalize({c, {Rational(3, 5)}}));
    }
    REQUIRE(pts.size() == 2);
    // Link distance pi/2: the cone gives 0.4 * sqrt(2).
    double d = refined_distance(G, pts[0], pts[1]);
    CHECK(d == doctest::Approx(0.4 * std::sqrt(2.0)).epsilon(1e-6));
    // Radial distances are exact.
    AmbientPoint corner{X.vertex_cell[0], {}};
    CHECK(refined_distance(G, pts[0], corner) == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("reflex directions at capped link distance give radial sums") {
    // Points on the two outer edges at the L reflex vertex: link distance is
    // 3*pi/2, capped at pi, so the oracle distance is t + t'.
    CubicalComplex X = make_named("lshape");
    GridGraph G = GridGraph::build(X, 10);
    AmbientPoint p1, p2;
    for (CubeId c = 0; c < static_cast<CubeId>(X.cubes.size()); ++c) {
        if (X.cubes[c].dim != 1) continue;
        std::vector<VertexId> v = X.cubes[c].corners;
        std::sort(v.begin(), v.end());
        if (v == std::vector<VertexId>{3, 5})
            p1 = X.canonicalize({c, {X.cubes[c].corners[0] == 3 ? Rational(3, 10) : Rational(7, 10)}});
        if (v == std::vector<VertexId>{3, 7})
            p2 = X.canonicalize({c, {X.cubes[c].corners[0] == 3 ? Rational(2, 5) : Rational(3, 5)}});
    }
    double d = refined_distance(G, p1, p2);
    CHECK(d == doctest::Approx(0.3 + 0.4).epsilon(1e-6));
}

TEST_CASE("grid construction caps and unreachable pairs") {
    CubicalComplex X = make_named("cube3");
    CHECK_THROWS_WITH_AS(GridGraph::build(X, 64, 1000), doctest::Contains("TooFine"), Error);

    std::vector<Cube> cells;
    for (int base : {0, 4}) {
        for (int i = 0; i < 4; ++i) cells.push_back({0, {base + i}});
        cells.push_back({0, {base + 0, base + 1}});
        cells.push_back({0, {base + 2, base + 3}});
        cells.push_back({0, {base + 0, base + 2}});
        cells.push_back({0, {base + 1, base + 3}});
        cells.push_back({0, {base + 0, base + 1, base + 2, base + 3}});
    }
    CubicalComplex Y = CubicalComplex::validate(8, cells);
    GridGraph G = GridGraph::build(Y, 2);
    AmbientPoint a{Y.vertex_cell[0], {}};
    AmbientPoint b{Y.vertex_cell[4], {}};
    CHECK_THROWS_WITH_AS(oracle_distance(G, a, b), doctest::Contains("Unreachable"), Error);
}

TEST_CASE("weak convexity comparison at oracle precision") {
    // d(a,b) <= d(a,m) + d(m,b) <= d(a,b) + 2*eps(h) for path midpoints m.
    CubicalComplex X = make_named("lshape");
    GridGraph G = GridGraph::build(X, 8);
    std::mt19937_64 rng(23);
    const double eps = 0.12; // generous stencil dilation bound, dim 2
    for (int it = 0; it < 10; ++it) {
        int a = static_cast<int>(rng() % G.node_count());
        int b = static_cast<int>(rng() % G.node_count());
        auto sp = G.shortest(a, b);
        REQUIRE(sp.reachable);
        int m = sp.nodes[sp.nodes.size() / 2];
        double am = G.shortest(a, m).length;
        double mb = G.shortest(m, b).length;
        CHECK(sp.length <= am + mb + 1e-12);
        CHECK(am + mb <= sp.length + 2 * eps + 1e-12);
    }
}
