#include "doctest.h"

#include "cubecvx/generators.hpp"
#include "cubecvx/linkmetric.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace cubecvx;

namespace {

constexpr double kPi = std::numbers::pi;

SphericalComplex make_spherical(int n, const std::vector<std::vector<int>>& tops) {
    SphericalComplex L;
    for (int i = 0; i < n; ++i) {
        L.dirs.push_back({i, 0});
        L.dir_ids.push_back(i);
    }
    for (const auto& t : tops) {
        SphericalComplex::RawTop raw;
        raw.verts = t;
        std::sort(raw.verts.begin(), raw.verts.end());
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

} // namespace

TEST_CASE("vertex-pair link distances: 0, pi/2, capped pi") {
    SphericalComplex P = make_spherical(3, {{0, 1}, {1, 2}});
    CHECK(link_path_distance(P, LinkPoint::vertex(0), LinkPoint::vertex(0)) == 0.0);
    CHECK(link_path_distance(P, LinkPoint::vertex(0), LinkPoint::vertex(1)) ==
          doctest::Approx(kPi / 2));
    // Joined by a 2-chain with no direct edge: length pi.
    CHECK(link_path_distance(P, LinkPoint::vertex(0), LinkPoint::vertex(2)) ==
          doctest::Approx(kPi));
}

TEST_CASE("cone distance formula") {
    SphericalComplex L = make_spherical(3, {{0, 1}, {1, 2}});
    // d = pi/2 at unit radii: sqrt(2).
    CHECK(cone_distance(L, 1.0, LinkPoint::vertex(0), 1.0, LinkPoint::vertex(1)) ==
          doctest::Approx(std::sqrt(2.0)));
    // Cone point: distance is the other radius.
    CHECK(cone_distance(L, 0.7, LinkPoint::vertex(0), 0.0, LinkPoint::vertex(2)) ==
          doctest::Approx(0.7));
    // Link distance >= pi caps at pi: t + t'.
    CHECK(cone_distance(L, 1.0, LinkPoint::vertex(0), 1.0, LinkPoint::vertex(2)) ==
          doctest::Approx(2.0));
}

TEST_CASE("cone distance is symmetric and satisfies the triangle inequality on a flag link") {
    // Two triangles sharing an edge: flag, CAT(1), so the cone is CAT(0).
    SphericalComplex L = make_spherical(4, {{0, 1, 2}, {1, 2, 3}});
    LinkMetric lm(L);
    std::mt19937_64 rng(7);
    auto random_point = [&]() {
        const auto& top = L.raw[rng() % L.raw.size()].verts;
        std::vector<double> w(top.size());
        double norm = 0;
        for (auto& x : w) {
            x = 0.05 + (rng() % 1000) / 1000.0;
            norm += x * x;
        }
        LinkPoint p;
        p.support = top;
        for (double x : w) p.w.push_back(x / std::sqrt(norm));
        return std::make_pair(0.1 + (rng() % 900) / 1000.0, p);
    };
    double worst = 0;
    for (int it = 0; it < 1000; ++it) {
        auto [ta, a] = random_point();
        auto [tb, b] = random_point();
        auto [tc, c] = random_point();
        double ab = cone_distance(L, ta, a, tb, b, &lm);
        double ba = cone_distance(L, tb, b, ta, a, &lm);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
        double ac = cone_distance(L, ta, a, tc, c, &lm);
        double cb = cone_distance(L, tc, c, tb, b, &lm);
        worst = std::max(worst, ab - (ac + cb));
    }
    // Allow the lattice approximation error of the link metric.
    CHECK(worst <= 0.02);
}

TEST_CASE("refinement-graph distance matches the unfolded arc across a shared edge") {
    SphericalComplex L = make_spherical(4, {{0, 1, 2}, {1, 2, 3}});
    LinkMetric lm(L);
    const double c = 1.0 / std::sqrt(3.0);
    LinkPoint p{{0, 1, 2}, {c, c, c}};
    LinkPoint q{{1, 2, 3}, {c, c, c}};
    // Unfolding the two right-angled simplices along {1,2} is flat, so the
    // distance is the arc of the reflected embedding: arccos(1/3).
    CHECK(lm.distance(p, q) == doctest::Approx(std::acos(1.0 / 3.0)).epsilon(0.015));
    // Same-simplex pairs use the exact chord.
    LinkPoint b12{{1, 2}, {std::sqrt(0.5), std::sqrt(0.5)}};
    CHECK(lm.distance(p, b12) == doctest::Approx(std::acos(2 * c * std::sqrt(0.5))).epsilon(1e-9));
}

TEST_CASE("distance to a subcomplex vanishes on it and grows off it") {
    SphericalComplex L = make_spherical(3, {{0, 1, 2}});
    SphericalComplex K;
    K.dirs = L.dirs;
    K.dir_ids = {0, 1};
    K.simplices.insert({0});
    K.simplices.insert({1});
    K.simplices.insert({0, 1});
    LinkMetric lm(L);
    auto field = lm.distance_to(K);
    int on = lm.locate(LinkPoint{{0, 1}, {std::sqrt(0.5), std::sqrt(0.5)}});
    CHECK(field[on] == doctest::Approx(0.0));
    int off = lm.locate(LinkPoint::vertex(2));
    CHECK(field[off] == doctest::Approx(kPi / 2).epsilon(0.02));
}

TEST_CASE("development of a through-vertex path is a half great circle") {
    SphericalComplex P = make_spherical(3, {{0, 1}, {1, 2}});
    std::vector<LinkPoint> samples{LinkPoint::vertex(0), LinkPoint::vertex(1),
                                   LinkPoint::vertex(2)};
    DevelopedPath dev = develop_in_hemisphere(P, 1, samples);
    CHECK(dev.length == doctest::Approx(kPi));
    CHECK(dev.local_geodesic);
    CHECK(dev.points.front()[0] == doctest::Approx(1.0));
    CHECK(dev.points.back()[0] == doctest::Approx(-1.0));
}

TEST_CASE("development of a single-simplex path is the exact arc") {
    SphericalComplex L = make_spherical(3, {{0, 1, 2}});
    const double c = 1.0 / std::sqrt(3.0);
    LinkPoint mid{{0, 1, 2}, {c, c, c}};
    LinkPoint edge{{1, 2}, {std::sqrt(0.5), std::sqrt(0.5)}};
    std::vector<LinkPoint> samples{LinkPoint::vertex(1), mid, edge};
    // Both segments live in the simplex {0,1,2}, apex 0 in the closed star.
    DevelopedPath dev = develop_in_hemisphere(L, 0, samples);
    double exact = std::acos(c) + std::acos(c * 2 * std::sqrt(0.5));
    CHECK(dev.length == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("development flags a bent path") {
    SphericalComplex P = make_spherical(3, {{0, 1}, {1, 2}});
    LinkPoint m01{{0, 1}, {std::sqrt(0.5), std::sqrt(0.5)}};
    LinkPoint m12{{1, 2}, {std::sqrt(0.5), std::sqrt(0.5)}};
    std::vector<LinkPoint> samples{m01, LinkPoint::vertex(1), m12};
    DevelopedPath dev = develop_in_hemisphere(P, 1, samples);
    CHECK(dev.length == doctest::Approx(kPi / 2));
    CHECK(dev.local_geodesic); // through-apex continuation is straight
    // A genuinely bent route: out along the edge and back.
    std::vector<LinkPoint> bent{m01, LinkPoint::vertex(0), m01};
    DevelopedPath dev2 = develop_in_hemisphere(P, 1, bent);
    CHECK_FALSE(dev2.local_geodesic);
}

TEST_CASE("development input validation") {
    SphericalComplex P = make_spherical(4, {{0, 1}, {1, 2}, {2, 3}});
    std::vector<LinkPoint> outside{LinkPoint::vertex(2), LinkPoint::vertex(3)};
    CHECK_THROWS_WITH_AS(develop_in_hemisphere(P, 0, outside),
                         doctest::Contains("NotInClosedStar"), Error);
    std::vector<LinkPoint> split{LinkPoint::vertex(0), LinkPoint::vertex(2)};
    CHECK_THROWS_WITH_AS(develop_in_hemisphere(P, 1, split),
                         doctest::Contains("InconsistentCarriers"), Error);
}

TEST_CASE("star crossings develop to length at least pi") {
    // Two 3-cubes sharing a square: links of shared-face vertices are fans of
    // two triangles.
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::GridRegion;
    spec.dims = {2, 1, 1};
    CubicalComplex X = generate(spec);
    int with_fans = 0, crossings = 0;
    for (VertexId v = 0; v < X.vertex_count; ++v) {
        SphericalComplex L = link(X, v);
        for (int dir : L.dir_ids) {
            auto cs = make_star_crossings(L, dir, 3, 17);
            if (cs.empty()) continue;
            ++with_fans;
            for (const auto& c : cs) {
                DevelopedPath dev = develop_in_hemisphere(L, c.v_star, c.samples);
                ++crossings;
                CHECK(dev.length >= kPi - 1e-6);
                CHECK(dev.local_geodesic);
                // Endpoints land on the simplicial link of the star vertex.
                CHECK(c.samples.front().weight_of(c.v_star) == doctest::Approx(0.0));
                CHECK(c.samples.back().weight_of(c.v_star) == doctest::Approx(0.0));
            }
        }
    }
    CHECK(with_fans > 0);
    CHECK(crossings > 0);
}

TEST_CASE("link escape segment: exact depth and endpoints in the boundary") {
    SphericalComplex L = make_spherical(3, {{0, 1, 2}});
    LinkEscape esc = make_link_escape(L, {0, 1, 2});
    CHECK(esc.mid_depth == doctest::Approx(std::asin(0.5))); // pi/6 for a 2-simplex
    CHECK(esc.samples.front().support == std::vector<int>{0});
    CHECK(esc.samples.back().support == std::vector<int>{1, 2});
    // For a 1-simplex witness the midpoint depth is pi/4.
    SphericalComplex E = make_spherical(2, {{0, 1}});
    LinkEscape esc1 = make_link_escape(E, {0, 1});
    CHECK(esc1.mid_depth == doctest::Approx(kPi / 4));
}

TEST_CASE("radial coordinates invert the exponential at a corner") {
    CubicalComplex X = make_named("square");
    SphericalComplex L = link(X, 0);
    CubeId sq = kNoCube;
    for (CubeId c = 0; c < static_cast<CubeId>(X.cubes.size()); ++c)
        if (X.cubes[c].dim == 2) sq = c;
    AmbientPoint p = X.canonicalize({sq, {Rational(3, 10), Rational(2, 5)}});
    RadialCoord rc = radial_coordinates(X, L, 0, p);
    CHECK(rc.t == doctest::Approx(std::sqrt(0.09 + 0.16)));
    CHECK(rc.u.support.size() == 2);
    CHECK(rc.u.w[0] * rc.u.w[0] + rc.u.w[1] * rc.u.w[1] == doctest::Approx(1.0));
}
