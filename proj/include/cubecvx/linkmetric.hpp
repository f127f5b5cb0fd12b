#pragma once

#include "cubecvx/links.hpp"

#include <array>
#include <unordered_map>

namespace cubecvx {

/// Point of a spherical complex: unit vector supported on one simplex.
/// support is sorted; weights are nonnegative with unit L2 norm.
struct LinkPoint {
    std::vector<int> support;
    std::vector<double> w;

    static LinkPoint vertex(int dir_id) { return {{dir_id}, {1.0}}; }
    double weight_of(int dir_id) const;
};

/// Numerical length-metric approximator for all-right spherical complexes:
/// a lattice refinement graph with intra-simplex chords of exact arc length.
/// Vertex-pair distances have an exact shortcut (see vertex_pair_distance);
/// the graph serves arbitrary points and distance-to-subcomplex fields.
class LinkMetric {
public:
    /// m lattice steps per simplex edge; stencil = intra-simplex chord radius.
    LinkMetric(const SphericalComplex& L, int m = 16, int stencil = 4);

    const SphericalComplex& complex() const { return *L_; }
    std::size_t node_count() const { return node_support_.size(); }

    /// Nearest lattice node to a point (exact for lattice-aligned points).
    int locate(const LinkPoint& p) const;
    LinkPoint point_of(int node) const;
    /// Node membership in a subcomplex K: the node's support is a K-simplex.
    bool node_in(int node, const SphericalComplex& K) const;

    struct PathResult {
        double length = 0;
        std::vector<int> nodes;
        bool reachable = false;
    };
    PathResult shortest(int src, int dst) const;

    /// Graph distance between arbitrary points with exact-chord end
    /// correction (virtual sources over the snap neighborhoods).
    double distance(const LinkPoint& a, const LinkPoint& b) const;

    /// Distance field from all nodes lying in K.
    std::vector<double> distance_to(const SphericalComplex& K) const;

    int lattice_m() const { return m_; }

private:
    const SphericalComplex* L_;
    int m_, stencil_;
    std::vector<std::vector<int>> node_support_;
    std::vector<std::vector<int>> node_lambda_;
    std::unordered_map<std::size_t, std::vector<int>> node_index_;
    std::vector<std::size_t> adj_off_;
    std::vector<int> adj_nbr_;
    std::vector<double> adj_w_;

    int find_node(const std::vector<int>& support, const std::vector<int>& lambda) const;
    std::vector<double> field(const std::vector<std::pair<int, double>>& sources) const;
    std::vector<std::pair<int, double>> snap_sources(const LinkPoint& p) const;
    friend struct LinkMetricTester;
};

/// Exact d^pi between two vertices of an all-right complex: 0 when equal,
/// pi/2 when adjacent, else pi (non-adjacent vertices are at distance >= pi).
double vertex_pair_distance(const SphericalComplex& L, int a, int b);

/// Length-metric distance between link points, capped at pi for reporting.
/// Exact for vertex pairs; lattice-graph approximation otherwise (lm may be
/// null, in which case a metric is built on demand).
double link_path_distance(const SphericalComplex& L, const LinkPoint& a, const LinkPoint& b,
                          const LinkMetric* lm = nullptr);

/// Euclidean cone metric over L: d(ty, t'y')^2 = t^2 + t'^2 - 2tt' cos(d^pi).
double cone_distance(const SphericalComplex& L, double t, const LinkPoint& y, double t2,
                     const LinkPoint& y2, const LinkMetric* lm = nullptr);

/// Path through the closed star of v_star developed onto the unit 2-sphere,
/// apex at the north pole: polar distances and segment lengths are preserved
/// and successive segments are laid out counterclockwise seen from the pole.
struct DevelopedPath {
    std::vector<std::array<double, 3>> points;
    double length = 0;
    bool local_geodesic = false;
    double max_defect = 0;
    nlohmann::json to_json() const;
};

/// Errors: NotInClosedStar, InconsistentCarriers.
DevelopedPath develop_in_hemisphere(const SphericalComplex& L, int v_star,
                                    std::span<const LinkPoint> samples);

/// A constructed local geodesic crossing the open star of v_star with both
/// endpoints on the simplicial link; developed length is pi.
struct StarCrossing {
    int v_star = -1;
    std::vector<LinkPoint> samples;
    std::vector<int> sector_fan; // the dir sequence a_0..a_n around v_star (2-dim case)
};

/// Enumerates crossing local geodesics through st(v_star): through-vertex
/// paths for 1-dimensional stars, transversal great-circle pullbacks for fans
/// of 2-simplices. Deterministic for a fixed seed.
std::vector<StarCrossing> make_star_crossings(const SphericalComplex& L, int v_star,
                                              int max_count, std::uint64_t seed);

/// The escaping segment of a fullness failure: for a minimal witness simplex
/// sigma with all vertices in K and boundary in K, the arc from sigma's first
/// vertex to the barycenter direction of the opposite face leaves K; its
/// distance to K is exactly arcsin(min coordinate).
struct LinkEscape {
    std::vector<int> sigma;
    int apex = -1;
    std::vector<int> tau;
    std::vector<LinkPoint> samples; // along the arc, s in [0, pi/2]
    double mid_depth = 0;           // exact distance of the arc midpoint to the boundary of sigma
};

LinkEscape make_link_escape(const SphericalComplex& L, const std::vector<int>& minimal_witness,
                            int sample_count = 17);

/// Radius and link direction of an ambient point whose carrier cube contains
/// v; exact inverse of "walk distance t from v in direction u".
struct RadialCoord {
    double t = 0;
    LinkPoint u;
};

RadialCoord radial_coordinates(const CubicalComplex& X, const SphericalComplex& L, VertexId v,
                               const AmbientPoint& p);

} // namespace cubecvx
