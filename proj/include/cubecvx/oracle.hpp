#pragma once

#include "cubecvx/complex.hpp"
#include "cubecvx/links.hpp"
#include "cubecvx/linkmetric.hpp"

#include <unordered_map>
#include <unordered_set>

namespace cubecvx {

/// Piecewise-linear path: one segment per cube, both segment endpoints lying
/// in that cube. Lengths are reported in metric units.
struct PolyPath {
    std::vector<PointF> pts;
    std::vector<CubeId> seg_cube;

    double length(const CubicalComplex& X) const;
    nlohmann::json to_json(const CubicalComplex& X) const;
};

/// Lattice graph over a complex: nodes at spacing 1/m inside every cube,
/// identified across shared faces via canonical points; intra-cube edges over
/// the full 3^k-1 neighborhood with exact Euclidean weights.
class GridGraph {
public:
    static GridGraph build(const CubicalComplex& X, int m, std::size_t node_cap = 6'000'000);

    const CubicalComplex& complex() const { return *X_; }
    int lattice_m() const { return m_; }
    double pitch() const { return X_->metric_scale / m_; } // physical pitch
    std::size_t node_count() const { return node_point_.size(); }
    std::size_t edge_count() const { return nbr_.size() / 2; }
    bool dim_warning() const { return dim_warning_; }

    const AmbientPoint& node_point(int id) const { return node_point_[id]; }
    CubeId node_cell(int id) const { return node_point_[id].cube; }
    PointF node_pointf(int id) const;

    /// Nearest grid node (coordinates rounded per axis). Reports the snap
    /// distance, at most pitch * sqrt(dim) / 2.
    int snap(const AmbientPoint& p, double* snap_dist = nullptr) const;
    int node_of(const AmbientPoint& canonical) const; // -1 when not a node

    struct ShortestResult {
        double length = 0;
        std::vector<int> nodes;
        bool reachable = false;
    };
    ShortestResult shortest(int src, int dst) const;

    /// Distance field from a node set (multi-source Dijkstra).
    std::vector<double> field(const std::vector<int>& sources) const;

    /// Nodes whose canonical carrier lies in W.
    std::vector<int> nodes_in(const SubcomplexRef& W) const;

    PolyPath path_of(const std::vector<int>& nodes) const;

private:
    const CubicalComplex* X_ = nullptr;
    int m_ = 1;
    bool dim_warning_ = false;
    std::vector<AmbientPoint> node_point_;
    std::unordered_map<AmbientPoint, int, AmbientPointHash> index_;
    std::vector<std::size_t> off_;
    std::vector<int> nbr_;
    std::vector<double> w_;
    std::vector<CubeId> ecube_;
};

struct DistanceResult {
    double length = 0;      // grid shortest-path length, metric units
    PolyPath path;
    double snap_a = 0, snap_b = 0;
    int node_a = -1, node_b = -1;
};

/// Grid distance between two points (snapped to nodes).
/// Errors: Unreachable.
DistanceResult oracle_distance(const GridGraph& G, const AmbientPoint& a, const AmbientPoint& b);

/// Iterative local shortening: each interior breakpoint moves to the best
/// point of the common face of its neighboring segment cubes. Length is
/// non-increasing; stops when the improvement drops below 1e-9 or at the
/// iteration cap.
PolyPath straighten(const CubicalComplex& X, PolyPath path, int max_iterations = 200);

/// Grid distance refined by straightening; the pair used by calibrated
/// checks (single-cube pairs become exact up to the optimizer tolerance).
double refined_distance(const GridGraph& G, const AmbientPoint& a, const AmbientPoint& b,
                        PolyPath* out_path = nullptr);

/// Compares oracle distances inside B(v, 1/2) with the cone metric over
/// Lk(v): samples lattice pairs, reports max/mean deviation. sample_m picks
/// the lattice the sample points are drawn from (must divide m; 0 = m), so
/// runs at different pitches can share their sample set.
nlohmann::json ball_cone_isometry_test(const CubicalComplex& X, VertexId v, int samples, int m,
                                       std::uint64_t seed, int sample_m = 0);

} // namespace cubecvx
