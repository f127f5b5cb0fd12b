#pragma once

#include "cubecvx/complex.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <set>

namespace cubecvx {

/// Direction at a base vertex: an incident edge end.
struct LinkVertex {
    CubeId edge = kNoCube;
    std::uint8_t end = 0; // corner of the edge cell equal to the base vertex

    bool operator==(const LinkVertex& o) const { return edge == o.edge && end == o.end; }
    bool operator<(const LinkVertex& o) const {
        return edge != o.edge ? edge < o.edge : end < o.end;
    }
};

/// Finite all-right spherical simplicial complex, as arising from vertex
/// links: one direction vertex per incident edge end, one (k-1)-simplex per
/// k-cube at the base vertex, edges implicitly of length pi/2.
///
/// Direction ids live in the namespace of the ambient link, so a restricted
/// link shares ids with its parent and fullness checks compare directly.
struct SphericalComplex {
    VertexId base_vertex = -1;
    std::vector<LinkVertex> dirs;  // global direction table (id-indexed)
    std::vector<int> dir_ids;      // ids present in this complex, sorted

    struct RawTop {
        std::vector<int> verts; // sorted dir ids
        CubeId source_cube = kNoCube;
        std::uint8_t source_corner = 0;
    };
    std::vector<RawTop> raw;              // one entry per (cube, corner) at the base vertex
    std::set<std::vector<int>> simplices; // downward closure, sorted id vectors, sizes >= 1

    bool simplicial = true;
    std::optional<std::pair<RawTop, RawTop>> nonsimplicial_witness;

    bool has_vertex(int id) const {
        return std::binary_search(dir_ids.begin(), dir_ids.end(), id);
    }
    bool has_simplex(const std::vector<int>& sorted) const {
        return sorted.size() == 1 ? has_vertex(sorted[0]) : simplices.count(sorted) > 0;
    }
    bool adjacent(int a, int b) const {
        std::vector<int> e{std::min(a, b), std::max(a, b)};
        return simplices.count(e) > 0;
    }
    int max_simplex_dim() const;
    std::vector<std::vector<int>> top_simplices() const;

    nlohmann::json to_json() const;
};

/// Geometric link of vertex v in X. Works on relaxed complexes too, where the
/// result may be non-simplicial (detected and witnessed, not rejected).
/// Errors: NotAVertex.
SphericalComplex link(const CubicalComplex& X, VertexId v);

/// Sub-spherical-complex of L spanned by the cubes of W at the base vertex.
/// Errors: VertexNotInSubcomplex.
SphericalComplex restrict_link(const SphericalComplex& L, const SubcomplexRef& W);

struct FlagResult {
    bool flag = false;
    bool simplicial = true;
    std::vector<int> empty_clique; // minimal witness when !flag (and simplicial)
    nlohmann::json to_json(const SphericalComplex& L) const;
};

/// Gromov flag test: every clique of the 1-skeleton spans a simplex. On
/// failure returns a minimal empty clique. Non-simplicial input fails with
/// the duplicate-simplex witness instead.
FlagResult is_flag(const SphericalComplex& L);

struct FullResult {
    bool full = false;
    std::vector<int> witness; // minimal simplex of L with vertices in K, not in K
    nlohmann::json to_json(const SphericalComplex& L) const;
};

/// Fullness of K in L: every simplex of L on K-vertices lies in K.
/// Errors: NotASubcomplex.
FullResult is_full(const SphericalComplex& K, const SphericalComplex& L);

/// Lazily-built cache of vertex links of one complex; thread-safe fill.
class LinkTable {
public:
    explicit LinkTable(const CubicalComplex& X);
    const SphericalComplex& at(VertexId v) const;
    const CubicalComplex& complex() const { return *X_; }

private:
    const CubicalComplex* X_;
    mutable std::vector<std::optional<SphericalComplex>> links_;
    mutable std::unique_ptr<std::mutex> fill_mutex_;
};

} // namespace cubecvx
