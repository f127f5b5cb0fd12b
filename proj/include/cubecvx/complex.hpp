#pragma once

#include "cubecvx/errors.hpp"
#include "cubecvx/util.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace cubecvx {

using CubeId = std::int32_t;
using VertexId = std::int32_t;
inline constexpr CubeId kNoCube = -1;

/// One cell: a combinatorial unit cube given by its 2^dim corner vertices.
/// Corner index i encodes binary coordinates, bit j of i = coordinate j.
struct Cube {
    int dim = 0;
    std::vector<VertexId> corners;
};

/// Embedding of a codimension-1 face cell into its parent cube.
/// corner_of_parent[m] is the parent corner index matching corner m of the
/// face cell; par_axis/par_flip give the induced affine chart: face
/// coordinate u corresponds to parent axis par_axis[u], reversed when
/// par_flip[u] is set.
struct FaceEmbed {
    CubeId cell = kNoCube;
    std::vector<std::uint8_t> corner_of_parent;
    std::vector<int> par_axis;
    std::vector<std::uint8_t> par_flip;
};

/// Affine chart of an iterated face inside an ancestor cube.
/// Subcell coordinate u maps to ancestor axis axis[u] (reversed when flip[u]);
/// ancestor axes not in the image are pinned at fixed_val[axis] in {0,1}.
struct SubcellChart {
    CubeId cell = kNoCube;
    std::vector<int> axis;
    std::vector<std::uint8_t> flip;
    std::vector<std::int8_t> fixed_val; // per ancestor axis; -1 = free
};

/// Result of collapsing a cube onto the face spanned by a subset of its axes
/// at a given corner.
struct SpanResult {
    CubeId cell = kNoCube;
    int corner = 0;                      // corner of `cell` matching the input corner
    std::vector<int> cell_axis;          // per requested axis: axis of `cell`
    std::vector<std::uint8_t> cell_flip; // per requested axis
};

/// A point of the complex: carrier cube plus exact coordinates in [0,1]^dim.
/// Canonical form keeps every coordinate strictly inside (0,1) by descending
/// to faces; two points are equal iff their canonical forms are identical.
struct AmbientPoint {
    CubeId cube = kNoCube;
    std::vector<Rational> coords;

    bool operator==(const AmbientPoint& o) const { return cube == o.cube && coords == o.coords; }
};

struct AmbientPointHash {
    std::size_t operator()(const AmbientPoint& p) const {
        return hash_combine(std::hash<CubeId>()(p.cube), RationalVecHash()(p.coords));
    }
};

/// Float twin of AmbientPoint for the numerical oracle.
struct PointF {
    CubeId cube = kNoCube;
    std::vector<double> coords;
};

/// Finite cubical complex. Cells of every dimension (including vertices) are
/// listed in `cubes`; faces are derived during validation, never input.
/// Instances are immutable after construction and safe to share across
/// threads.
class CubicalComplex {
public:
    int vertex_count = 0;
    std::vector<Cube> cubes;
    double metric_scale = 1.0; // edge length of one data-model unit cube
    bool simple = true;        // false only for relaxed complexes built by doubling
    int dim = 0;

    // Derived structure.
    std::vector<std::vector<FaceEmbed>> faces;      // per cube, slot 2*axis+side
    std::vector<CubeId> vertex_cell;                // vertex id -> its 0-cube (or kNoCube)
    std::vector<std::vector<CubeId>> vertex_cofaces; // vertex id -> cubes containing it
    std::vector<std::vector<SubcellChart>> subcells; // per cube: charts of all iterated faces (incl. self), sorted by cell id
    std::vector<std::vector<CubeId>> cofaces;        // per cube: cubes having it as a codim-1 face

    /// Validates a raw description: face closure, simplicity, dimension cap.
    static CubicalComplex validate(int vertex_count, std::vector<Cube> cubes, int max_dim = 4);

    /// Builds a relaxed complex (duplicate vertex sets allowed) from cells
    /// with explicit face identifications. Used by the doubling construction.
    static CubicalComplex from_cells_relaxed(int vertex_count, std::vector<Cube> cubes,
                                             std::vector<std::vector<FaceEmbed>> faces,
                                             double metric_scale);

    std::size_t cell_count() const { return cubes.size(); }
    std::size_t cell_count(int d) const;

    /// Cube with the given (sorted) vertex set; simple complexes only.
    CubeId cube_by_vertex_set(const std::vector<VertexId>& sorted_vertices) const;

    /// Collapses `cube` onto the face spanned at `corner` by `axes` (sorted).
    SpanResult span_face(CubeId cube, int corner, std::span<const int> axes) const;

    /// Chart of `small` inside `big`, when `small` is an iterated face of `big`.
    const SubcellChart* chart_of(CubeId big, CubeId small) const;

    /// Maximal-dimension common iterated face of two cells, kNoCube if none.
    CubeId common_face(CubeId a, CubeId b) const;

    AmbientPoint canonicalize(AmbientPoint p) const;

    /// Coordinates of a (canonical) point inside an ancestor cube of its carrier.
    std::vector<Rational> coords_in(CubeId big, const AmbientPoint& p) const;
    std::vector<double> coords_in(CubeId big, const PointF& p) const;

    /// Euclidean distance of two points inside one common cube, in metric units.
    double cube_distance(CubeId cube, const PointF& a, const PointF& b) const;

    nlohmann::json to_json() const;
    static CubicalComplex from_json(const nlohmann::json& j, int max_dim = 4);
    std::string canonical_digest() const; // sha256 of canonical serialization

private:
    std::unordered_map<std::size_t, std::vector<CubeId>> vertex_set_index_; // hash -> candidate ids
    void build_derived(int max_dim, bool relaxed);
    friend class ComplexBuilder;
};

/// Face-closed subset of the cubes of a parent complex.
struct SubcomplexRef {
    const CubicalComplex* parent = nullptr;
    std::vector<char> member;      // indexed by cube id
    std::vector<CubeId> cube_ids;  // sorted

    bool contains(CubeId c) const { return c >= 0 && c < static_cast<CubeId>(member.size()) && member[c]; }
    bool empty() const { return cube_ids.empty(); }
    std::size_t cell_count(int d) const;

    /// Builds from arbitrary cube ids; the downward closure is always
    /// completed, with the number of added cells reported.
    static SubcomplexRef from_cubes(const CubicalComplex& X, std::vector<CubeId> ids,
                                    int* closure_added = nullptr);
    static SubcomplexRef whole(const CubicalComplex& X);

    nlohmann::json to_json() const;
    static SubcomplexRef from_json(const CubicalComplex& X, const nlohmann::json& j,
                                   int* closure_added = nullptr);
};

std::string rational_string(const Rational& r); // "num/den"
nlohmann::json point_json(const AmbientPoint& p);

/// True iff the 1-skeleton of W is a connected graph.
/// Errors: EmptySubcomplex.
bool is_connected(const SubcomplexRef& W);

/// On false, fills two cube ids from different components (witness).
bool is_connected(const SubcomplexRef& W, std::pair<CubeId, CubeId>* witness);

} // namespace cubecvx
