#include "cubecvx/generators.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <set>

namespace cubecvx {

namespace {

/// Accumulates axis-aligned unit cubes on the integer lattice and emits a
/// validated complex with the full face closure.
class LatticeBuilder {
public:
    /// Adds the unit cube with minimal corner `pos` spanning `axes`.
    void add_cube(const std::vector<int>& pos, const std::vector<int>& axes) {
        const int k = static_cast<int>(axes.size());
        std::vector<VertexId> corners(1u << k);
        for (unsigned eps = 0; eps < (1u << k); ++eps) {
            std::vector<int> p = pos;
            for (int j = 0; j < k; ++j)
                if (eps & (1u << j)) ++p[axes[j]];
            corners[eps] = vertex_at(p);
        }
        add_cell(std::move(corners));
    }

    CubicalComplex build(int max_dim = 4) {
        std::vector<Cube> cubes;
        cubes.reserve(cells_.size());
        for (const auto& c : order_) cubes.push_back({0, c});
        return CubicalComplex::validate(static_cast<int>(vertex_of_.size()), std::move(cubes),
                                        max_dim);
    }

private:
    VertexId vertex_at(const std::vector<int>& p) {
        auto [it, inserted] = vertex_of_.try_emplace(p, static_cast<VertexId>(vertex_of_.size()));
        if (inserted) add_cell({it->second});
        return it->second;
    }

    void add_cell(std::vector<VertexId> corners) {
        std::vector<VertexId> key = corners;
        std::sort(key.begin(), key.end());
        if (!cells_.insert(key).second) return;
        // Close downward so validation always sees every face.
        const std::size_t sz = corners.size();
        if (sz > 1) {
            const int k = std::countr_zero(sz);
            for (int axis = 0; axis < k; ++axis)
                for (int side = 0; side < 2; ++side) {
                    std::vector<VertexId> face;
                    for (std::size_t m = 0; m < sz; ++m)
                        if (((m >> axis) & 1) == static_cast<std::size_t>(side))
                            face.push_back(corners[m]);
                    add_cell(std::move(face));
                }
        }
        order_.push_back(std::move(corners));
    }

    std::map<std::vector<int>, VertexId> vertex_of_;
    std::set<std::vector<VertexId>> cells_;
    std::vector<std::vector<VertexId>> order_;
};

CubicalComplex build_box(const std::vector<int>& dims) {
    LatticeBuilder b;
    const int k = static_cast<int>(dims.size());
    std::vector<int> axes(k);
    for (int j = 0; j < k; ++j) axes[j] = j;
    std::vector<int> pos(k, 0);
    for (;;) {
        b.add_cube(pos, axes);
        int j = 0;
        for (; j < k; ++j) {
            if (++pos[j] < dims[j]) break;
            pos[j] = 0;
        }
        if (j == k) break;
    }
    return b.build();
}

CubicalComplex build_staircase(int n, int dim) {
    if (n < 1 || dim < 1 || dim > 3) raise(ErrorCode::BadSpec, "staircase needs n>=1, dim in 1..3");
    LatticeBuilder b;
    std::vector<int> axes(dim);
    for (int j = 0; j < dim; ++j) axes[j] = j;
    std::vector<int> pos(dim, 0);
    for (int i = 0; i < n; ++i) {
        b.add_cube(pos, axes);
        ++pos[i % dim];
    }
    return b.build();
}

CubicalComplex build_cube_tree(int n, int dim, std::uint64_t seed) {
    if (n < 1 || dim < 1 || dim > 3) raise(ErrorCode::BadSpec, "cube_tree needs n>=1, dim in 1..3");
    std::mt19937_64 rng(seed);
    std::set<std::vector<int>> occupied;
    std::vector<std::vector<int>> cubes;
    std::vector<int> origin(dim, 0);
    occupied.insert(origin);
    cubes.push_back(origin);
    auto blocked = [&](const std::vector<int>& p, const std::vector<int>& parent) {
        // The new cube may touch only its parent, so the glued complex stays
        // a tree of cubes.
        std::vector<int> nb(dim);
        std::function<bool(int)> scan = [&](int j) -> bool {
            if (j == dim) {
                if (nb == p || nb == parent) return false;
                return occupied.count(nb) > 0;
            }
            for (int d = -1; d <= 1; ++d) {
                nb[j] = p[j] + d;
                if (scan(j + 1)) return true;
            }
            return false;
        };
        return scan(0);
    };
    int guard = 0;
    while (static_cast<int>(cubes.size()) < n && guard < 10000) {
        ++guard;
        const std::vector<int>& host = cubes[rng() % cubes.size()];
        int axis = static_cast<int>(rng() % dim);
        int dir = rng() % 2 ? 1 : -1;
        std::vector<int> p = host;
        p[axis] += dir;
        if (occupied.count(p) || blocked(p, host)) continue;
        occupied.insert(p);
        cubes.push_back(p);
    }
    LatticeBuilder b;
    std::vector<int> axes(dim);
    for (int j = 0; j < dim; ++j) axes[j] = j;
    for (const auto& p : cubes) b.add_cube(p, axes);
    return b.build();
}

CubicalComplex build_annulus(int n) {
    if (n < 3) raise(ErrorCode::BadSpec, "annulus needs at least 3 squares");
    // n squares in a cycle sharing vertical edges; vertices b_i, t_i.
    std::vector<Cube> cubes;
    auto add = [&](std::vector<VertexId> v) { cubes.push_back({0, std::move(v)}); };
    for (int i = 0; i < 2 * n; ++i) add({i});
    for (int i = 0; i < n; ++i) {
        int b0 = i, b1 = (i + 1) % n, t0 = n + i, t1 = n + (i + 1) % n;
        add({b0, b1});
        add({t0, t1});
        add({b0, t0});
        add({b0, b1, t0, t1});
    }
    return CubicalComplex::validate(2 * n, std::move(cubes));
}

} // namespace

nlohmann::json GeneratorSpec::to_json() const {
    nlohmann::json j;
    switch (kind) {
        case Kind::Named: j["kind"] = "named"; j["name"] = name; break;
        case Kind::GridRegion: j["kind"] = "grid_region"; j["dims"] = dims; break;
        case Kind::Staircase: j["kind"] = "staircase"; j["n"] = n; j["dim"] = dim; break;
        case Kind::CubeTree:
            j["kind"] = "cube_tree"; j["n"] = n; j["dim"] = dim; j["seed"] = seed;
            break;
        case Kind::Annulus: j["kind"] = "annulus"; j["n"] = n; break;
    }
    if (!expected.is_null()) j["expected"] = expected;
    return j;
}

GeneratorSpec GeneratorSpec::from_json(const nlohmann::json& j) {
    GeneratorSpec s;
    std::string kind = j.value("kind", "named");
    if (kind == "named") { s.kind = Kind::Named; s.name = j.value("name", ""); }
    else if (kind == "grid_region") {
        s.kind = Kind::GridRegion;
        s.dims = j.value("dims", std::vector<int>{});
    } else if (kind == "staircase") {
        s.kind = Kind::Staircase;
        s.n = j.value("n", 1);
        s.dim = j.value("dim", 2);
    } else if (kind == "cube_tree") {
        s.kind = Kind::CubeTree;
        s.n = j.value("n", 1);
        s.dim = j.value("dim", 2);
        s.seed = j.value("seed", 0ull);
    } else if (kind == "annulus") {
        s.kind = Kind::Annulus;
        s.n = j.value("n", 4);
    } else {
        raise(ErrorCode::BadSpec, "unknown generator kind: " + kind);
    }
    if (j.contains("expected")) s.expected = j.at("expected");
    return s;
}

CubicalComplex make_named(const std::string& name) {
    if (name == "vertex") return CubicalComplex::validate(1, {{0, {0}}});
    if (name == "edge") return CubicalComplex::validate(2, {{0, {0}}, {0, {1}}, {0, {0, 1}}});
    if (name == "square") return build_box({1, 1});
    if (name == "lshape") {
        // Squares [0,1]^2, [1,2]x[0,1], [0,1]x[1,2]; reflex vertex at (1,1).
        LatticeBuilder b;
        b.add_cube({0, 0}, {0, 1});
        b.add_cube({1, 0}, {0, 1});
        b.add_cube({0, 1}, {0, 1});
        return b.build();
    }
    if (name == "cube3") return build_box({1, 1, 1});
    if (name == "cube_boundary") {
        LatticeBuilder b;
        b.add_cube({0, 0, 0}, {0, 1});
        b.add_cube({0, 0, 1}, {0, 1});
        b.add_cube({0, 0, 0}, {0, 2});
        b.add_cube({0, 1, 0}, {0, 2});
        b.add_cube({0, 0, 0}, {1, 2});
        b.add_cube({1, 0, 0}, {1, 2});
        return b.build();
    }
    raise(ErrorCode::BadSpec, "unknown named complex: " + name);
}

CubicalComplex generate(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GeneratorSpec::Kind::Named: return make_named(spec.name);
        case GeneratorSpec::Kind::GridRegion:
            if (spec.dims.empty() || spec.dims.size() > 3)
                raise(ErrorCode::BadSpec, "grid_region needs 1..3 dims");
            for (int d : spec.dims)
                if (d < 1) raise(ErrorCode::BadSpec, "grid_region sides must be positive");
            return build_box(spec.dims);
        case GeneratorSpec::Kind::Staircase: return build_staircase(spec.n, spec.dim);
        case GeneratorSpec::Kind::CubeTree: return build_cube_tree(spec.n, spec.dim, spec.seed);
        case GeneratorSpec::Kind::Annulus: return build_annulus(spec.n);
    }
    raise(ErrorCode::BadSpec, "unhandled generator kind");
}

SubcomplexRef random_subcomplex(const CubicalComplex& X, std::uint64_t seed,
                                double target_fraction) {
    if (X.cubes.empty()) raise(ErrorCode::EmptySubcomplex, "cannot sample from an empty complex");
    std::mt19937_64 rng(seed);
    CubeId start = static_cast<CubeId>(rng() % X.cubes.size());
    if (target_fraction <= 0) {
        // A single vertex: the smallest corner of the start cube.
        VertexId v = *std::min_element(X.cubes[start].corners.begin(), X.cubes[start].corners.end());
        return SubcomplexRef::from_cubes(X, {X.vertex_cell[v]});
    }
    std::size_t target = static_cast<std::size_t>(target_fraction * X.cubes.size() + 0.5);
    if (target < 1) target = 1;

    // Seeded BFS over the cell adjacency (faces and cofaces), then closure.
    std::vector<char> in(X.cubes.size(), 0);
    std::vector<CubeId> picked;
    std::vector<CubeId> frontier{start};
    in[start] = 1;
    picked.push_back(start);
    while (picked.size() < target && !frontier.empty()) {
        std::size_t idx = rng() % frontier.size();
        std::swap(frontier[idx], frontier.back());
        CubeId c = frontier.back();
        frontier.pop_back();
        std::vector<CubeId> nbrs;
        for (const auto& emb : X.faces[c]) nbrs.push_back(emb.cell);
        for (CubeId cf : X.cofaces[c]) nbrs.push_back(cf);
        std::sort(nbrs.begin(), nbrs.end());
        for (CubeId nb : nbrs)
            if (!in[nb] && picked.size() < target) {
                in[nb] = 1;
                picked.push_back(nb);
                frontier.push_back(nb);
            }
        if (frontier.empty() && picked.size() < target) {
            // Continue from any picked cell with unexplored neighbors.
            for (CubeId c2 : picked) {
                for (CubeId cf : X.cofaces[c2])
                    if (!in[cf]) { frontier.push_back(c2); break; }
                if (!frontier.empty()) break;
            }
            if (frontier.empty()) break;
        }
    }
    return SubcomplexRef::from_cubes(X, picked);
}

} // namespace cubecvx
