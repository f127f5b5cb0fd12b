#include "cubecvx/complex.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>

namespace cubecvx {

namespace {

int popcount(int x) { return std::popcount(static_cast<unsigned>(x)); }

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t vset_hash(const std::vector<VertexId>& sorted) {
    std::size_t h = sorted.size();
    for (VertexId v : sorted) h = hash_combine(h, std::hash<VertexId>()(v));
    return h;
}

/// Inserts `side` as bit `axis` into a (k-1)-bit pattern, shifting higher bits up.
int insert_bit(int pattern, int axis, int side) {
    int low = pattern & ((1 << axis) - 1);
    int high = pattern >> axis;
    return low | (side << axis) | (high << (axis + 1));
}

} // namespace

std::size_t CubicalComplex::cell_count(int d) const {
    std::size_t n = 0;
    for (const auto& c : cubes)
        if (c.dim == d) ++n;
    return n;
}

CubeId CubicalComplex::cube_by_vertex_set(const std::vector<VertexId>& sorted_vertices) const {
    auto it = vertex_set_index_.find(vset_hash(sorted_vertices));
    if (it == vertex_set_index_.end()) return kNoCube;
    for (CubeId id : it->second) {
        std::vector<VertexId> s = cubes[id].corners;
        std::sort(s.begin(), s.end());
        if (s == sorted_vertices) return id;
    }
    return kNoCube;
}

CubicalComplex CubicalComplex::validate(int vertex_count, std::vector<Cube> cubes, int max_dim) {
    CubicalComplex X;
    X.vertex_count = vertex_count;
    X.cubes = std::move(cubes);
    X.build_derived(max_dim, /*relaxed=*/false);
    return X;
}

CubicalComplex CubicalComplex::from_cells_relaxed(int vertex_count, std::vector<Cube> cubes,
                                                  std::vector<std::vector<FaceEmbed>> faces,
                                                  double metric_scale) {
    CubicalComplex X;
    X.vertex_count = vertex_count;
    X.cubes = std::move(cubes);
    X.faces = std::move(faces);
    X.metric_scale = metric_scale;
    X.build_derived(/*max_dim=*/32, /*relaxed=*/true);
    return X;
}

void CubicalComplex::build_derived(int max_dim, bool relaxed) {
    const std::size_t n = cubes.size();
    dim = 0;

    // Per-cube sanity: tuple shape, vertex range, distinct corners.
    for (std::size_t i = 0; i < n; ++i) {
        Cube& c = cubes[i];
        if (!is_power_of_two(c.corners.size()))
            raise(ErrorCode::ParseError, "cube " + std::to_string(i) + " has tuple length " +
                                             std::to_string(c.corners.size()) + ", not a power of two");
        c.dim = std::countr_zero(c.corners.size());
        if (c.dim > max_dim)
            raise(ErrorCode::DimensionExceeded,
                  "cube " + std::to_string(i) + " has dimension " + std::to_string(c.dim) +
                      " > cap " + std::to_string(max_dim));
        dim = std::max(dim, c.dim);
        std::vector<VertexId> seen = c.corners;
        std::sort(seen.begin(), seen.end());
        for (VertexId v : c.corners)
            if (v < 0 || v >= vertex_count)
                raise(ErrorCode::ParseError, "cube " + std::to_string(i) + " references vertex " +
                                                 std::to_string(v) + " outside [0," +
                                                 std::to_string(vertex_count) + ")");
        for (std::size_t k = 1; k < seen.size(); ++k)
            if (seen[k] == seen[k - 1])
                raise(ErrorCode::DegenerateCube, "cube " + std::to_string(i) +
                                                     " repeats vertex " + std::to_string(seen[k]));
    }

    // Vertex-set index; simplicity check.
    vertex_set_index_.clear();
    bool any_duplicate = false;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<VertexId> s = cubes[i].corners;
        std::sort(s.begin(), s.end());
        auto& bucket = vertex_set_index_[vset_hash(s)];
        for (CubeId other : bucket) {
            std::vector<VertexId> t = cubes[other].corners;
            std::sort(t.begin(), t.end());
            if (t == s) {
                if (!relaxed)
                    raise(ErrorCode::DuplicateCube, "cubes " + std::to_string(other) + " and " +
                                                        std::to_string(i) + " share the vertex set");
                any_duplicate = true;
            }
        }
        bucket.push_back(static_cast<CubeId>(i));
    }
    if (relaxed) simple = !any_duplicate;

    // Face embeddings. In the relaxed case they were provided by the builder;
    // here only the chart columns may be missing.
    if (!relaxed) {
        faces.assign(n, {});
        for (std::size_t i = 0; i < n; ++i) {
            const Cube& c = cubes[i];
            const int k = c.dim;
            faces[i].resize(2 * k);
            for (int axis = 0; axis < k; ++axis) {
                for (int side = 0; side < 2; ++side) {
                    // Derived face tuple, indexed by remaining-bit patterns.
                    const int fsize = 1 << (k - 1);
                    std::vector<VertexId> derived(fsize);
                    for (int r = 0; r < fsize; ++r) derived[r] = c.corners[insert_bit(r, axis, side)];
                    std::vector<VertexId> sorted = derived;
                    std::sort(sorted.begin(), sorted.end());
                    CubeId f = cube_by_vertex_set(sorted);
                    if (f == kNoCube)
                        raise(ErrorCode::MissingFace,
                              "face of cube " + std::to_string(i) + " at axis " + std::to_string(axis) +
                                  " side " + std::to_string(side) + " is not a cell of the complex");
                    // Corner map from the listed face cell into the parent.
                    const Cube& fc = cubes[f];
                    FaceEmbed emb;
                    emb.cell = f;
                    emb.corner_of_parent.resize(fsize);
                    for (int m = 0; m < fsize; ++m) {
                        int r = -1;
                        for (int q = 0; q < fsize; ++q)
                            if (derived[q] == fc.corners[m]) { r = q; break; }
                        if (r < 0)
                            raise(ErrorCode::Internal, "face lookup inconsistency");
                        emb.corner_of_parent[m] = static_cast<std::uint8_t>(insert_bit(r, axis, side));
                    }
                    // The vertex identification must be a cube isomorphism:
                    // corners adjacent in the face stay adjacent in the parent.
                    for (int m = 0; m < fsize; ++m)
                        for (int b = 0; b < k - 1; ++b) {
                            int m2 = m ^ (1 << b);
                            if (popcount(emb.corner_of_parent[m] ^ emb.corner_of_parent[m2]) != 1)
                                raise(ErrorCode::MissingFace,
                                      "face of cube " + std::to_string(i) + " at axis " +
                                          std::to_string(axis) +
                                          " matches cell " + std::to_string(f) +
                                          " as a vertex set but not as a cube");
                        }
                    faces[i][2 * axis + side] = std::move(emb);
                }
            }
        }
    } else if (faces.size() != n) {
        raise(ErrorCode::Internal, "relaxed complex requires explicit face table");
    }

    // Fill chart columns of every FaceEmbed.
    for (std::size_t i = 0; i < n; ++i) {
        const int k = cubes[i].dim;
        for (auto& emb : faces[i]) {
            if (k == 1) { emb.par_axis.clear(); emb.par_flip.clear(); continue; }
            const int fdim = k - 1;
            emb.par_axis.assign(fdim, -1);
            emb.par_flip.assign(fdim, 0);
            const int base = emb.corner_of_parent[0];
            for (int u = 0; u < fdim; ++u) {
                int diff = base ^ emb.corner_of_parent[1 << u];
                if (popcount(diff) != 1) raise(ErrorCode::Internal, "bad corner map");
                int t = std::countr_zero(static_cast<unsigned>(diff));
                emb.par_axis[u] = t;
                emb.par_flip[u] = static_cast<std::uint8_t>((base >> t) & 1);
            }
        }
    }

    // Vertex cells and cofaces.
    vertex_cell.assign(vertex_count, kNoCube);
    for (std::size_t i = 0; i < n; ++i)
        if (cubes[i].dim == 0) {
            if (vertex_cell[cubes[i].corners[0]] == kNoCube)
                vertex_cell[cubes[i].corners[0]] = static_cast<CubeId>(i);
        }
    for (std::size_t i = 0; i < n; ++i)
        for (VertexId v : cubes[i].corners)
            if (vertex_cell[v] == kNoCube)
                raise(ErrorCode::MissingFace,
                      "vertex " + std::to_string(v) + " appears in cube " + std::to_string(i) +
                          " but has no 0-cell");
    vertex_cofaces.assign(vertex_count, {});
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<VertexId> seen;
        for (VertexId v : cubes[i].corners) {
            if (std::find(seen.begin(), seen.end(), v) == seen.end()) {
                vertex_cofaces[v].push_back(static_cast<CubeId>(i));
                seen.push_back(v);
            }
        }
    }

    // Subcell charts: BFS down the face lattice composing affine charts.
    subcells.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        std::map<CubeId, SubcellChart> found;
        SubcellChart self;
        self.cell = static_cast<CubeId>(i);
        self.axis.resize(cubes[i].dim);
        self.flip.assign(cubes[i].dim, 0);
        self.fixed_val.assign(cubes[i].dim, -1);
        for (int a = 0; a < cubes[i].dim; ++a) self.axis[a] = a;
        found[self.cell] = self;
        std::queue<SubcellChart> bfs;
        bfs.push(self);
        while (!bfs.empty()) {
            SubcellChart cur = bfs.front();
            bfs.pop();
            const int cd = cubes[cur.cell].dim;
            for (int axis = 0; axis < cd; ++axis)
                for (int side = 0; side < 2; ++side) {
                    const FaceEmbed& emb = faces[cur.cell][2 * axis + side];
                    if (found.count(emb.cell)) continue;
                    SubcellChart nxt;
                    nxt.cell = emb.cell;
                    nxt.fixed_val = cur.fixed_val;
                    // Pin the dropped axis of cur inside the ancestor.
                    {
                        int anc_axis = cur.axis[axis];
                        int v = cur.flip[axis] ? 1 - side : side;
                        nxt.fixed_val[anc_axis] = static_cast<std::int8_t>(v);
                    }
                    const int fd = cd - 1;
                    nxt.axis.resize(fd);
                    nxt.flip.assign(fd, 0);
                    for (int u = 0; u < fd; ++u) {
                        int mid_axis = emb.par_axis[u]; // axis of cur
                        int flip = emb.par_flip[u];
                        nxt.axis[u] = cur.axis[mid_axis];
                        nxt.flip[u] = static_cast<std::uint8_t>(flip ^ cur.flip[mid_axis]);
                    }
                    found[emb.cell] = nxt;
                    bfs.push(nxt);
                }
        }
        subcells[i].reserve(found.size());
        for (auto& [id, chart] : found) subcells[i].push_back(std::move(chart));
    }

    // Codimension-1 cofaces.
    cofaces.assign(n, {});
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& emb : faces[i]) cofaces[emb.cell].push_back(static_cast<CubeId>(i));
    for (auto& v : cofaces) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
}

SpanResult CubicalComplex::span_face(CubeId cube, int corner, std::span<const int> axes) const {
    const int k = cubes[cube].dim;
    // Track, per current-cell axis, which requested axis it realizes (or -1).
    std::vector<int> realizes(k, -1);
    std::vector<std::uint8_t> flips(k, 0);
    for (std::size_t i = 0; i < axes.size(); ++i) realizes[axes[i]] = static_cast<int>(i);
    CubeId cur = cube;
    int cur_corner = corner;
    for (;;) {
        const int cd = cubes[cur].dim;
        int drop = -1;
        for (int a = 0; a < cd; ++a)
            if (realizes[a] < 0) { drop = a; break; }
        if (drop < 0) break;
        int side = (cur_corner >> drop) & 1;
        const FaceEmbed& emb = faces[cur][2 * drop + side];
        // Corner of the face cell matching cur_corner.
        int fcorner = -1;
        for (std::size_t m = 0; m < emb.corner_of_parent.size(); ++m)
            if (emb.corner_of_parent[m] == cur_corner) { fcorner = static_cast<int>(m); break; }
        if (fcorner < 0) raise(ErrorCode::Internal, "span_face corner not on chosen face");
        std::vector<int> nrealizes(cd - 1, -1);
        std::vector<std::uint8_t> nflips(cd - 1, 0);
        for (int u = 0; u < cd - 1; ++u) {
            int t = emb.par_axis.empty() ? -1 : emb.par_axis[u];
            if (t < 0) raise(ErrorCode::Internal, "span_face missing chart");
            nrealizes[u] = realizes[t];
            nflips[u] = static_cast<std::uint8_t>(flips[t] ^ emb.par_flip[u]);
        }
        cur = emb.cell;
        cur_corner = fcorner;
        realizes = std::move(nrealizes);
        flips.assign(nflips.begin(), nflips.end());
    }
    SpanResult res;
    res.cell = cur;
    res.corner = cur_corner;
    res.cell_axis.assign(axes.size(), -1);
    res.cell_flip.assign(axes.size(), 0);
    for (std::size_t a = 0; a < realizes.size(); ++a)
        if (realizes[a] >= 0) {
            res.cell_axis[realizes[a]] = static_cast<int>(a);
            res.cell_flip[realizes[a]] = flips[a];
        }
    return res;
}

const SubcellChart* CubicalComplex::chart_of(CubeId big, CubeId small) const {
    const auto& list = subcells[big];
    auto it = std::lower_bound(list.begin(), list.end(), small,
                               [](const SubcellChart& ch, CubeId id) { return ch.cell < id; });
    if (it == list.end() || it->cell != small) return nullptr;
    return &*it;
}

CubeId CubicalComplex::common_face(CubeId a, CubeId b) const {
    const auto& la = subcells[a];
    const auto& lb = subcells[b];
    CubeId best = kNoCube;
    int best_dim = -1;
    std::size_t i = 0, j = 0;
    while (i < la.size() && j < lb.size()) {
        if (la[i].cell < lb[j].cell) ++i;
        else if (lb[j].cell < la[i].cell) ++j;
        else {
            int d = cubes[la[i].cell].dim;
            if (d > best_dim) { best_dim = d; best = la[i].cell; }
            ++i; ++j;
        }
    }
    return best;
}

AmbientPoint CubicalComplex::canonicalize(AmbientPoint p) const {
    if (p.cube < 0 || p.cube >= static_cast<CubeId>(cubes.size()))
        raise(ErrorCode::BadArgument, "point carrier " + std::to_string(p.cube) + " out of range");
    if (static_cast<int>(p.coords.size()) != cubes[p.cube].dim)
        raise(ErrorCode::CoordOutOfRange, "coordinate count does not match carrier dimension");
    const Rational zero(0), one(1);
    for (const Rational& x : p.coords)
        if (x < zero || x > one) raise(ErrorCode::CoordOutOfRange, "coordinate outside [0,1]");
    for (;;) {
        int drop = -1, side = 0;
        for (std::size_t j = 0; j < p.coords.size(); ++j) {
            if (p.coords[j] == zero) { drop = static_cast<int>(j); side = 0; break; }
            if (p.coords[j] == one) { drop = static_cast<int>(j); side = 1; break; }
        }
        if (drop < 0) return p;
        const FaceEmbed& emb = faces[p.cube][2 * drop + side];
        std::vector<Rational> ncoords(p.coords.size() - 1);
        for (std::size_t u = 0; u < ncoords.size(); ++u) {
            const Rational& val = p.coords[emb.par_axis[u]];
            ncoords[u] = emb.par_flip[u] ? one - val : val;
        }
        p.cube = emb.cell;
        p.coords = std::move(ncoords);
    }
}

std::vector<Rational> CubicalComplex::coords_in(CubeId big, const AmbientPoint& p) const {
    const SubcellChart* ch = chart_of(big, p.cube);
    if (!ch) raise(ErrorCode::BadArgument, "point carrier is not a face of the given cube");
    std::vector<Rational> x(cubes[big].dim);
    for (int a = 0; a < cubes[big].dim; ++a)
        if (ch->fixed_val[a] >= 0) x[a] = Rational(ch->fixed_val[a]);
    for (std::size_t u = 0; u < ch->axis.size(); ++u)
        x[ch->axis[u]] = ch->flip[u] ? Rational(1) - p.coords[u] : p.coords[u];
    return x;
}

std::vector<double> CubicalComplex::coords_in(CubeId big, const PointF& p) const {
    const SubcellChart* ch = chart_of(big, p.cube);
    if (!ch) raise(ErrorCode::BadArgument, "point carrier is not a face of the given cube");
    std::vector<double> x(cubes[big].dim, 0.0);
    for (int a = 0; a < cubes[big].dim; ++a)
        if (ch->fixed_val[a] >= 0) x[a] = ch->fixed_val[a];
    for (std::size_t u = 0; u < ch->axis.size(); ++u)
        x[ch->axis[u]] = ch->flip[u] ? 1.0 - p.coords[u] : p.coords[u];
    return x;
}

double CubicalComplex::cube_distance(CubeId cube, const PointF& a, const PointF& b) const {
    std::vector<double> xa = coords_in(cube, a);
    std::vector<double> xb = coords_in(cube, b);
    double s = 0;
    for (std::size_t i = 0; i < xa.size(); ++i) s += (xa[i] - xb[i]) * (xa[i] - xb[i]);
    return std::sqrt(s) * metric_scale;
}

nlohmann::json CubicalComplex::to_json() const {
    nlohmann::json j;
    j["vertices"] = vertex_count;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cubes) arr.push_back(c.corners);
    j["cubes"] = std::move(arr);
    if (metric_scale != 1.0) j["scale"] = metric_scale;
    return j;
}

CubicalComplex CubicalComplex::from_json(const nlohmann::json& j, int max_dim) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("cubes"))
        raise(ErrorCode::ParseError, R"(complex file must be {"vertices": N, "cubes": [[...], ...]})");
    int n = 0;
    try {
        n = j.at("vertices").get<int>();
    } catch (const std::exception&) {
        raise(ErrorCode::ParseError, "\"vertices\" must be an integer");
    }
    if (n < 0) raise(ErrorCode::ParseError, "\"vertices\" must be nonnegative");
    std::vector<Cube> cubes;
    try {
        for (const auto& t : j.at("cubes")) {
            Cube c;
            c.corners = t.get<std::vector<VertexId>>();
            cubes.push_back(std::move(c));
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        raise(ErrorCode::ParseError, std::string("bad cube list: ") + e.what());
    }
    CubicalComplex X = validate(n, std::move(cubes), max_dim);
    if (j.contains("scale")) X.metric_scale = j.at("scale").get<double>();
    return X;
}

std::string CubicalComplex::canonical_digest() const {
    return sha256_hex(to_json().dump());
}

std::size_t SubcomplexRef::cell_count(int d) const {
    std::size_t n = 0;
    for (CubeId c : cube_ids)
        if (parent->cubes[c].dim == d) ++n;
    return n;
}

SubcomplexRef SubcomplexRef::from_cubes(const CubicalComplex& X, std::vector<CubeId> ids,
                                        int* closure_added) {
    SubcomplexRef W;
    W.parent = &X;
    W.member.assign(X.cubes.size(), 0);
    for (CubeId c : ids) {
        if (c < 0 || c >= static_cast<CubeId>(X.cubes.size()))
            raise(ErrorCode::BadArgument, "subcomplex cube id " + std::to_string(c) + " out of range");
        W.member[c] = 1;
    }
    // Complete the downward closure.
    int added = 0;
    std::queue<CubeId> bfs;
    for (CubeId c = 0; c < static_cast<CubeId>(X.cubes.size()); ++c)
        if (W.member[c]) bfs.push(c);
    while (!bfs.empty()) {
        CubeId c = bfs.front();
        bfs.pop();
        for (const auto& emb : X.faces[c])
            if (!W.member[emb.cell]) {
                W.member[emb.cell] = 1;
                ++added;
                bfs.push(emb.cell);
            }
    }
    if (closure_added) *closure_added = added;
    for (CubeId c = 0; c < static_cast<CubeId>(X.cubes.size()); ++c)
        if (W.member[c]) W.cube_ids.push_back(c);
    return W;
}

SubcomplexRef SubcomplexRef::whole(const CubicalComplex& X) {
    SubcomplexRef W;
    W.parent = &X;
    W.member.assign(X.cubes.size(), 1);
    W.cube_ids.resize(X.cubes.size());
    for (std::size_t i = 0; i < X.cubes.size(); ++i) W.cube_ids[i] = static_cast<CubeId>(i);
    return W;
}

nlohmann::json SubcomplexRef::to_json() const {
    nlohmann::json j;
    j["parent"] = parent->canonical_digest();
    j["cubes"] = cube_ids;
    return j;
}

SubcomplexRef SubcomplexRef::from_json(const CubicalComplex& X, const nlohmann::json& j,
                                       int* closure_added) {
    if (!j.is_object() || !j.contains("cubes"))
        raise(ErrorCode::ParseError, R"(subcomplex file must be {"parent": ..., "cubes": [i, ...]})");
    std::vector<CubeId> ids;
    try {
        ids = j.at("cubes").get<std::vector<CubeId>>();
    } catch (const std::exception& e) {
        raise(ErrorCode::ParseError, std::string("bad subcomplex cube list: ") + e.what());
    }
    return from_cubes(X, std::move(ids), closure_added);
}

std::string rational_string(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

nlohmann::json point_json(const AmbientPoint& p) {
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& c : p.coords) coords.push_back(rational_string(c));
    return {{"cube", p.cube}, {"coords", coords}};
}

bool is_connected(const SubcomplexRef& W, std::pair<CubeId, CubeId>* witness) {
    if (W.empty()) raise(ErrorCode::EmptySubcomplex, "subcomplex has no cells");
    const CubicalComplex& X = *W.parent;
    // Union-find over member cells through the face relation; for complexes
    // this matches 1-skeleton connectivity.
    std::vector<CubeId> uf(X.cubes.size(), kNoCube);
    std::function<CubeId(CubeId)> find = [&](CubeId c) {
        while (uf[c] != c) { uf[c] = uf[uf[c]]; c = uf[c]; }
        return c;
    };
    for (CubeId c : W.cube_ids) uf[c] = c;
    for (CubeId c : W.cube_ids)
        for (const auto& emb : X.faces[c]) {
            CubeId ra = find(c), rb = find(emb.cell);
            if (ra != rb) uf[ra] = rb;
        }
    CubeId root = find(W.cube_ids.front());
    for (CubeId c : W.cube_ids)
        if (find(c) != root) {
            if (witness) *witness = {W.cube_ids.front(), c};
            return false;
        }
    return true;
}

bool is_connected(const SubcomplexRef& W) { return is_connected(W, nullptr); }

} // namespace cubecvx
