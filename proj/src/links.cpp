#include "cubecvx/links.hpp"

#include <algorithm>
#include <map>

namespace cubecvx {

int SphericalComplex::max_simplex_dim() const {
    int d = dir_ids.empty() ? -1 : 0;
    for (const auto& s : simplices) d = std::max(d, static_cast<int>(s.size()) - 1);
    return d;
}

std::vector<std::vector<int>> SphericalComplex::top_simplices() const {
    std::vector<std::vector<int>> tops;
    for (const auto& s : simplices) {
        bool maximal = true;
        for (const auto& t : simplices) {
            if (t.size() <= s.size()) continue;
            if (std::includes(t.begin(), t.end(), s.begin(), s.end())) { maximal = false; break; }
        }
        if (maximal) tops.push_back(s);
    }
    // Isolated vertices are top cells too.
    for (int v : dir_ids) {
        bool in_any = false;
        for (const auto& s : simplices)
            if (std::binary_search(s.begin(), s.end(), v)) { in_any = true; break; }
        if (!in_any) tops.push_back({v});
    }
    return tops;
}

nlohmann::json SphericalComplex::to_json() const {
    nlohmann::json j;
    nlohmann::json verts = nlohmann::json::array();
    for (int id : dir_ids)
        verts.push_back({{"id", id}, {"edge", dirs[id].edge}, {"end", dirs[id].end}});
    j["vertices"] = std::move(verts);
    nlohmann::json simp = nlohmann::json::array();
    for (const auto& s : simplices)
        if (s.size() >= 2) simp.push_back(s);
    j["simplices"] = std::move(simp);
    j["simplicial"] = simplicial;
    return j;
}

namespace {

void close_downward(std::set<std::vector<int>>& simplices, const std::vector<int>& top) {
    // All nonempty subsets; top sizes are <= 5 here so this stays tiny.
    const std::size_t n = top.size();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> sub;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) sub.push_back(top[i]);
        simplices.insert(std::move(sub));
    }
}

} // namespace

SphericalComplex link(const CubicalComplex& X, VertexId v) {
    if (v < 0 || v >= X.vertex_count || X.vertex_cell[v] == kNoCube)
        raise(ErrorCode::NotAVertex, std::to_string(v) + " is not a vertex of the complex");

    SphericalComplex L;
    L.base_vertex = v;

    // Directions: incident edge ends, sorted by (edge id, end).
    std::map<LinkVertex, int> dir_id;
    for (CubeId c : X.vertex_cofaces[v]) {
        if (X.cubes[c].dim != 1) continue;
        for (std::uint8_t end = 0; end < 2; ++end)
            if (X.cubes[c].corners[end] == v) dir_id[{c, end}] = 0;
    }
    for (auto& [lv, id] : dir_id) {
        id = static_cast<int>(L.dirs.size());
        L.dirs.push_back(lv);
        L.dir_ids.push_back(id);
    }

    // One (k-1)-simplex per corner occurrence of v in a k-cube, k >= 1.
    for (CubeId c : X.vertex_cofaces[v]) {
        const Cube& cube = X.cubes[c];
        if (cube.dim < 1) continue;
        for (std::size_t ci = 0; ci < cube.corners.size(); ++ci) {
            if (cube.corners[ci] != v) continue;
            SphericalComplex::RawTop top;
            top.source_cube = c;
            top.source_corner = static_cast<std::uint8_t>(ci);
            for (int axis = 0; axis < cube.dim; ++axis) {
                int ax[1] = {axis};
                SpanResult edge = X.span_face(c, static_cast<int>(ci), ax);
                auto it = dir_id.find({edge.cell, static_cast<std::uint8_t>(edge.corner)});
                if (it == dir_id.end()) raise(ErrorCode::Internal, "edge direction missing from link");
                top.verts.push_back(it->second);
            }
            std::sort(top.verts.begin(), top.verts.end());
            L.raw.push_back(std::move(top));
        }
    }

    // Simpliciality: no two corner simplices of the same dimension share a
    // vertex set. Holds automatically for cubical (simple) complexes.
    std::map<std::vector<int>, std::size_t> first_seen;
    for (std::size_t i = 0; i < L.raw.size(); ++i) {
        auto [it, inserted] = first_seen.try_emplace(L.raw[i].verts, i);
        if (!inserted) {
            L.simplicial = false;
            if (!L.nonsimplicial_witness)
                L.nonsimplicial_witness = std::make_pair(L.raw[it->second], L.raw[i]);
        }
    }
    for (const auto& top : L.raw) close_downward(L.simplices, top.verts);
    return L;
}

SphericalComplex restrict_link(const SphericalComplex& L, const SubcomplexRef& W) {
    if (L.base_vertex < 0 || W.parent->vertex_cell[L.base_vertex] == kNoCube ||
        !W.contains(W.parent->vertex_cell[L.base_vertex]))
        raise(ErrorCode::VertexNotInSubcomplex,
              "vertex " + std::to_string(L.base_vertex) + " is not in the subcomplex");

    SphericalComplex K;
    K.base_vertex = L.base_vertex;
    K.dirs = L.dirs;
    std::set<int> present;
    for (const auto& top : L.raw) {
        if (!W.contains(top.source_cube)) continue;
        K.raw.push_back(top);
        for (int id : top.verts) present.insert(id);
        close_downward(K.simplices, top.verts);
    }
    K.dir_ids.assign(present.begin(), present.end());
    std::map<std::vector<int>, std::size_t> first_seen;
    for (std::size_t i = 0; i < K.raw.size(); ++i) {
        auto [it, inserted] = first_seen.try_emplace(K.raw[i].verts, i);
        if (!inserted) {
            K.simplicial = false;
            if (!K.nonsimplicial_witness)
                K.nonsimplicial_witness = std::make_pair(K.raw[it->second], K.raw[i]);
        }
    }
    return K;
}

nlohmann::json FlagResult::to_json(const SphericalComplex& L) const {
    nlohmann::json j;
    j["flag"] = flag;
    j["simplicial"] = simplicial;
    if (!simplicial && L.nonsimplicial_witness) {
        j["duplicate_simplex"] = {
            {"verts", L.nonsimplicial_witness->first.verts},
            {"cube_a", L.nonsimplicial_witness->first.source_cube},
            {"cube_b", L.nonsimplicial_witness->second.source_cube},
        };
    }
    if (!empty_clique.empty()) {
        j["empty_clique"] = empty_clique;
        nlohmann::json edges = nlohmann::json::array();
        for (int id : empty_clique)
            edges.push_back({{"edge", L.dirs[id].edge}, {"end", L.dirs[id].end}});
        j["empty_clique_dirs"] = std::move(edges);
    }
    return j;
}

FlagResult is_flag(const SphericalComplex& L) {
    FlagResult res;
    res.simplicial = L.simplicial;
    if (!L.simplicial) {
        res.flag = false;
        return res;
    }
    // Level-wise clique extension. Every (m-1)-clique at a passed level is a
    // simplex, so extending simplices by common neighbors reaches every
    // m-clique, and the first failing clique is a minimal empty one.
    std::vector<std::vector<int>> level; // cliques of the current size, all spanning
    for (const auto& s : L.simplices)
        if (s.size() == 2) level.push_back(s);
    while (!level.empty()) {
        std::set<std::vector<int>> next_seen;
        std::vector<std::vector<int>> next;
        for (const auto& q : level) {
            for (int w : L.dir_ids) {
                if (std::binary_search(q.begin(), q.end(), w)) continue;
                bool joined = true;
                for (int u : q)
                    if (!L.adjacent(u, w)) { joined = false; break; }
                if (!joined) continue;
                std::vector<int> cand = q;
                cand.push_back(w);
                std::sort(cand.begin(), cand.end());
                if (!next_seen.insert(cand).second) continue;
                if (!L.simplices.count(cand)) {
                    res.flag = false;
                    res.empty_clique = cand;
                    return res;
                }
                next.push_back(std::move(cand));
            }
        }
        level = std::move(next);
    }
    res.flag = true;
    return res;
}

nlohmann::json FullResult::to_json(const SphericalComplex& L) const {
    nlohmann::json j;
    j["full"] = full;
    if (!witness.empty()) {
        j["witness_simplex"] = witness;
        nlohmann::json edges = nlohmann::json::array();
        for (int id : witness) edges.push_back({{"edge", L.dirs[id].edge}, {"end", L.dirs[id].end}});
        j["witness_dirs"] = std::move(edges);
    }
    return j;
}

FullResult is_full(const SphericalComplex& K, const SphericalComplex& L) {
    for (int id : K.dir_ids)
        if (!L.has_vertex(id))
            raise(ErrorCode::NotASubcomplex, "K has a vertex outside L");
    for (const auto& s : K.simplices)
        if (!L.simplices.count(s))
            raise(ErrorCode::NotASubcomplex, "K has a simplex outside L");

    FullResult res;
    for (const auto& s : L.simplices) {
        if (s.size() < 2 || K.has_simplex(s)) continue;
        bool verts_in_K = true;
        for (int v : s)
            if (!K.has_vertex(v)) { verts_in_K = false; break; }
        if (!verts_in_K) continue;
        // Minimize: descend while some proper face is itself offending.
        std::vector<int> w = s;
        for (;;) {
            bool shrank = false;
            if (w.size() > 2) {
                for (std::size_t drop = 0; drop < w.size(); ++drop) {
                    std::vector<int> f;
                    for (std::size_t i = 0; i < w.size(); ++i)
                        if (i != drop) f.push_back(w[i]);
                    if (!K.has_simplex(f)) { w = std::move(f); shrank = true; break; }
                }
            }
            if (!shrank) break;
        }
        res.full = false;
        res.witness = std::move(w);
        return res;
    }
    res.full = true;
    return res;
}

LinkTable::LinkTable(const CubicalComplex& X)
    : X_(&X), links_(X.vertex_count), fill_mutex_(std::make_unique<std::mutex>()) {}

const SphericalComplex& LinkTable::at(VertexId v) const {
    {
        std::lock_guard<std::mutex> lock(*fill_mutex_);
        if (links_[v].has_value()) return *links_[v];
    }
    SphericalComplex L = link(*X_, v);
    std::lock_guard<std::mutex> lock(*fill_mutex_);
    if (!links_[v].has_value()) links_[v] = std::move(L);
    return *links_[v];
}

} // namespace cubecvx
