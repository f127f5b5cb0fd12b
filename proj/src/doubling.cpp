#include "cubecvx/doubling.hpp"

#include <algorithm>
#include <queue>
#include <random>

namespace cubecvx {

nlohmann::json DoubledComplex::simplicity_report() const {
    nlohmann::json j;
    j["simple"] = dbl.simple;
    if (!dbl.simple) {
        // Find one duplicate pair for the report.
        std::map<std::vector<VertexId>, CubeId> seen;
        for (CubeId c = 0; c < static_cast<CubeId>(dbl.cubes.size()); ++c) {
            std::vector<VertexId> key = dbl.cubes[c].corners;
            std::sort(key.begin(), key.end());
            auto [it, inserted] = seen.try_emplace(std::move(key), c);
            if (!inserted) {
                j["duplicate_pair"] = {it->second, c};
                break;
            }
        }
    }
    nlohmann::json counts = nlohmann::json::array();
    for (int d = 0; d <= dbl.dim; ++d) counts.push_back(dbl.cell_count(d));
    j["cells_by_dim"] = std::move(counts);
    return j;
}

DoubledComplex make_double(const CubicalComplex& X, const SubcomplexRef& W) {
    if (W.empty()) raise(ErrorCode::EmptySubcomplex, "double along an empty subcomplex");
    DoubledComplex D;
    D.base = &X;

    // Vertex layout: shared W-vertices first, then the two private copies.
    std::vector<char> wvert(X.vertex_count, 0);
    for (VertexId v = 0; v < X.vertex_count; ++v)
        if (X.vertex_cell[v] != kNoCube && W.contains(X.vertex_cell[v])) wvert[v] = 1;
    D.vfold1.assign(X.vertex_count, -1);
    D.vfold2.assign(X.vertex_count, -1);
    int nv = 0;
    for (VertexId v = 0; v < X.vertex_count; ++v)
        if (wvert[v]) { D.vfold1[v] = D.vfold2[v] = nv++; }
    for (VertexId v = 0; v < X.vertex_count; ++v)
        if (!wvert[v] && X.vertex_cell[v] != kNoCube) D.vfold1[v] = nv++;
    for (VertexId v = 0; v < X.vertex_count; ++v)
        if (!wvert[v] && X.vertex_cell[v] != kNoCube) D.vfold2[v] = nv++;

    // Cell layout: shared W-cells, then the two private copies.
    const CubeId n = static_cast<CubeId>(X.cubes.size());
    D.fold1.assign(n, kNoCube);
    D.fold2.assign(n, kNoCube);
    CubeId nc = 0;
    for (CubeId c = 0; c < n; ++c)
        if (W.contains(c)) D.fold1[c] = D.fold2[c] = nc++;
    for (CubeId c = 0; c < n; ++c)
        if (!W.contains(c)) D.fold1[c] = nc++;
    for (CubeId c = 0; c < n; ++c)
        if (!W.contains(c)) D.fold2[c] = nc++;

    std::vector<Cube> cells(nc);
    std::vector<std::vector<FaceEmbed>> faces(nc);
    std::vector<CubeId> source(nc, kNoCube); // double-cell -> base cell
    std::vector<int> copy_of(nc, 0);         // 0 shared, 1, 2
    for (CubeId c = 0; c < n; ++c) {
        for (int copy = 1; copy <= 2; ++copy) {
            CubeId id = copy == 1 ? D.fold1[c] : D.fold2[c];
            if (copy == 2 && D.fold2[c] == D.fold1[c]) continue;
            const auto& vmap = copy == 1 ? D.vfold1 : D.vfold2;
            Cube cell;
            cell.dim = X.cubes[c].dim;
            for (VertexId v : X.cubes[c].corners) cell.corners.push_back(vmap[v]);
            cells[id] = std::move(cell);
            source[id] = c;
            copy_of[id] = W.contains(c) ? 0 : copy;
            const auto& fmap = copy == 1 ? D.fold1 : D.fold2;
            for (const auto& emb : X.faces[c]) {
                FaceEmbed e = emb;
                e.cell = fmap[emb.cell];
                faces[id].push_back(std::move(e));
            }
        }
    }

    D.dbl = CubicalComplex::from_cells_relaxed(nv, std::move(cells), std::move(faces),
                                               X.metric_scale);

    D.involution.assign(nc, kNoCube);
    D.fixed_cell.assign(nc, 0);
    for (CubeId c = 0; c < n; ++c) {
        D.involution[D.fold1[c]] = D.fold2[c];
        D.involution[D.fold2[c]] = D.fold1[c];
        if (D.fold1[c] == D.fold2[c]) {
            D.fixed_cell[D.fold1[c]] = 1;
            D.shared_cells.push_back(D.fold1[c]);
        }
    }
    D.vinvolution.assign(nv, -1);
    for (VertexId v = 0; v < X.vertex_count; ++v) {
        if (X.vertex_cell[v] == kNoCube) continue;
        D.vinvolution[D.vfold1[v]] = D.vfold2[v];
        D.vinvolution[D.vfold2[v]] = D.vfold1[v];
    }
    std::sort(D.shared_cells.begin(), D.shared_cells.end());
    return D;
}

nlohmann::json double_flag_report(const CubicalComplex& X, const SubcomplexRef& W,
                                  const DoubledComplex* prebuilt) {
    DoubledComplex local;
    const DoubledComplex* D = prebuilt;
    if (!D) {
        local = make_double(X, W);
        D = &local;
    }

    nlohmann::json rep;
    rep["simplicity"] = D->simplicity_report();

    struct Verdict { bool ok = true; nlohmann::json detail; };
    std::vector<Verdict> verdicts(D->dbl.vertex_count);
    parallel_for(D->dbl.vertex_count, [&](std::size_t v) {
        if (D->dbl.vertex_cell[v] == kNoCube) return;
        SphericalComplex L = link(D->dbl, static_cast<VertexId>(v));
        FlagResult fr = is_flag(L);
        if (!fr.flag || !fr.simplicial) {
            verdicts[v].ok = false;
            verdicts[v].detail = fr.to_json(L);
            verdicts[v].detail["vertex"] = v;
        }
    });
    int failures = 0;
    nlohmann::json witness;
    for (VertexId v = 0; v < D->dbl.vertex_count; ++v)
        if (!verdicts[v].ok) {
            ++failures;
            if (witness.is_null()) witness = verdicts[v].detail;
        }
    rep["vertices_checked"] = D->dbl.vertex_count;
    rep["failures"] = failures;
    rep["all_links_flag"] = failures == 0;
    if (!witness.is_null()) rep["witness"] = witness;

    // Cell-count identity, per dimension: |double| = 2|X| - |W|.
    nlohmann::json counts = nlohmann::json::array();
    bool counts_ok = true;
    for (int d = 0; d <= X.dim; ++d) {
        std::size_t xd = X.cell_count(d), wd = W.cell_count(d), dd = D->dbl.cell_count(d);
        counts.push_back({{"dim", d}, {"X", xd}, {"W", wd}, {"double", dd}});
        if (dd != 2 * xd - wd) counts_ok = false;
    }
    rep["cell_counts"] = std::move(counts);
    rep["cell_count_identity"] = counts_ok;

    // Involution sanity: order two, fixed set = image of W.
    bool inv_ok = true;
    for (CubeId c = 0; c < static_cast<CubeId>(D->dbl.cubes.size()); ++c) {
        if (D->involution[D->involution[c]] != c) inv_ok = false;
        if ((D->involution[c] == c) != static_cast<bool>(D->fixed_cell[c])) inv_ok = false;
    }
    rep["involution_ok"] = inv_ok;
    return rep;
}

namespace {

std::vector<int> bfs_dist(const std::vector<std::vector<int>>& adj, int src) {
    std::vector<int> d(adj.size(), -1);
    std::queue<int> q;
    d[src] = 0;
    q.push(src);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int w : adj[u])
            if (d[w] < 0) {
                d[w] = d[u] + 1;
                q.push(w);
            }
    }
    return d;
}

std::vector<std::vector<int>> skeleton_adj(const CubicalComplex& X) {
    std::vector<std::vector<int>> adj(X.vertex_count);
    for (const auto& c : X.cubes)
        if (c.dim == 1) {
            adj[c.corners[0]].push_back(c.corners[1]);
            adj[c.corners[1]].push_back(c.corners[0]);
        }
    return adj;
}

} // namespace

nlohmann::json double_geodesic_reflection_test(const CubicalComplex& X, const SubcomplexRef& W,
                                               int samples, int m, std::uint64_t seed) {
    {
        Certificate cat0 = is_cat0(X);
        if (!cat0.holds) raise(ErrorCode::PreconditionFailed, "ambient complex is not CAT(0)");
        Certificate clc = is_clc(X, W);
        if (!clc.holds) raise(ErrorCode::PreconditionFailed, "subcomplex is not CLC");
    }
    DoubledComplex D = make_double(X, W);

    nlohmann::json rep;
    rep["simple"] = D.simple();

    // Fold is an isometric embedding on the 1-skeleton, and the involution
    // preserves vertex distances exactly.
    auto adjX = skeleton_adj(X);
    auto adjD = skeleton_adj(D.dbl);
    bool fold_iso = true, inv_iso = true;
    for (VertexId v = 0; v < X.vertex_count; ++v) {
        if (X.vertex_cell[v] == kNoCube) continue;
        auto dx = bfs_dist(adjX, v);
        auto dd = bfs_dist(adjD, D.vfold1[v]);
        auto dd_img = bfs_dist(adjD, D.vinvolution[D.vfold1[v]]);
        for (VertexId u = 0; u < X.vertex_count; ++u) {
            if (X.vertex_cell[u] == kNoCube) continue;
            if (dd[D.vfold1[u]] != dx[u]) fold_iso = false;
            if (dd_img[D.vinvolution[D.vfold1[u]]] != dd[D.vfold1[u]]) inv_iso = false;
        }
    }
    rep["fold_vertex_isometry"] = fold_iso;
    rep["involution_vertex_isometry"] = inv_iso;

    // Sampled W-to-W geodesics in the double: involution-symmetric and near W.
    GridGraph G = GridGraph::build(D.dbl, m);
    SubcomplexRef Wimg = SubcomplexRef::from_cubes(D.dbl, D.shared_cells);
    std::vector<int> wnodes = G.nodes_in(Wimg);
    std::vector<double> to_W = G.field(wnodes);
    const double tol = 2.0 * G.pitch() * std::sqrt(static_cast<double>(std::max(1, D.dbl.dim)));

    auto involution_node = [&](int id) {
        const AmbientPoint& p = G.node_point(id);
        AmbientPoint q{D.involution[p.cube], p.coords};
        int nid = G.node_of(D.dbl.canonicalize(std::move(q)));
        if (nid < 0) raise(ErrorCode::Internal, "involution image of a grid node is not a node");
        return nid;
    };

    std::mt19937_64 rng(seed);
    int done = 0, sym_fail = 0, near_fail = 0;
    double max_asym = 0, max_escape = 0;
    for (int it = 0; it < samples && !wnodes.empty(); ++it) {
        int a = wnodes[rng() % wnodes.size()];
        int b = wnodes[rng() % wnodes.size()];
        auto sp = G.shortest(a, b);
        if (!sp.reachable) continue;
        ++done;
        std::vector<int> mirrored;
        for (int node : sp.nodes) mirrored.push_back(involution_node(node));
        auto from_mirror = G.field(mirrored);
        double asym = 0, escape = 0;
        for (int node : sp.nodes) {
            asym = std::max(asym, from_mirror[node]);
            escape = std::max(escape, to_W[node]);
        }
        max_asym = std::max(max_asym, asym);
        max_escape = std::max(max_escape, escape);
        if (asym > tol) ++sym_fail;
        if (escape > tol) ++near_fail;
    }
    rep["samples"] = done;
    rep["tolerance"] = tol;
    rep["max_involution_asymmetry"] = max_asym;
    rep["max_escape_from_W"] = max_escape;
    rep["symmetry_failures"] = sym_fail;
    rep["near_W_failures"] = near_fail;
    rep["pass"] = fold_iso && inv_iso && sym_fail == 0 && near_fail == 0;
    return rep;
}

} // namespace cubecvx
