#include "cubecvx/certify.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

namespace cubecvx {

namespace {

nlohmann::json make_config(const CubicalComplex& X) {
    nlohmann::json j;
    j["cells"] = X.cubes.size();
    j["dim"] = X.dim;
    j["scale"] = X.metric_scale;
    return j;
}

/// Compact 1-skeleton: actual 0-cells only.
struct Skeleton {
    std::vector<VertexId> verts;      // compact index -> vertex id
    std::vector<int> of_vertex;       // vertex id -> compact index (-1 when absent)
    std::vector<std::vector<int>> adj;
    int n = 0;

    explicit Skeleton(const CubicalComplex& X) {
        of_vertex.assign(X.vertex_count, -1);
        for (VertexId v = 0; v < X.vertex_count; ++v)
            if (X.vertex_cell[v] != kNoCube) {
                of_vertex[v] = n++;
                verts.push_back(v);
            }
        adj.assign(n, {});
        for (const auto& c : X.cubes)
            if (c.dim == 1) {
                int a = of_vertex[c.corners[0]], b = of_vertex[c.corners[1]];
                adj[a].push_back(b);
                adj[b].push_back(a);
            }
        for (auto& row : adj) {
            std::sort(row.begin(), row.end());
            row.erase(std::unique(row.begin(), row.end()), row.end());
        }
    }

    bool adjacent(int a, int b) const {
        return std::binary_search(adj[a].begin(), adj[a].end(), b);
    }

    std::vector<std::uint16_t> bfs(int src) const {
        std::vector<std::uint16_t> d(n, std::numeric_limits<std::uint16_t>::max());
        std::queue<int> q;
        d[src] = 0;
        q.push(src);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int w : adj[u])
                if (d[w] == std::numeric_limits<std::uint16_t>::max()) {
                    d[w] = static_cast<std::uint16_t>(d[u] + 1);
                    q.push(w);
                }
        }
        return d;
    }
};

/// Median check via interval bitsets: every vertex triple must admit exactly
/// one vertex on geodesics between each pair.
nlohmann::json median_report(const Skeleton& G, bool* is_median) {
    const int n = G.n;
    nlohmann::json rep;
    rep["vertices"] = n;
    *is_median = true;
    if (n == 0) return rep;
    if (n > 2500) raise(ErrorCode::TooFine, "median check capped at 2500 vertices");

    std::vector<std::vector<std::uint16_t>> dist(n);
    for (int i = 0; i < n; ++i) dist[i] = G.bfs(i);
    for (int i = 0; i < n; ++i)
        if (dist[0][i] == std::numeric_limits<std::uint16_t>::max())
            raise(ErrorCode::NotConnected, "1-skeleton is not connected");

    const int words = (n + 63) / 64;
    // interval[u*n+v] packed rows: m with d(u,m)+d(m,v)=d(u,v)
    std::vector<std::uint64_t> interval(static_cast<std::size_t>(n) * n * words, 0);
    for (int u = 0; u < n; ++u)
        for (int v = u; v < n; ++v) {
            std::uint64_t* row = &interval[(static_cast<std::size_t>(u) * n + v) * words];
            for (int m = 0; m < n; ++m)
                if (dist[u][m] + dist[m][v] == dist[u][v]) row[m >> 6] |= 1ull << (m & 63);
            if (u != v)
                std::copy(row, row + words,
                          &interval[(static_cast<std::size_t>(v) * n + u) * words]);
        }

    auto row_of = [&](int u, int v) {
        return &interval[(static_cast<std::size_t>(u) * n + v) * words];
    };
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            const std::uint64_t* ruv = row_of(u, v);
            for (int w = v + 1; w < n; ++w) {
                const std::uint64_t* rvw = row_of(v, w);
                const std::uint64_t* ruw = row_of(u, w);
                int count = 0;
                for (int k = 0; k < words && count < 2; ++k)
                    count += std::popcount(ruv[k] & rvw[k] & ruw[k]);
                if (count != 1) {
                    *is_median = false;
                    rep["median"] = false;
                    rep["witness"] = {{"triple", {G.verts[u], G.verts[v], G.verts[w]}},
                                      {"median_count", count}};
                    return rep;
                }
            }
        }
    rep["median"] = true;
    return rep;
}

/// Cube patterns of the skeleton: vertex sets inducing combinatorial cubes.
/// Returns the maximal ones; `filled` reports whether each is a cube of X.
nlohmann::json cube_pattern_report(const CubicalComplex& X, const Skeleton& G, bool* all_filled) {
    const int n = G.n;
    *all_filled = true;
    nlohmann::json rep;

    // Patterns stored as corner lists indexed by bit masks.
    std::vector<std::vector<int>> patterns; // all dims >= 1
    std::set<std::vector<int>> seen;        // sorted vertex sets
    auto add_pattern = [&](std::vector<int> corners) {
        std::vector<int> key = corners;
        std::sort(key.begin(), key.end());
        if (!seen.insert(key).second) return;
        patterns.push_back(std::move(corners));
    };
    for (int u = 0; u < n; ++u)
        for (int w : G.adj[u])
            if (u < w) add_pattern({u, w});

    // Verified induced-cube extension: translate a k-pattern along a new edge.
    auto try_extend = [&](const std::vector<int>& P, int q0) -> std::optional<std::vector<int>> {
        const int sz = static_cast<int>(P.size());
        std::vector<int> Q(sz, -1);
        Q[0] = q0;
        for (int mask = 1; mask < sz; ++mask) {
            int low = mask & -mask;
            int prev = Q[mask ^ low];
            if (prev < 0) return std::nullopt;
            // Common neighbor of P[mask] and Q[mask ^ low], outside P.
            int found = -1;
            for (int cand : G.adj[P[mask]]) {
                if (!G.adjacent(cand, prev)) continue;
                if (std::find(P.begin(), P.end(), cand) != P.end()) continue;
                if (cand == q0 && mask != 0) continue;
                found = cand;
                break;
            }
            if (found < 0) return std::nullopt;
            Q[mask] = found;
        }
        std::vector<int> full = P;
        full.insert(full.end(), Q.begin(), Q.end());
        // Induced check: adjacency iff Hamming distance one; all distinct.
        std::vector<int> key = full;
        std::sort(key.begin(), key.end());
        if (std::adjacent_find(key.begin(), key.end()) != key.end()) return std::nullopt;
        const int total = static_cast<int>(full.size());
        for (int i = 0; i < total; ++i)
            for (int j = i + 1; j < total; ++j) {
                bool adj = G.adjacent(full[i], full[j]);
                bool ham1 = std::popcount(static_cast<unsigned>(i ^ j)) == 1;
                if (adj != ham1) return std::nullopt;
            }
        return full;
    };

    std::size_t level_begin = 0;
    for (int k = 1; k < X.dim + 2 && k <= 16; ++k) {
        std::size_t level_end = patterns.size();
        if (level_begin == level_end) break;
        for (std::size_t pi = level_begin; pi < level_end; ++pi) {
            std::vector<int> P = patterns[pi];
            for (int q0 : G.adj[P[0]]) {
                if (std::find(P.begin(), P.end(), q0) != P.end()) continue;
                if (auto ext = try_extend(P, q0)) add_pattern(std::move(*ext));
            }
        }
        level_begin = level_end;
    }

    // Maximality: drop patterns whose vertex set embeds as a face of a larger one.
    std::set<std::vector<int>> face_sets;
    for (const auto& P : patterns) {
        const int sz = static_cast<int>(P.size());
        int k = std::countr_zero(static_cast<unsigned>(sz));
        for (int axis = 0; axis < k; ++axis)
            for (int side = 0; side < 2; ++side) {
                std::vector<int> face;
                for (int m = 0; m < sz; ++m)
                    if (((m >> axis) & 1) == side) face.push_back(P[m]);
                std::sort(face.begin(), face.end());
                face_sets.insert(std::move(face));
            }
    }

    int n_max = 0, n_unfilled = 0;
    nlohmann::json witness;
    for (const auto& P : patterns) {
        std::vector<int> key = P;
        std::sort(key.begin(), key.end());
        if (face_sets.count(key)) continue;
        ++n_max;
        std::vector<VertexId> vset;
        for (int c : key) vset.push_back(G.verts[c]);
        if (X.cube_by_vertex_set(vset) == kNoCube) {
            ++n_unfilled;
            if (witness.is_null()) witness = {{"pattern_vertices", vset}};
        }
    }
    rep["patterns"] = patterns.size();
    rep["maximal_patterns"] = n_max;
    rep["unfilled"] = n_unfilled;
    if (!witness.is_null()) rep["witness"] = witness;
    *all_filled = n_unfilled == 0;
    return rep;
}

} // namespace

nlohmann::json Certificate::to_json() const {
    nlohmann::json j;
    j["claim"] = claim;
    j["holds"] = holds;
    j["witness"] = witness.is_null() ? nlohmann::json() : witness;
    j["subreports"] = subreports;
    j["input_sha"] = input_sha;
    j["config"] = config;
    return j;
}

Certificate is_npc(const LinkTable& links) {
    const CubicalComplex& X = links.complex();
    Certificate cert;
    cert.input_sha = X.canonical_digest();
    cert.config = make_config(X);

    struct VertexVerdict { bool ok = true; nlohmann::json detail; };
    std::vector<VertexVerdict> verdicts(X.vertex_count);
    parallel_for(X.vertex_count, [&](std::size_t v) {
        if (X.vertex_cell[v] == kNoCube) return;
        const SphericalComplex& L = links.at(static_cast<VertexId>(v));
        FlagResult fr = is_flag(L);
        if (!fr.flag || !fr.simplicial) {
            verdicts[v].ok = false;
            verdicts[v].detail = fr.to_json(L);
            verdicts[v].detail["vertex"] = v;
        }
    });
    int checked = 0, failed = 0;
    for (VertexId v = 0; v < X.vertex_count; ++v) {
        if (X.vertex_cell[v] == kNoCube) continue;
        ++checked;
        if (!verdicts[v].ok) {
            ++failed;
            if (cert.witness.is_null()) cert.witness = verdicts[v].detail;
        }
    }
    cert.holds = failed == 0;
    cert.claim = cert.holds ? "NPC" : "NOT_NPC";
    cert.subreports.push_back({{"kind", "links"}, {"vertices_checked", checked}, {"failures", failed}});
    return cert;
}

Certificate is_npc(const CubicalComplex& X) {
    LinkTable links(X);
    return is_npc(links);
}

Certificate is_cat0(const LinkTable& links) {
    const CubicalComplex& X = links.complex();
    if (X.cubes.empty()) raise(ErrorCode::EmptySubcomplex, "complex has no cells");
    {
        std::pair<CubeId, CubeId> w;
        if (!is_connected(SubcomplexRef::whole(X), &w))
            raise(ErrorCode::NotConnected, "complex is not connected");
    }

    Certificate cert;
    cert.input_sha = X.canonical_digest();
    cert.config = make_config(X);

    Certificate npc = is_npc(links);
    cert.subreports.push_back({{"kind", "npc"}, {"certificate", npc.to_json()}});
    if (!npc.holds) {
        cert.holds = false;
        cert.claim = "NOT_CAT0";
        cert.witness = {{"reason", "not_npc"}, {"npc_witness", npc.witness}};
        return cert;
    }

    Skeleton G(X);
    bool median_ok = false;
    nlohmann::json med = median_report(G, &median_ok);
    cert.subreports.push_back({{"kind", "median"}, {"report", med}});
    if (!median_ok) {
        cert.holds = false;
        cert.claim = "NOT_CAT0";
        cert.witness = {{"reason", "median_failure"}, {"median_witness", med["witness"]}};
        return cert;
    }

    bool filled = false;
    nlohmann::json pat = cube_pattern_report(X, G, &filled);
    cert.subreports.push_back({{"kind", "cube_patterns"}, {"report", pat}});
    if (!filled) {
        cert.holds = false;
        cert.claim = "NOT_CAT0";
        cert.witness = {{"reason", "unfilled_cube_pattern"}, {"pattern_witness", pat["witness"]}};
        return cert;
    }

    cert.holds = true;
    cert.claim = "CAT0";
    return cert;
}

Certificate is_cat0(const CubicalComplex& X) {
    LinkTable links(X);
    return is_cat0(links);
}

Certificate is_clc(const LinkTable& links, const SubcomplexRef& W) {
    const CubicalComplex& X = links.complex();
    Certificate cert;
    cert.input_sha = X.canonical_digest();
    cert.config = make_config(X);
    cert.config["subcomplex_cells"] = W.cube_ids.size();

    std::vector<VertexId> wverts;
    for (VertexId v = 0; v < X.vertex_count; ++v)
        if (X.vertex_cell[v] != kNoCube && W.contains(X.vertex_cell[v])) wverts.push_back(v);

    struct Verdict { bool ok = true; nlohmann::json detail; };
    std::vector<Verdict> verdicts(wverts.size());
    parallel_for(wverts.size(), [&](std::size_t i) {
        VertexId v = wverts[i];
        const SphericalComplex& L = links.at(v);
        if (!L.simplicial)
            raise(ErrorCode::Internal, "non-simplicial link in a validated cubical complex");
        SphericalComplex K = restrict_link(L, W);
        FullResult fr = is_full(K, L);
        if (!fr.full) {
            verdicts[i].ok = false;
            verdicts[i].detail = fr.to_json(L);
            verdicts[i].detail["vertex"] = v;
        }
    });
    int failed = 0;
    for (std::size_t i = 0; i < verdicts.size(); ++i)
        if (!verdicts[i].ok) {
            ++failed;
            if (cert.witness.is_null()) cert.witness = verdicts[i].detail;
        }
    cert.holds = failed == 0;
    cert.claim = cert.holds ? "CLC" : "NOT_CLC";
    cert.subreports.push_back(
        {{"kind", "clc_links"}, {"vertices_checked", wverts.size()}, {"failures", failed}});
    return cert;
}

Certificate is_clc(const CubicalComplex& X, const SubcomplexRef& W) {
    LinkTable links(X);
    return is_clc(links, W);
}

Certificate is_convex(const LinkTable& links, const SubcomplexRef& W, Cat0Evidence evidence) {
    const CubicalComplex& X = links.complex();
    if (W.empty()) raise(ErrorCode::EmptySubcomplex, "subcomplex has no cells");

    Certificate cert;
    cert.input_sha = X.canonical_digest();
    cert.config = make_config(X);
    cert.config["subcomplex_cells"] = W.cube_ids.size();

    if (evidence == Cat0Evidence::Checked) {
        Certificate cat0 = is_cat0(links);
        cert.subreports.push_back({{"kind", "ambient_cat0"}, {"certificate", cat0.to_json()}});
        if (!cat0.holds)
            raise(ErrorCode::PreconditionNotCAT0, "ambient complex is not CAT(0)");
    } else {
        cert.subreports.push_back(
            {{"kind", "ambient_cat0"}, {"inherited", true},
             {"note", "metric identical to a certified CAT(0) base after rescaling"}});
    }

    std::pair<CubeId, CubeId> disc;
    if (!is_connected(W, &disc)) {
        // Two components realize a geodesic leaving W; report, not an error.
        cert.holds = false;
        cert.claim = "NOT_CONVEX";
        cert.witness = {{"reason", "disconnected"},
                        {"component_cells", {disc.first, disc.second}}};
        cert.subreports.push_back({{"kind", "connectivity"}, {"connected", false}});
        return cert;
    }
    cert.subreports.push_back({{"kind", "connectivity"}, {"connected", true}});

    Certificate clc = is_clc(links, W);
    cert.subreports.push_back({{"kind", "clc"}, {"certificate", clc.to_json()}});
    cert.holds = clc.holds;
    cert.claim = cert.holds ? "CONVEX" : "NOT_CONVEX";
    if (!cert.holds) cert.witness = {{"reason", "not_clc"}, {"clc_witness", clc.witness}};
    return cert;
}

Certificate is_convex(const CubicalComplex& X, const SubcomplexRef& W) {
    LinkTable links(X);
    return is_convex(links, W, Cat0Evidence::Checked);
}

nlohmann::json EscapeProbe::to_json() const {
    nlohmann::json j;
    j["vertex"] = vertex;
    j["witness_dirs"] = witness_dirs;
    j["cube"] = cube;
    j["endpoint_a"] = point_json(a);
    j["endpoint_b"] = point_json(b);
    j["t_apex"] = t_apex;
    j["t_face"] = t_face;
    j["certified_depth"] = depth;
    j["depth_lambda"] = depth_lambda;
    return j;
}

EscapeProbe escape_probe(const LinkTable& links, const SubcomplexRef& W, VertexId v,
                         const std::vector<int>& minimal_witness) {
    const CubicalComplex& X = links.complex();
    const SphericalComplex& L = links.at(v);
    if (minimal_witness.size() < 2 || !L.simplices.count(minimal_witness))
        raise(ErrorCode::BadArgument, "escape probe needs a witness simplex of the link");

    // Cube and corner realizing the witness simplex at v.
    CubeId host = kNoCube;
    int host_corner = -1;
    for (const auto& raw : L.raw)
        if (std::includes(raw.verts.begin(), raw.verts.end(), minimal_witness.begin(),
                          minimal_witness.end())) {
            host = raw.source_cube;
            host_corner = raw.source_corner;
            break;
        }
    if (host == kNoCube) raise(ErrorCode::Internal, "witness simplex has no source cube");

    // Axes of the host cube matching the witness directions.
    std::vector<int> axes;
    for (int dir : minimal_witness) {
        int found = -1;
        for (int axis = 0; axis < X.cubes[host].dim; ++axis) {
            int ax[1] = {axis};
            SpanResult e = X.span_face(host, host_corner, ax);
            if (L.dirs[dir] == LinkVertex{e.cell, static_cast<std::uint8_t>(e.corner)}) {
                found = axis;
                break;
            }
        }
        if (found < 0) raise(ErrorCode::Internal, "witness direction not an axis of its source cube");
        axes.push_back(found);
    }
    std::sort(axes.begin(), axes.end());
    SpanResult span = X.span_face(host, host_corner, axes);
    const CubeId csig = span.cell;
    const int d = static_cast<int>(minimal_witness.size()); // = dim(csig)
    const int nf = d - 1;                                   // face directions

    // Scan radii and segment parameter for the deepest certified escape:
    // local frame xi relative to the corner at v, depth =
    // min(min_axis xi, 1/2 - |xi|), exact via the ball-cone correspondence.
    double best_depth = -1, best_lambda = 0;
    int best_ta = 0, best_tf = 0;
    for (int ta = 5; ta <= 49; ta += 2)
        for (int tf = 5; tf <= 49; tf += 2) {
            if (tf * tf * nf > 49 * 49) continue; // keep |B| < 1/2
            for (int lq = 2; lq <= 98; lq += 2) {
                double lam = lq / 100.0;
                double xi_apex = (1 - lam) * ta / 100.0;
                double xi_face = lam * tf / 100.0;
                double mind = std::min(xi_apex, xi_face);
                double norm = std::sqrt(xi_apex * xi_apex + nf * xi_face * xi_face);
                double depth = std::min(mind, 0.5 - norm);
                if (depth > best_depth) {
                    best_depth = depth;
                    best_lambda = lam;
                    best_ta = ta;
                    best_tf = tf;
                }
            }
        }

    EscapeProbe probe;
    probe.vertex = v;
    probe.witness_dirs = minimal_witness;
    probe.cube = csig;
    probe.t_apex = best_ta / 100.0;
    probe.t_face = best_tf / 100.0;
    probe.depth = best_depth * X.metric_scale;
    probe.depth_lambda = best_lambda;

    // Endpoints as exact points of csig: xi -> cube coordinates through the
    // corner at v.
    auto point_at = [&](const std::vector<Rational>& xi) {
        AmbientPoint p;
        p.cube = csig;
        p.coords.resize(d);
        for (int u = 0; u < d; ++u) {
            int bit = (span.corner >> u) & 1;
            p.coords[u] = bit ? Rational(1) - xi[u] : xi[u];
        }
        return X.canonicalize(std::move(p));
    };
    // Apex direction sits at the cell axis matching minimal_witness[0].
    {
        std::vector<Rational> xi_a(d, Rational(0)), xi_b(d, Rational(0));
        // span.cell_axis is indexed by the sorted `axes`; recover which cell
        // axis carries the apex direction.
        int apex_axis_in_host = -1;
        for (int axis = 0; axis < X.cubes[host].dim; ++axis) {
            int ax[1] = {axis};
            SpanResult e = X.span_face(host, host_corner, ax);
            if (L.dirs[minimal_witness[0]] == LinkVertex{e.cell, static_cast<std::uint8_t>(e.corner)}) {
                apex_axis_in_host = axis;
                break;
            }
        }
        int apex_pos = static_cast<int>(
            std::find(axes.begin(), axes.end(), apex_axis_in_host) - axes.begin());
        int apex_cell_axis = span.cell_axis[apex_pos];
        xi_a[apex_cell_axis] = Rational(best_ta, 100);
        for (int u = 0; u < d; ++u)
            if (u != apex_cell_axis) xi_b[u] = Rational(best_tf, 100);
        probe.a = point_at(xi_a);
        probe.b = point_at(xi_b);
    }
    if (!W.contains(probe.a.cube) || !W.contains(probe.b.cube))
        raise(ErrorCode::Internal, "escape endpoints must lie in W for a minimal witness");
    return probe;
}

nlohmann::json locally_convex_report(const LinkTable& links, const SubcomplexRef& W, double radius,
                                     int samples, int m, std::uint64_t seed,
                                     Cat0Evidence evidence) {
    const CubicalComplex& X = links.complex();
    if (evidence == Cat0Evidence::Checked) {
        Certificate cat0 = is_cat0(links);
        if (!cat0.holds) raise(ErrorCode::PreconditionNotCAT0, "ambient complex is not CAT(0)");
    }
    if (W.empty()) raise(ErrorCode::EmptySubcomplex, "subcomplex has no cells");

    GridGraph G = GridGraph::build(X, m);
    std::vector<int> wnodes = G.nodes_in(W);
    std::vector<double> to_W = G.field(wnodes);
    const double tol = 2.0 * G.pitch() * std::sqrt(static_cast<double>(std::max(1, X.dim)));

    std::mt19937_64 rng(seed);
    const int balls = std::max(1, samples / 20);
    int pairs_done = 0, violations = 0;
    double max_escape = 0;
    nlohmann::json first_violation;

    for (int bi = 0; bi < balls && pairs_done < samples; ++bi) {
        int center = wnodes[rng() % wnodes.size()];
        std::vector<double> from_center = G.field({center});
        std::vector<int> ball;
        for (int id : wnodes)
            if (from_center[id] < radius) ball.push_back(id);
        if (ball.size() < 2) continue;
        int per_ball = std::max(1, samples / balls);
        for (int k = 0; k < per_ball && pairs_done < samples; ++k) {
            int a = ball[rng() % ball.size()];
            int b = ball[rng() % ball.size()];
            if (a == b) continue;
            auto sp = G.shortest(a, b);
            if (!sp.reachable) raise(ErrorCode::Unreachable, "sample pair not connected");
            double worst = 0;
            for (int node : sp.nodes) worst = std::max(worst, to_W[node]);
            ++pairs_done;
            if (worst > tol) {
                ++violations;
                max_escape = std::max(max_escape, worst);
                if (first_violation.is_null())
                    first_violation = {{"a", a}, {"b", b}, {"escape_depth", worst},
                                       {"center", center}};
            }
        }
    }

    nlohmann::json rep;
    rep["radius"] = radius;
    rep["samples"] = pairs_done;
    rep["m"] = m;
    rep["pitch"] = G.pitch();
    rep["tolerance"] = tol;
    rep["violations"] = violations;
    rep["max_escape_depth"] = max_escape;
    if (!first_violation.is_null()) rep["first_violation"] = first_violation;
    rep["pass"] = violations == 0;
    return rep;
}

} // namespace cubecvx
