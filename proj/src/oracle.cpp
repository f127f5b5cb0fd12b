#include "cubecvx/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <random>

namespace cubecvx {

namespace {

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

/// Descends a float point to (approximately) its minimal carrier.
PointF canonicalize_f(const CubicalComplex& X, PointF p, double eps = 1e-9) {
    for (;;) {
        int drop = -1, side = 0;
        for (std::size_t j = 0; j < p.coords.size(); ++j) {
            if (p.coords[j] <= eps) { drop = static_cast<int>(j); side = 0; break; }
            if (p.coords[j] >= 1 - eps) { drop = static_cast<int>(j); side = 1; break; }
        }
        if (drop < 0) return p;
        const FaceEmbed& emb = X.faces[p.cube][2 * drop + side];
        std::vector<double> nc(p.coords.size() - 1);
        for (std::size_t u = 0; u < nc.size(); ++u) {
            double v = p.coords[emb.par_axis[u]];
            nc[u] = emb.par_flip[u] ? 1.0 - v : v;
        }
        p.cube = emb.cell;
        p.coords = std::move(nc);
    }
}

} // namespace

double PolyPath::length(const CubicalComplex& X) const {
    double s = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        s += X.cube_distance(seg_cube[i], pts[i], pts[i + 1]);
    return s;
}

nlohmann::json PolyPath::to_json(const CubicalComplex& X) const {
    nlohmann::json j;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : pts) arr.push_back({{"cube", p.cube}, {"coords", p.coords}});
    j["points"] = std::move(arr);
    j["segment_cubes"] = seg_cube;
    j["length"] = length(X);
    return j;
}

GridGraph GridGraph::build(const CubicalComplex& X, int m, std::size_t node_cap) {
    if (m < 1) raise(ErrorCode::BadArgument, "grid pitch 1/m requires m >= 1");
    std::size_t estimate = 0;
    for (const auto& c : X.cubes) {
        std::size_t pts = 1;
        for (int j = 0; j < c.dim; ++j) pts *= (m + 1);
        estimate += pts;
        if (estimate > node_cap)
            raise(ErrorCode::TooFine, "estimated node count exceeds cap " + std::to_string(node_cap));
    }

    GridGraph G;
    G.X_ = &X;
    G.m_ = m;
    G.dim_warning_ = X.dim >= 4;

    // Node interning pass, with per-cube lattice tables for the edge pass.
    std::vector<std::vector<int>> local(X.cubes.size());
    for (CubeId c = 0; c < static_cast<CubeId>(X.cubes.size()); ++c) {
        const int k = X.cubes[c].dim;
        std::size_t pts = 1;
        for (int j = 0; j < k; ++j) pts *= (m + 1);
        local[c].resize(pts);
        std::vector<int> lam(k, 0);
        for (std::size_t idx = 0; idx < pts; ++idx) {
            AmbientPoint p;
            p.cube = c;
            p.coords.resize(k);
            for (int j = 0; j < k; ++j) p.coords[j] = Rational(lam[j], m);
            p = X.canonicalize(std::move(p));
            auto it = G.index_.find(p);
            int id;
            if (it == G.index_.end()) {
                id = static_cast<int>(G.node_point_.size());
                G.index_.emplace(p, id);
                G.node_point_.push_back(std::move(p));
            } else {
                id = it->second;
            }
            local[c][idx] = id;
            for (int j = 0; j < k; ++j) {
                if (++lam[j] <= m) break;
                lam[j] = 0;
            }
        }
    }

    struct Edge { int a, b; double w; CubeId cube; };
    std::vector<Edge> edges;
    std::unordered_set<std::uint64_t> seen;
    const double step = X.metric_scale / m;
    for (CubeId c = 0; c < static_cast<CubeId>(X.cubes.size()); ++c) {
        const int k = X.cubes[c].dim;
        if (k == 0) continue;
        std::size_t pts = local[c].size();
        std::vector<int> lam(k, 0);
        // Offsets with positive leading nonzero component, enumerated once.
        std::vector<std::vector<int>> offs;
        {
            std::vector<int> d(k, 0);
            std::function<void(int)> rec = [&](int idx) {
                if (idx == k) {
                    for (int v : d)
                        if (v != 0) {
                            for (int u : d) {
                                if (u > 0) { offs.push_back(d); return; }
                                if (u < 0) return;
                            }
                        }
                    return;
                }
                for (int v = -1; v <= 1; ++v) { d[idx] = v; rec(idx + 1); }
                d[idx] = 0;
            };
            rec(0);
        }
        for (std::size_t idx = 0; idx < pts; ++idx) {
            for (const auto& d : offs) {
                std::size_t nidx = 0, mult = 1;
                bool ok = true;
                int nrm = 0;
                for (int j = 0; j < k; ++j) {
                    int v = lam[j] + d[j];
                    if (v < 0 || v > m) { ok = false; break; }
                    nidx += static_cast<std::size_t>(v) * mult;
                    mult *= (m + 1);
                    nrm += d[j] * d[j];
                }
                if (!ok) continue;
                int a = local[c][idx], b = local[c][nidx];
                if (a == b) continue;
                std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                                    static_cast<std::uint64_t>(std::max(a, b));
                if (seen.insert(key).second)
                    edges.push_back({a, b, std::sqrt(double(nrm)) * step, c});
            }
            for (int j = 0; j < k; ++j) {
                if (++lam[j] <= m) break;
                lam[j] = 0;
            }
        }
    }

    const std::size_t n = G.node_point_.size();
    std::vector<std::size_t> deg(n, 0);
    for (const auto& e : edges) { ++deg[e.a]; ++deg[e.b]; }
    G.off_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) G.off_[i + 1] = G.off_[i] + deg[i];
    G.nbr_.assign(G.off_[n], 0);
    G.w_.assign(G.off_[n], 0);
    G.ecube_.assign(G.off_[n], kNoCube);
    std::vector<std::size_t> cursor(G.off_.begin(), G.off_.end() - 1);
    for (const auto& e : edges) {
        G.nbr_[cursor[e.a]] = e.b; G.w_[cursor[e.a]] = e.w; G.ecube_[cursor[e.a]++] = e.cube;
        G.nbr_[cursor[e.b]] = e.a; G.w_[cursor[e.b]] = e.w; G.ecube_[cursor[e.b]++] = e.cube;
    }
    return G;
}

PointF GridGraph::node_pointf(int id) const {
    const AmbientPoint& p = node_point_[id];
    PointF f;
    f.cube = p.cube;
    f.coords.reserve(p.coords.size());
    for (const auto& r : p.coords) f.coords.push_back(to_double(r));
    return f;
}

int GridGraph::node_of(const AmbientPoint& canonical) const {
    auto it = index_.find(canonical);
    return it == index_.end() ? -1 : it->second;
}

int GridGraph::snap(const AmbientPoint& p_in, double* snap_dist) const {
    AmbientPoint p = X_->canonicalize(p_in);
    AmbientPoint q;
    q.cube = p.cube;
    q.coords.reserve(p.coords.size());
    double d2 = 0;
    for (const auto& r : p.coords) {
        long long lam = (2 * r.numerator() * m_ + r.denominator()) / (2 * r.denominator());
        if (lam < 0) lam = 0;
        if (lam > m_) lam = m_;
        Rational snapped(lam, m_);
        double diff = to_double(r - snapped);
        d2 += diff * diff;
        q.coords.push_back(snapped);
    }
    if (snap_dist) *snap_dist = std::sqrt(d2) * X_->metric_scale;
    q = X_->canonicalize(std::move(q));
    int id = node_of(q);
    if (id < 0) raise(ErrorCode::Internal, "snapped point is not a grid node");
    return id;
}

GridGraph::ShortestResult GridGraph::shortest(int src, int dst) const {
    const std::size_t n = node_point_.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> prev(n, -1);
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    dist[src] = 0;
    pq.push({0, src});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (u == dst) break;
        if (d > dist[u]) continue;
        for (std::size_t e = off_[u]; e < off_[u + 1]; ++e) {
            double nd = d + w_[e];
            if (nd < dist[nbr_[e]]) {
                dist[nbr_[e]] = nd;
                prev[nbr_[e]] = u;
                pq.push({nd, nbr_[e]});
            }
        }
    }
    ShortestResult res;
    if (!std::isfinite(dist[dst])) return res;
    res.reachable = true;
    res.length = dist[dst];
    for (int u = dst; u != -1; u = prev[u]) res.nodes.push_back(u);
    std::reverse(res.nodes.begin(), res.nodes.end());
    return res;
}

std::vector<double> GridGraph::field(const std::vector<int>& sources) const {
    const std::size_t n = node_point_.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    for (int s : sources) { dist[s] = 0; pq.push({0, s}); }
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (std::size_t e = off_[u]; e < off_[u + 1]; ++e) {
            double nd = d + w_[e];
            if (nd < dist[nbr_[e]]) {
                dist[nbr_[e]] = nd;
                pq.push({nd, nbr_[e]});
            }
        }
    }
    return dist;
}

std::vector<int> GridGraph::nodes_in(const SubcomplexRef& W) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < node_point_.size(); ++i)
        if (W.contains(node_point_[i].cube)) out.push_back(static_cast<int>(i));
    return out;
}

PolyPath GridGraph::path_of(const std::vector<int>& nodes) const {
    PolyPath path;
    for (int id : nodes) path.pts.push_back(node_pointf(id));
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        // Edge cube lookup in the CSR row.
        int a = nodes[i], b = nodes[i + 1];
        CubeId cube = kNoCube;
        for (std::size_t e = off_[a]; e < off_[a + 1]; ++e)
            if (nbr_[e] == b) { cube = ecube_[e]; break; }
        if (cube == kNoCube) cube = X_->common_face(node_point_[a].cube, node_point_[b].cube);
        if (cube == kNoCube) raise(ErrorCode::Internal, "path nodes do not share a cube");
        path.seg_cube.push_back(cube);
    }
    return path;
}

DistanceResult oracle_distance(const GridGraph& G, const AmbientPoint& a, const AmbientPoint& b) {
    DistanceResult res;
    res.node_a = G.snap(a, &res.snap_a);
    res.node_b = G.snap(b, &res.snap_b);
    auto sp = G.shortest(res.node_a, res.node_b);
    if (!sp.reachable)
        raise(ErrorCode::Unreachable, "no grid path between the snapped endpoints");
    res.length = sp.length;
    res.path = G.path_of(sp.nodes);
    return res;
}

PolyPath straighten(const CubicalComplex& X, PolyPath path, int max_iterations) {
    if (path.pts.size() < 3) return path;
    const PolyPath original = path;
    const double original_length = path.length(X);

    // Shortcut pass: drop a breakpoint whenever its two neighbors share one
    // of the adjacent segment cubes; the direct chord is never longer. This
    // collapses in-cube zigzags to exact segments in a few sweeps.
    auto shortcut = [&] {
        bool changed = true;
        while (changed && path.pts.size() > 2) {
            changed = false;
            PolyPath next;
            next.pts.push_back(path.pts.front());
            std::size_t i = 1;
            while (i < path.pts.size()) {
                bool dropped = false;
                if (i + 1 < path.pts.size()) {
                    const PointF& prev = next.pts.back();
                    const PointF& succ = path.pts[i + 1];
                    for (CubeId cand : {path.seg_cube[i - 1], path.seg_cube[i]}) {
                        if (X.chart_of(cand, prev.cube) && X.chart_of(cand, succ.cube)) {
                            next.pts.push_back(succ);
                            next.seg_cube.push_back(cand);
                            i += 2;
                            dropped = true;
                            changed = true;
                            break;
                        }
                    }
                }
                if (!dropped) {
                    next.pts.push_back(path.pts[i]);
                    next.seg_cube.push_back(path.seg_cube[i - 1]);
                    ++i;
                }
            }
            path = std::move(next);
        }
    };

    shortcut();
    if (path.pts.size() < 3) return path;
    double total = path.length(X);
    for (int iter = 0; iter < max_iterations; ++iter) {
        double improved = 0;
        for (std::size_t i = 1; i + 1 < path.pts.size(); ++i) {
            CubeId ca = path.seg_cube[i - 1], cb = path.seg_cube[i];
            PointF cur = canonicalize_f(X, path.pts[i]);
            // Largest common face of the segment cubes containing the point.
            CubeId dom = kNoCube;
            int best_dim = -1;
            const auto& la = X.subcells[ca];
            const auto& lb = X.subcells[cb];
            std::size_t ia = 0, ib = 0;
            while (ia < la.size() && ib < lb.size()) {
                if (la[ia].cell < lb[ib].cell) ++ia;
                else if (lb[ib].cell < la[ia].cell) ++ib;
                else {
                    CubeId cand = la[ia].cell;
                    if (X.cubes[cand].dim > best_dim && X.chart_of(cand, cur.cube))
                        { best_dim = X.cubes[cand].dim; dom = cand; }
                    ++ia; ++ib;
                }
            }
            if (dom == kNoCube || best_dim == 0) continue;
            std::vector<double> y = X.coords_in(dom, cur);
            const SubcellChart* cha = X.chart_of(ca, dom);
            const SubcellChart* chb = X.chart_of(cb, dom);
            std::vector<double> xa = X.coords_in(ca, path.pts[i - 1]);
            std::vector<double> xb = X.coords_in(cb, path.pts[i + 1]);
            auto emb = [&](const SubcellChart* ch, const std::vector<double>& yy, int dim_big) {
                std::vector<double> x(dim_big, 0.0);
                for (int a2 = 0; a2 < dim_big; ++a2)
                    if (ch->fixed_val[a2] >= 0) x[a2] = ch->fixed_val[a2];
                for (std::size_t u = 0; u < ch->axis.size(); ++u)
                    x[ch->axis[u]] = ch->flip[u] ? 1.0 - yy[u] : yy[u];
                return x;
            };
            auto f = [&](const std::vector<double>& yy) {
                return euclid(xa, emb(cha, yy, X.cubes[ca].dim)) +
                       euclid(xb, emb(chb, yy, X.cubes[cb].dim));
            };
            double before = f(y);
            // Golden-section per coordinate, a few sweeps.
            constexpr double gr = 0.6180339887498949;
            for (int sweep = 0; sweep < 3; ++sweep) {
                for (std::size_t u = 0; u < y.size(); ++u) {
                    double lo = 0, hi = 1;
                    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
                    auto eval = [&](double v) {
                        double save = y[u];
                        y[u] = v;
                        double r = f(y);
                        y[u] = save;
                        return r;
                    };
                    double f1 = eval(x1), f2 = eval(x2);
                    for (int it2 = 0; it2 < 40; ++it2) {
                        if (f1 < f2) { hi = x2; x2 = x1; f2 = f1; x1 = hi - gr * (hi - lo); f1 = eval(x1); }
                        else { lo = x1; x1 = x2; f1 = f2; x2 = lo + gr * (hi - lo); f2 = eval(x2); }
                    }
                    double ybest = 0.5 * (lo + hi);
                    if (eval(ybest) < f(y)) y[u] = ybest;
                }
            }
            PointF cand = canonicalize_f(X, PointF{dom, y});
            double after = euclid(xa, X.coords_in(ca, cand)) + euclid(xb, X.coords_in(cb, cand));
            if (after < before - 1e-15) {
                improved += before - after;
                path.pts[i] = std::move(cand);
            }
        }
        double new_total = path.length(X);
        if (total - new_total < 1e-9 && improved * X.metric_scale < 1e-9) { total = new_total; break; }
        total = new_total;
    }
    // Merge consecutive breakpoints that converged to the same canonical point.
    PolyPath out;
    out.pts.push_back(path.pts.front());
    for (std::size_t i = 0; i + 1 < path.pts.size(); ++i) {
        const PointF& nxt = path.pts[i + 1];
        const PointF& prev = out.pts.back();
        if (prev.cube == nxt.cube && euclid(prev.coords, nxt.coords) < 1e-12) continue;
        out.pts.push_back(nxt);
        out.seg_cube.push_back(path.seg_cube[i]);
    }
    // Shortening is an invariant of the operation; guard against rounding.
    if (out.length(X) > original_length) return original;
    return out;
}

double refined_distance(const GridGraph& G, const AmbientPoint& a, const AmbientPoint& b,
                        PolyPath* out_path) {
    DistanceResult res = oracle_distance(G, a, b);
    PolyPath s = straighten(G.complex(), std::move(res.path));
    double len = s.length(G.complex());
    if (out_path) *out_path = std::move(s);
    return len;
}

nlohmann::json ball_cone_isometry_test(const CubicalComplex& X, VertexId v, int samples, int m,
                                       std::uint64_t seed, int sample_m) {
    if (v < 0 || v >= X.vertex_count || X.vertex_cell[v] == kNoCube)
        raise(ErrorCode::NotAVertex, "base vertex out of range");
    if (sample_m <= 0) sample_m = m;
    if (m % sample_m != 0)
        raise(ErrorCode::BadArgument, "sample lattice must divide the grid lattice");
    GridGraph G = GridGraph::build(X, m);
    SphericalComplex L = link(X, v);
    LinkMetric lm(L);

    // Lattice points inside B(v, 1/2), collected from the cubes at v.
    std::vector<int> candidates;
    {
        std::unordered_set<int> seen;
        for (CubeId c : X.vertex_cofaces[v]) {
            const Cube& cube = X.cubes[c];
            if (cube.dim < 1) continue;
            for (std::size_t ci = 0; ci < cube.corners.size(); ++ci) {
                if (cube.corners[ci] != v) continue;
                const int k = cube.dim;
                std::vector<int> lam(k, 0);
                std::size_t pts = 1;
                for (int j = 0; j < k; ++j) pts *= (sample_m + 1);
                for (std::size_t idx = 0; idx < pts; ++idx) {
                    long long r2 = 0;
                    for (int j = 0; j < k; ++j) r2 += static_cast<long long>(lam[j]) * lam[j];
                    if (r2 > 0 && 4 * r2 < static_cast<long long>(sample_m) * sample_m) {
                        AmbientPoint p;
                        p.cube = c;
                        p.coords.resize(k);
                        for (int j = 0; j < k; ++j) {
                            Rational xi(lam[j], sample_m);
                            p.coords[j] = ((ci >> j) & 1) ? Rational(1) - xi : xi;
                        }
                        p = X.canonicalize(std::move(p));
                        int id = G.node_of(p);
                        if (id >= 0 && seen.insert(id).second) candidates.push_back(id);
                    }
                    for (int j = 0; j < k; ++j) {
                        if (++lam[j] <= sample_m) break;
                        lam[j] = 0;
                    }
                }
            }
        }
        std::sort(candidates.begin(), candidates.end());
    }

    nlohmann::json report;
    report["vertex"] = v;
    report["m"] = m;
    report["sample_m"] = sample_m;
    report["candidates"] = candidates.size();
    if (candidates.size() < 2) {
        report["pairs"] = 0;
        report["max_deviation"] = 0.0;
        return report;
    }

    std::mt19937_64 rng(seed);
    double max_dev = 0, sum_dev = 0;
    int count = 0;
    nlohmann::json worst;
    for (int it = 0; it < samples; ++it) {
        int a = candidates[rng() % candidates.size()];
        int b = candidates[rng() % candidates.size()];
        if (a == b) continue;
        RadialCoord ra = radial_coordinates(X, L, v, G.node_point(a));
        RadialCoord rb = radial_coordinates(X, L, v, G.node_point(b));
        double dc = cone_distance(L, ra.t, ra.u, rb.t, rb.u, &lm);
        double go = refined_distance(G, G.node_point(a), G.node_point(b));
        double dev = std::abs(go - dc);
        sum_dev += dev;
        ++count;
        if (dev > max_dev) {
            max_dev = dev;
            worst = {{"node_a", a}, {"node_b", b}, {"t", ra.t}, {"t2", rb.t},
                     {"oracle", go}, {"cone", dc}};
        }
    }
    // Radial sanity: distance to the vertex itself equals the radius.
    double max_radial_dev = 0;
    AmbientPoint vp{X.vertex_cell[v], {}};
    for (int it = 0; it < std::min<std::size_t>(16, candidates.size()); ++it) {
        int a = candidates[rng() % candidates.size()];
        RadialCoord ra = radial_coordinates(X, L, v, G.node_point(a));
        double go = refined_distance(G, G.node_point(a), vp);
        max_radial_dev = std::max(max_radial_dev, std::abs(go - ra.t));
    }
    report["pairs"] = count;
    report["max_deviation"] = max_dev;
    report["mean_deviation"] = count ? sum_dev / count : 0.0;
    report["max_radial_deviation"] = max_radial_dev;
    report["worst_pair"] = worst;
    return report;
}

} // namespace cubecvx
