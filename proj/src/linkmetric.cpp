#include "cubecvx/linkmetric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <random>

namespace cubecvx {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp1(double x) { return x < -1 ? -1 : (x > 1 ? 1 : x); }

std::size_t key_hash(const std::vector<int>& support, const std::vector<int>& lambda) {
    std::size_t h = support.size();
    for (int s : support) h = hash_combine(h, std::hash<int>()(s));
    for (int l : lambda) h = hash_combine(h, std::hash<int>()(l));
    return h;
}

/// Chord offsets within a simplex lattice: integer vectors summing to zero
/// with half-L1 norm <= r, first nonzero entry positive.
std::vector<std::vector<int>> chord_offsets(int ncoords, int r) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(ncoords, 0);
    std::function<void(int, int)> rec = [&](int idx, int sum) {
        if (idx == ncoords) {
            if (sum != 0) return;
            int l1 = 0;
            bool nonzero = false, first_pos = false;
            for (int v : cur) {
                l1 += std::abs(v);
                if (!nonzero && v != 0) { nonzero = true; first_pos = v > 0; }
            }
            if (nonzero && first_pos && l1 / 2 <= r) out.push_back(cur);
            return;
        }
        for (int v = -r; v <= r; ++v) {
            cur[idx] = v;
            rec(idx + 1, sum + v);
        }
        cur[idx] = 0;
    };
    rec(0, 0);
    return out;
}

double lattice_arc(const std::vector<int>& la, const std::vector<int>& lb) {
    double na = 0, nb = 0, dot = 0;
    for (std::size_t i = 0; i < la.size(); ++i) {
        na += static_cast<double>(la[i]) * la[i];
        nb += static_cast<double>(lb[i]) * lb[i];
        dot += static_cast<double>(la[i]) * lb[i];
    }
    return std::acos(clamp1(dot / std::sqrt(na * nb)));
}

double point_arc(const LinkPoint& a, const LinkPoint& b) {
    double dot = 0;
    std::size_t i = 0, j = 0;
    while (i < a.support.size() && j < b.support.size()) {
        if (a.support[i] < b.support[j]) ++i;
        else if (b.support[j] < a.support[i]) ++j;
        else { dot += a.w[i] * b.w[j]; ++i; ++j; }
    }
    return std::acos(clamp1(dot));
}

} // namespace

double LinkPoint::weight_of(int dir_id) const {
    for (std::size_t i = 0; i < support.size(); ++i)
        if (support[i] == dir_id) return w[i];
    return 0.0;
}

LinkMetric::LinkMetric(const SphericalComplex& L, int m, int stencil)
    : L_(&L), m_(m), stencil_(stencil) {
    auto tops = L.top_simplices();

    auto intern = [&](const std::vector<int>& support, const std::vector<int>& lambda) {
        std::size_t h = key_hash(support, lambda);
        auto& bucket = node_index_[h];
        for (int id : bucket)
            if (node_support_[id] == support && node_lambda_[id] == lambda) return id;
        int id = static_cast<int>(node_support_.size());
        node_support_.push_back(support);
        node_lambda_.push_back(lambda);
        bucket.push_back(id);
        return id;
    };

    std::vector<std::pair<std::pair<int, int>, double>> edges;
    std::unordered_map<std::uint64_t, char> edge_seen;

    for (const auto& top : tops) {
        const int nc = static_cast<int>(top.size());
        // Enumerate lattice points of this top simplex.
        std::vector<std::vector<int>> lams;
        std::vector<int> lam(nc, 0);
        std::function<void(int, int)> rec = [&](int idx, int left) {
            if (idx == nc - 1) {
                lam[idx] = left;
                lams.push_back(lam);
                return;
            }
            for (int v = 0; v <= left; ++v) {
                lam[idx] = v;
                rec(idx + 1, left - v);
            }
        };
        rec(0, m_);

        std::unordered_map<std::size_t, int> local; // lattice hash -> node id
        auto lam_hash = [&](const std::vector<int>& l) {
            std::size_t h = 0;
            for (int v : l) h = hash_combine(h, std::hash<int>()(v));
            return h;
        };
        auto canon_node = [&](const std::vector<int>& l) {
            std::vector<int> support, lambda;
            for (int i = 0; i < nc; ++i)
                if (l[i] > 0) { support.push_back(top[i]); lambda.push_back(l[i]); }
            return intern(support, lambda);
        };
        for (const auto& l : lams) local[lam_hash(l)] = canon_node(l);

        const auto offsets = chord_offsets(nc, stencil_);
        for (const auto& l : lams) {
            for (const auto& d : offsets) {
                std::vector<int> l2(nc);
                bool ok = true;
                for (int i = 0; i < nc; ++i) {
                    l2[i] = l[i] + d[i];
                    if (l2[i] < 0 || l2[i] > m_) { ok = false; break; }
                }
                if (!ok) continue;
                int a = local.at(lam_hash(l));
                int b = local.at(lam_hash(l2));
                if (a == b) continue;
                std::uint64_t k = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                                  static_cast<std::uint64_t>(std::max(a, b));
                if (edge_seen.emplace(k, 1).second)
                    edges.push_back({{a, b}, lattice_arc(l, l2)});
            }
        }
    }

    // CSR.
    const std::size_t n = node_support_.size();
    std::vector<std::size_t> deg(n, 0);
    for (const auto& e : edges) { ++deg[e.first.first]; ++deg[e.first.second]; }
    adj_off_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) adj_off_[i + 1] = adj_off_[i] + deg[i];
    adj_nbr_.assign(adj_off_[n], 0);
    adj_w_.assign(adj_off_[n], 0);
    std::vector<std::size_t> cursor(adj_off_.begin(), adj_off_.end() - 1);
    for (const auto& e : edges) {
        adj_nbr_[cursor[e.first.first]] = e.first.second;
        adj_w_[cursor[e.first.first]++] = e.second;
        adj_nbr_[cursor[e.first.second]] = e.first.first;
        adj_w_[cursor[e.first.second]++] = e.second;
    }
}

int LinkMetric::find_node(const std::vector<int>& support, const std::vector<int>& lambda) const {
    auto it = node_index_.find(key_hash(support, lambda));
    if (it == node_index_.end()) return -1;
    for (int id : it->second)
        if (node_support_[id] == support && node_lambda_[id] == lambda) return id;
    return -1;
}

int LinkMetric::locate(const LinkPoint& p) const {
    // Proportional rounding with largest-remainder fixup, zeros dropped.
    double sum = 0;
    for (double w : p.w) sum += w;
    std::vector<int> lam(p.support.size());
    std::vector<std::pair<double, int>> rem;
    int total = 0;
    for (std::size_t i = 0; i < p.w.size(); ++i) {
        double exact = m_ * p.w[i] / sum;
        lam[i] = static_cast<int>(std::floor(exact));
        total += lam[i];
        rem.push_back({exact - lam[i], static_cast<int>(i)});
    }
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (int k = 0; k < m_ - total && k < static_cast<int>(rem.size()); ++k) ++lam[rem[k].second];
    std::vector<int> support, lambda;
    for (std::size_t i = 0; i < lam.size(); ++i)
        if (lam[i] > 0) { support.push_back(p.support[i]); lambda.push_back(lam[i]); }
    int id = find_node(support, lambda);
    if (id < 0)
        raise(ErrorCode::BadArgument, "link point does not lie on a simplex of the complex");
    return id;
}

LinkPoint LinkMetric::point_of(int node) const {
    LinkPoint p;
    p.support = node_support_[node];
    double norm = 0;
    for (int l : node_lambda_[node]) norm += static_cast<double>(l) * l;
    norm = std::sqrt(norm);
    for (int l : node_lambda_[node]) p.w.push_back(l / norm);
    return p;
}

bool LinkMetric::node_in(int node, const SphericalComplex& K) const {
    return K.has_simplex(node_support_[node]);
}

std::vector<double> LinkMetric::field(const std::vector<std::pair<int, double>>& sources) const {
    const std::size_t n = node_support_.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    for (const auto& [id, d0] : sources)
        if (d0 < dist[id]) { dist[id] = d0; pq.push({d0, id}); }
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (std::size_t e = adj_off_[u]; e < adj_off_[u + 1]; ++e) {
            double nd = d + adj_w_[e];
            if (nd < dist[adj_nbr_[e]]) {
                dist[adj_nbr_[e]] = nd;
                pq.push({nd, adj_nbr_[e]});
            }
        }
    }
    return dist;
}

LinkMetric::PathResult LinkMetric::shortest(int src, int dst) const {
    const std::size_t n = node_support_.size();
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
        for (std::size_t e = adj_off_[u]; e < adj_off_[u + 1]; ++e) {
            double nd = d + adj_w_[e];
            if (nd < dist[adj_nbr_[e]]) {
                dist[adj_nbr_[e]] = nd;
                prev[adj_nbr_[e]] = u;
                pq.push({nd, adj_nbr_[e]});
            }
        }
    }
    PathResult res;
    if (!std::isfinite(dist[dst])) return res;
    res.reachable = true;
    res.length = dist[dst];
    for (int u = dst; u != -1; u = prev[u]) res.nodes.push_back(u);
    std::reverse(res.nodes.begin(), res.nodes.end());
    return res;
}

std::vector<std::pair<int, double>> LinkMetric::snap_sources(const LinkPoint& p) const {
    int s = locate(p);
    std::vector<std::pair<int, double>> src;
    src.push_back({s, point_arc(p, point_of(s))});
    for (std::size_t e = adj_off_[s]; e < adj_off_[s + 1]; ++e) {
        int nb = adj_nbr_[e];
        // Valid virtual-source hop only when p and the neighbor share a simplex.
        LinkPoint q = point_of(nb);
        std::vector<int> uni;
        std::set_union(p.support.begin(), p.support.end(), q.support.begin(), q.support.end(),
                       std::back_inserter(uni));
        if (L_->has_simplex(uni)) src.push_back({nb, point_arc(p, q)});
    }
    return src;
}

double LinkMetric::distance(const LinkPoint& a, const LinkPoint& b) const {
    // Same-simplex fast path: the chord is the geodesic inside one simplex.
    {
        std::vector<int> uni;
        std::set_union(a.support.begin(), a.support.end(), b.support.begin(), b.support.end(),
                       std::back_inserter(uni));
        if (L_->has_simplex(uni)) return point_arc(a, b);
    }
    auto dist = field(snap_sources(a));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [node, corr] : snap_sources(b)) best = std::min(best, dist[node] + corr);
    return best;
}

std::vector<double> LinkMetric::distance_to(const SphericalComplex& K) const {
    std::vector<std::pair<int, double>> sources;
    for (std::size_t i = 0; i < node_support_.size(); ++i)
        if (K.has_simplex(node_support_[i])) sources.push_back({static_cast<int>(i), 0.0});
    return field(sources);
}

double vertex_pair_distance(const SphericalComplex& L, int a, int b) {
    if (!L.has_vertex(a) || !L.has_vertex(b))
        raise(ErrorCode::BadArgument, "not vertices of the spherical complex");
    if (a == b) return 0;
    if (L.adjacent(a, b)) return kPi / 2;
    return kPi;
}

double link_path_distance(const SphericalComplex& L, const LinkPoint& a, const LinkPoint& b,
                          const LinkMetric* lm) {
    if (a.support.size() == 1 && b.support.size() == 1)
        return vertex_pair_distance(L, a.support[0], b.support[0]);
    double d;
    if (lm) {
        d = lm->distance(a, b);
    } else {
        LinkMetric local(L);
        d = local.distance(a, b);
    }
    return std::min(d, kPi);
}

double cone_distance(const SphericalComplex& L, double t, const LinkPoint& y, double t2,
                     const LinkPoint& y2, const LinkMetric* lm) {
    if (t < 0 || t2 < 0) raise(ErrorCode::BadArgument, "cone radii must be nonnegative");
    if (t == 0) return t2;
    if (t2 == 0) return t;
    double dpi = link_path_distance(L, y, y2, lm);
    double sq = t * t + t2 * t2 - 2 * t * t2 * std::cos(dpi);
    return std::sqrt(std::max(0.0, sq));
}

nlohmann::json DevelopedPath::to_json() const {
    nlohmann::json j;
    j["length"] = length;
    j["local_geodesic"] = local_geodesic;
    j["max_defect"] = max_defect;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : points) pts.push_back({p[0], p[1], p[2]});
    j["points"] = std::move(pts);
    return j;
}

DevelopedPath develop_in_hemisphere(const SphericalComplex& L, int v_star,
                                    std::span<const LinkPoint> samples) {
    if (samples.size() < 2) raise(ErrorCode::BadArgument, "need at least two samples");
    auto in_closed_star = [&](const LinkPoint& p) {
        std::vector<int> s = p.support;
        if (!std::binary_search(s.begin(), s.end(), v_star)) {
            s.push_back(v_star);
            std::sort(s.begin(), s.end());
        }
        return L.has_simplex(s);
    };
    for (const auto& p : samples)
        if (!in_closed_star(p))
            raise(ErrorCode::NotInClosedStar, "sample outside the closed star of the apex");
    for (std::size_t i = 1; i < samples.size(); ++i) {
        std::vector<int> uni;
        std::set_union(samples[i - 1].support.begin(), samples[i - 1].support.end(),
                       samples[i].support.begin(), samples[i].support.end(),
                       std::back_inserter(uni));
        if (!std::binary_search(uni.begin(), uni.end(), v_star)) {
            uni.push_back(v_star);
            std::sort(uni.begin(), uni.end());
        }
        if (!L.has_simplex(uni))
            raise(ErrorCode::InconsistentCarriers,
                  "consecutive samples have no common carrier simplex at the apex");
    }

    const std::size_t n = samples.size();
    std::vector<double> theta(n), seg(n, 0);
    for (std::size_t i = 0; i < n; ++i) theta[i] = std::acos(clamp1(samples[i].weight_of(v_star)));
    for (std::size_t i = 1; i < n; ++i) seg[i] = point_arc(samples[i - 1], samples[i]);

    DevelopedPath dev;
    std::vector<double> phi(n, 0);
    double last_nonpole_phi = 0;
    constexpr double eps = 1e-12;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::sin(theta[i]) < eps) {
            phi[i] = phi[i - 1];
        } else if (std::sin(theta[i - 1]) < eps) {
            phi[i] = last_nonpole_phi + kPi; // straight continuation through the apex
        } else {
            double c = (std::cos(seg[i]) - std::cos(theta[i - 1]) * std::cos(theta[i])) /
                       (std::sin(theta[i - 1]) * std::sin(theta[i]));
            phi[i] = phi[i - 1] + std::acos(clamp1(c));
        }
        if (std::sin(theta[i]) >= eps) last_nonpole_phi = phi[i];
        else if (i == 1) last_nonpole_phi = phi[0];
    }
    dev.points.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        dev.points[i] = {std::sin(theta[i]) * std::cos(phi[i]), std::sin(theta[i]) * std::sin(phi[i]),
                         std::cos(theta[i])};
    for (std::size_t i = 1; i < n; ++i) dev.length += seg[i];

    auto sdist = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return std::acos(clamp1(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]));
    };
    dev.max_defect = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double via = sdist(dev.points[i - 1], dev.points[i]) + sdist(dev.points[i], dev.points[i + 1]);
        double direct = sdist(dev.points[i - 1], dev.points[i + 1]);
        dev.max_defect = std::max(dev.max_defect, via - direct);
    }
    dev.local_geodesic = dev.max_defect <= 1e-8;
    return dev;
}

namespace {

LinkPoint sector_point(int v_star, int a_prev, int a_next, double theta, double psi) {
    struct Entry { int id; double w; };
    std::vector<Entry> e{{v_star, std::cos(theta)},
                         {a_prev, std::sin(theta) * std::cos(psi)},
                         {a_next, std::sin(theta) * std::sin(psi)}};
    std::sort(e.begin(), e.end(), [](const Entry& x, const Entry& y) { return x.id < y.id; });
    LinkPoint p;
    for (const auto& en : e)
        if (en.w > 1e-12) { p.support.push_back(en.id); p.w.push_back(en.w); }
    return p;
}

} // namespace

std::vector<StarCrossing> make_star_crossings(const SphericalComplex& L, int v_star, int max_count,
                                              std::uint64_t seed) {
    std::vector<StarCrossing> out;
    if (!L.has_vertex(v_star)) return out;
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(v_star)));

    // Neighbors and triangles at v_star.
    std::vector<int> nbrs;
    std::vector<std::array<int, 2>> tris; // triangles {v,a,b} as the pair (a,b)
    for (const auto& s : L.simplices) {
        if (!std::binary_search(s.begin(), s.end(), v_star)) continue;
        if (s.size() == 2) nbrs.push_back(s[0] == v_star ? s[1] : s[0]);
        if (s.size() == 3) {
            std::array<int, 2> ab{};
            int k = 0;
            for (int x : s)
                if (x != v_star) ab[k++] = x;
            tris.push_back(ab);
        }
    }

    // 1-dimensional star: through-vertex paths, each leg pi/2.
    if (tris.empty()) {
        for (std::size_t i = 0; i < nbrs.size() && static_cast<int>(out.size()) < max_count; ++i)
            for (std::size_t j = i + 1; j < nbrs.size() && static_cast<int>(out.size()) < max_count;
                 ++j) {
                StarCrossing c;
                c.v_star = v_star;
                c.samples = {LinkPoint::vertex(nbrs[i]), LinkPoint::vertex(v_star),
                             LinkPoint::vertex(nbrs[j])};
                c.sector_fan = {nbrs[i], nbrs[j]};
                out.push_back(std::move(c));
            }
        return out;
    }

    // Fans: sequences of distinct triangles, consecutive ones sharing a
    // {v_star, a} edge. Depth-first enumeration, capped.
    std::vector<std::vector<int>> fans; // as dir sequences a_0..a_n
    std::vector<int> used;
    std::function<void(std::vector<int>&)> grow = [&](std::vector<int>& fan) {
        if (static_cast<int>(fans.size()) >= 4 * max_count) return;
        if (fan.size() >= 3) fans.push_back(fan);
        if (fan.size() >= 5) return; // spans >= 2*pi already
        int tail = fan.back();
        for (std::size_t t = 0; t < tris.size(); ++t) {
            if (std::find(used.begin(), used.end(), static_cast<int>(t)) != used.end()) continue;
            int next = -1;
            if (tris[t][0] == tail) next = tris[t][1];
            else if (tris[t][1] == tail) next = tris[t][0];
            if (next < 0) continue;
            fan.push_back(next);
            used.push_back(static_cast<int>(t));
            grow(fan);
            used.pop_back();
            fan.pop_back();
        }
    };
    for (std::size_t t = 0; t < tris.size(); ++t) {
        std::vector<int> fan{tris[t][0], tris[t][1]};
        used = {static_cast<int>(t)};
        grow(fan);
        std::vector<int> rfan{tris[t][1], tris[t][0]};
        grow(rfan);
    }

    for (const auto& fan : fans) {
        if (static_cast<int>(out.size()) >= max_count) break;
        const int nsec = static_cast<int>(fan.size()) - 1;
        const double span = nsec * kPi / 2;
        if (span < kPi) continue;
        double alpha_max = span - kPi;
        double alpha = alpha_max * (0.25 + 0.5 * (rng() % 1000) / 999.0);
        if (alpha_max < 1e-12) alpha = 0;
        double beta = 0.25 + 1.0 * (rng() % 1000) / 999.0; // inclination in (0, pi/2)

        // Unwrapped longitude along the arc: phi(s) = alpha + atan2(sin s cos b, cos s).
        std::vector<double> svals{0.0};
        for (int k = 1; k <= 2 * nsec; ++k) {
            double t_k = k * kPi / 2 - alpha;
            if (t_k <= 1e-9 || t_k >= kPi - 1e-9) continue;
            double s;
            if (std::abs(t_k - kPi / 2) < 1e-12) s = kPi / 2;
            else {
                double tt = std::tan(t_k) / std::cos(beta);
                s = std::atan(tt);
                if (s < 0) s += kPi;
            }
            if (s > 1e-9 && s < kPi - 1e-9) svals.push_back(s);
        }
        svals.push_back(kPi);
        std::sort(svals.begin(), svals.end());
        // Mid-sector samples.
        std::vector<double> all;
        for (std::size_t i = 0; i + 1 < svals.size(); ++i) {
            all.push_back(svals[i]);
            all.push_back(0.5 * (svals[i] + svals[i + 1]));
        }
        all.push_back(svals.back());

        StarCrossing c;
        c.v_star = v_star;
        c.sector_fan = fan;
        bool ok = true;
        for (double s : all) {
            double phi = alpha + std::atan2(std::sin(s) * std::cos(beta), std::cos(s));
            double theta = std::acos(clamp1(std::sin(s) * std::sin(beta)));
            int sector = static_cast<int>(std::floor(phi / (kPi / 2) + 1e-12));
            if (sector < 0) sector = 0;
            if (sector >= nsec) sector = nsec - 1;
            double psi = phi - sector * kPi / 2;
            if (psi < -1e-9 || psi > kPi / 2 + 1e-9) { ok = false; break; }
            psi = std::clamp(psi, 0.0, kPi / 2);
            c.samples.push_back(sector_point(v_star, fan[sector], fan[sector + 1], theta, psi));
        }
        if (ok) out.push_back(std::move(c));
    }
    return out;
}

LinkEscape make_link_escape(const SphericalComplex& L, const std::vector<int>& minimal_witness,
                            int sample_count) {
    if (minimal_witness.size() < 2)
        raise(ErrorCode::BadArgument, "witness simplex needs dimension >= 1");
    if (!L.simplices.count(minimal_witness))
        raise(ErrorCode::BadArgument, "witness is not a simplex of the complex");
    LinkEscape esc;
    esc.sigma = minimal_witness;
    esc.apex = minimal_witness[0];
    esc.tau.assign(minimal_witness.begin() + 1, minimal_witness.end());
    const double invsq = 1.0 / std::sqrt(static_cast<double>(esc.tau.size()));
    for (int k = 0; k < sample_count; ++k) {
        double s = (kPi / 2) * k / (sample_count - 1);
        LinkPoint p;
        for (int id : esc.sigma) {
            double w = id == esc.apex ? std::cos(s) : std::sin(s) * invsq;
            if (w > 1e-12) { p.support.push_back(id); p.w.push_back(w); }
        }
        esc.samples.push_back(std::move(p));
    }
    double mid = kPi / 4;
    esc.mid_depth = std::asin(std::min(std::cos(mid), std::sin(mid) * invsq));
    return esc;
}

RadialCoord radial_coordinates(const CubicalComplex& X, const SphericalComplex& L, VertexId v,
                               const AmbientPoint& p_in) {
    AmbientPoint p = X.canonicalize(p_in);
    const Cube& c = X.cubes[p.cube];
    int ci = -1;
    for (std::size_t i = 0; i < c.corners.size(); ++i)
        if (c.corners[i] == v) { ci = static_cast<int>(i); break; }
    if (ci < 0) raise(ErrorCode::BadArgument, "point carrier does not contain the base vertex");

    std::vector<double> xi(c.dim);
    double norm2 = 0;
    for (int a = 0; a < c.dim; ++a) {
        double x = to_double(p.coords[a]);
        xi[a] = ((ci >> a) & 1) ? 1.0 - x : x;
        norm2 += xi[a] * xi[a];
    }
    RadialCoord rc;
    rc.t = std::sqrt(norm2) * X.metric_scale;
    if (rc.t == 0) return rc;

    struct Entry { int id; double w; };
    std::vector<Entry> entries;
    for (int a = 0; a < c.dim; ++a) {
        if (xi[a] <= 0) continue;
        int ax[1] = {a};
        SpanResult edge = X.span_face(p.cube, ci, ax);
        LinkVertex lv{edge.cell, static_cast<std::uint8_t>(edge.corner)};
        int id = -1;
        for (std::size_t d = 0; d < L.dirs.size(); ++d)
            if (L.dirs[d] == lv) { id = static_cast<int>(d); break; }
        if (id < 0) raise(ErrorCode::Internal, "direction missing from link");
        entries.push_back({id, xi[a] / std::sqrt(norm2)});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.id < b.id; });
    for (const auto& e : entries) { rc.u.support.push_back(e.id); rc.u.w.push_back(e.w); }
    return rc;
}

} // namespace cubecvx
