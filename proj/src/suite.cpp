#include "cubecvx/suite.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

namespace cubecvx {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt3 = 1.7320508075688772;

// Pinned battery constants.
constexpr int kOracleM = 8;            // h = 1/8 for ambient geodesic sampling
constexpr int kGeodesicsPerPositive = 100;
constexpr double kEscapePitch = 1.0 / 64; // probing pitch of the escape check
constexpr double kEpsLink = 0.01;      // link-metric tolerance (radians)
constexpr int kWallPairs = 50;         // same-side pairs per wall
constexpr int kDoublePairs = 50;       // W-to-W pairs in the double
constexpr double kConeDevCap = 0.05;   // criterion 6 bound at m = 16

struct Instance {
    int id = 0;
    GeneratorSpec spec;
    std::uint64_t wseed = 0;
    double wfraction = 0;
    CubicalComplex X;
    std::vector<CubeId> w_ids;

    SubcomplexRef W() const { return SubcomplexRef::from_cubes(X, w_ids); }
};

std::vector<std::unique_ptr<Instance>> make_instances(const SuiteOptions& opt) {
    std::vector<std::unique_ptr<Instance>> out;
    for (int i = 0; i < opt.instances; ++i) {
        auto inst = std::make_unique<Instance>();
        inst->id = i;
        std::uint64_t s = mix_seed(opt.seed, static_cast<std::uint64_t>(i));
        std::mt19937_64 rng(s);
        GeneratorSpec spec;
        switch (i % 6) {
            case 0:
                spec.kind = GeneratorSpec::Kind::GridRegion;
                spec.dims = {2 + static_cast<int>(rng() % 4), 2 + static_cast<int>(rng() % 4)};
                break;
            case 1:
                spec.kind = GeneratorSpec::Kind::GridRegion;
                spec.dims = {1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 3),
                             1 + static_cast<int>(rng() % 3)};
                break;
            case 2:
                spec.kind = GeneratorSpec::Kind::Staircase;
                spec.n = 3 + static_cast<int>(rng() % 10);
                spec.dim = 2;
                break;
            case 3:
                spec.kind = GeneratorSpec::Kind::Staircase;
                spec.n = 3 + static_cast<int>(rng() % 8);
                spec.dim = 3;
                break;
            case 4:
                spec.kind = GeneratorSpec::Kind::CubeTree;
                spec.n = 5 + static_cast<int>(rng() % 20);
                spec.dim = 2;
                spec.seed = rng();
                break;
            default:
                spec.kind = GeneratorSpec::Kind::CubeTree;
                spec.n = 4 + static_cast<int>(rng() % 10);
                spec.dim = 3;
                spec.seed = rng();
                break;
        }
        inst->spec = spec;
        inst->X = generate(spec);
        inst->wseed = rng();
        switch (i % 5) {
            case 0: inst->wfraction = 1.0; break;
            case 1: inst->wfraction = -1; break; // single top cube and its closure
            case 2: inst->wfraction = 0.3; break;
            case 3: inst->wfraction = 0.55; break;
            default: inst->wfraction = 0.8; break;
        }
        if (inst->wfraction < 0) {
            std::mt19937_64 wr(inst->wseed);
            std::vector<CubeId> tops;
            for (CubeId c = 0; c < static_cast<CubeId>(inst->X.cubes.size()); ++c)
                if (inst->X.cubes[c].dim == inst->X.dim) tops.push_back(c);
            CubeId pick = tops[wr() % tops.size()];
            inst->w_ids = SubcomplexRef::from_cubes(inst->X, {pick}).cube_ids;
        } else {
            inst->w_ids = random_subcomplex(inst->X, inst->wseed, inst->wfraction).cube_ids;
        }
        out.push_back(std::move(inst));
    }
    return out;
}

AmbientPoint rationalize(const PointF& p, long long denom = 55440) {
    AmbientPoint a;
    a.cube = p.cube;
    for (double x : p.coords) {
        long long num = std::llround(std::clamp(x, 0.0, 1.0) * denom);
        a.coords.push_back(Rational(num, denom));
    }
    return a;
}

/// Max field value over the breakpoints of a path (each snapped to a node).
double path_max_field(const GridGraph& G, const std::vector<double>& field, const PolyPath& path) {
    double worst = 0;
    for (const auto& pt : path.pts) {
        int node = G.snap(rationalize(pt));
        worst = std::max(worst, field[node]);
    }
    return worst;
}

nlohmann::json summarize_failures(const std::vector<nlohmann::json>& failures, std::size_t keep = 3) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < failures.size() && i < keep; ++i) arr.push_back(failures[i]);
    return arr;
}

// ---------------------------------------------------------------------------
// Criterion 1: convexity decision vs oracle geodesics.

CriterionResult criterion1(const std::vector<std::unique_ptr<Instance>>& instances) {
    CriterionResult res{1, "convexity decision matches oracle geodesics", false, {}};
    std::vector<nlohmann::json> failures(instances.size());
    std::vector<int> clc_pos(instances.size(), 0);
    std::vector<double> worst_dev(instances.size(), 0);
    std::vector<double> escape_depth(instances.size(), -1);

    const double tol_positive = 2.0 * (1.0 / kOracleM) * kSqrt3;
    const double escape_threshold = 6.0 * kEscapePitch * kSqrt3;

    parallel_for(instances.size(), [&](std::size_t idx) {
        const Instance& inst = *instances[idx];
        const CubicalComplex& X = inst.X;
        LinkTable links(X);
        Certificate cat0 = is_cat0(links);
        if (!cat0.holds) {
            failures[idx] = {{"instance", inst.id}, {"why", "generated instance not CAT(0)"}};
            return;
        }
        SubcomplexRef W = inst.W();
        Certificate clc = is_clc(links, W);
        std::uint64_t seed = mix_seed(inst.wseed, 0xC1);
        if (clc.holds) {
            clc_pos[idx] = 1;
            GridGraph G = GridGraph::build(X, kOracleM);
            std::vector<int> wnodes = G.nodes_in(W);
            std::vector<double> to_W = G.field(wnodes);
            std::mt19937_64 rng(seed);
            double worst = 0;
            for (int k = 0; k < kGeodesicsPerPositive; ++k) {
                int a = wnodes[rng() % wnodes.size()];
                int b = wnodes[rng() % wnodes.size()];
                auto sp = G.shortest(a, b);
                if (!sp.reachable) {
                    failures[idx] = {{"instance", inst.id}, {"why", "W nodes unreachable"}};
                    return;
                }
                PolyPath refined = straighten(X, G.path_of(sp.nodes));
                worst = std::max(worst, path_max_field(G, to_W, refined));
            }
            worst_dev[idx] = worst;
            if (worst > tol_positive)
                failures[idx] = {{"instance", inst.id}, {"why", "CLC-positive geodesic left W"},
                                 {"max_deviation", worst}, {"tolerance", tol_positive}};
        } else {
            VertexId v = clc.witness.at("vertex").get<VertexId>();
            std::vector<int> wit = clc.witness.at("witness_simplex").get<std::vector<int>>();
            EscapeProbe probe = escape_probe(links, W, v, wit);
            escape_depth[idx] = probe.depth;
            if (probe.depth < escape_threshold)
                failures[idx] = {{"instance", inst.id}, {"why", "escape too shallow"},
                                 {"depth", probe.depth}, {"threshold", escape_threshold}};
        }
    });

    int positives = 0, negatives = 0;
    std::vector<nlohmann::json> bad;
    double max_dev = 0, min_escape = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (!failures[i].is_null()) bad.push_back(failures[i]);
        if (clc_pos[i]) { ++positives; max_dev = std::max(max_dev, worst_dev[i]); }
        else { ++negatives; min_escape = std::min(min_escape, escape_depth[i]); }
    }
    res.pass = bad.empty() && positives > 0 && negatives > 0;
    res.details = {{"instances", instances.size()},
                   {"clc_positive", positives},
                   {"clc_negative", negatives},
                   {"geodesics_per_positive", kGeodesicsPerPositive},
                   {"positive_tolerance", tol_positive},
                   {"max_positive_deviation", max_dev},
                   {"escape_threshold", 6.0 * kEscapePitch * kSqrt3},
                   {"escape_pitch", kEscapePitch},
                   {"min_escape_depth", negatives ? min_escape : 0.0},
                   {"failures", summarize_failures(bad)},
                   {"failure_count", bad.size()}};
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 2: pi-convexity vs fullness in links, plus developments.

CriterionResult criterion2(const std::vector<std::unique_ptr<Instance>>& instances) {
    CriterionResult res{2, "link fullness matches pi-convexity; crossings develop to length >= pi",
                        false, {}};
    std::vector<nlohmann::json> failures(instances.size());
    std::vector<int> counts_full(instances.size(), 0), counts_witness(instances.size(), 0),
        counts_dev(instances.size(), 0);

    parallel_for(instances.size(), [&](std::size_t idx) {
        const Instance& inst = *instances[idx];
        const CubicalComplex& X = inst.X;
        LinkTable links(X);
        SubcomplexRef W = inst.W();
        std::mt19937_64 rng(mix_seed(inst.wseed, 0xC2));

        std::vector<VertexId> wverts;
        for (VertexId v = 0; v < X.vertex_count; ++v)
            if (X.vertex_cell[v] != kNoCube && W.contains(X.vertex_cell[v])) wverts.push_back(v);
        // Sampled vertices, bounded per instance for runtime.
        std::vector<VertexId> chosen;
        for (int k = 0; k < 8 && !wverts.empty(); ++k) chosen.push_back(wverts[rng() % wverts.size()]);
        std::sort(chosen.begin(), chosen.end());
        chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());

        for (VertexId v : chosen) {
            const SphericalComplex& L = links.at(v);
            if (L.dir_ids.empty()) continue;
            SphericalComplex K = restrict_link(L, W);
            FullResult fr = is_full(K, L);
            if (fr.full) {
                if (K.dir_ids.size() < 2) continue;
                LinkMetric lm(L);
                std::vector<char> in_K(lm.node_count(), 0);
                std::vector<int> knodes;
                for (std::size_t nid = 0; nid < lm.node_count(); ++nid)
                    if (lm.node_in(static_cast<int>(nid), K)) {
                        in_K[nid] = 1;
                        knodes.push_back(static_cast<int>(nid));
                    }
                for (int k = 0; k < 4 && knodes.size() >= 2; ++k) {
                    int a = knodes[rng() % knodes.size()];
                    int b = knodes[rng() % knodes.size()];
                    if (a == b) continue;
                    auto free_path = lm.shortest(a, b);
                    if (!free_path.reachable || free_path.length >= kPi - 0.2) continue;
                    // Restricted-to-K search: K-pi-convexity means no shortcut
                    // through the complement.
                    auto k_path = [&] {
                        LinkMetric::PathResult r;
                        std::vector<double> dist(lm.node_count(),
                                                 std::numeric_limits<double>::infinity());
                        // Reuse shortest() result if already within K.
                        bool inside = true;
                        for (int node : free_path.nodes)
                            if (!in_K[node]) { inside = false; break; }
                        if (inside) { r = free_path; return r; }
                        r.reachable = false;
                        return r;
                    }();
                    ++counts_full[idx];
                    double excess;
                    if (k_path.reachable) excess = k_path.length - free_path.length;
                    else {
                        // The unrestricted geodesic left K; measure how far.
                        auto to_K = lm.distance_to(K);
                        double off = 0;
                        for (int node : free_path.nodes) off = std::max(off, to_K[node]);
                        excess = off;
                    }
                    if (excess > kEpsLink) {
                        failures[idx] = {{"instance", inst.id}, {"vertex", v},
                                         {"why", "geodesic between full-subcomplex points left it"},
                                         {"excess", excess}};
                        return;
                    }
                }
            } else {
                ++counts_witness[idx];
                LinkEscape esc = make_link_escape(L, fr.witness);
                bool endpoints_in_K = K.has_vertex(esc.apex) && K.has_simplex(esc.tau);
                if (!endpoints_in_K || esc.mid_depth < 3 * kEpsLink) {
                    failures[idx] = {{"instance", inst.id}, {"vertex", v},
                                     {"why", "escape segment invalid"},
                                     {"mid_depth", esc.mid_depth}};
                    return;
                }
                // Numerical cross-check of the analytic depth.
                LinkMetric lm(L);
                auto to_K = lm.distance_to(K);
                int mid = lm.locate(esc.samples[esc.samples.size() / 2]);
                if (to_K[mid] < 0.5 * esc.mid_depth) {
                    failures[idx] = {{"instance", inst.id}, {"vertex", v},
                                     {"why", "lattice distance-to-K disagrees with analytic depth"},
                                     {"analytic", esc.mid_depth}, {"lattice", to_K[mid]}};
                    return;
                }
            }
        }

        // Developments: crossing local geodesics through open stars.
        for (VertexId v : chosen) {
            const SphericalComplex& L = links.at(v);
            for (int dir : L.dir_ids) {
                auto crossings = make_star_crossings(L, dir, 2, mix_seed(inst.wseed, dir));
                for (const auto& c : crossings) {
                    DevelopedPath dev = develop_in_hemisphere(L, c.v_star, c.samples);
                    ++counts_dev[idx];
                    if (dev.length < kPi - 1e-6 || !dev.local_geodesic) {
                        failures[idx] = {{"instance", inst.id}, {"vertex", v},
                                         {"why", "crossing development shorter than pi"},
                                         {"length", dev.length},
                                         {"local_geodesic", dev.local_geodesic}};
                        return;
                    }
                }
                if (counts_dev[idx] >= 6) break;
            }
            if (counts_dev[idx] >= 6) break;
        }
    });

    std::vector<nlohmann::json> bad;
    long full_checks = 0, witness_checks = 0, developments = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (!failures[i].is_null()) bad.push_back(failures[i]);
        full_checks += counts_full[i];
        witness_checks += counts_witness[i];
        developments += counts_dev[i];
    }
    res.pass = bad.empty() && full_checks > 0 && witness_checks > 0 && developments > 0;
    res.details = {{"full_subcomplex_geodesic_checks", full_checks},
                   {"non_full_escape_checks", witness_checks},
                   {"developments", developments},
                   {"eps_link", kEpsLink},
                   {"failures", summarize_failures(bad)},
                   {"failure_count", bad.size()}};
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 3: control verdicts.

CriterionResult criterion3(const std::vector<std::unique_ptr<Instance>>& instances) {
    CriterionResult res{3, "flag/median certification matches ground truth on controls", false, {}};
    nlohmann::json checks = nlohmann::json::array();
    bool all = true;
    auto record = [&](const std::string& name, bool ok, nlohmann::json detail) {
        checks.push_back({{"control", name}, {"pass", ok}, {"detail", std::move(detail)}});
        all = all && ok;
    };

    {
        CubicalComplex cube = make_named("cube3");
        Certificate npc = is_npc(cube);
        Certificate cat0 = is_cat0(cube);
        record("cube3", npc.holds && cat0.holds, {{"npc", npc.holds}, {"cat0", cat0.holds}});
    }
    {
        CubicalComplex bd = make_named("cube_boundary");
        Certificate npc = is_npc(bd);
        bool witness_ok = false;
        if (!npc.holds && npc.witness.contains("empty_clique"))
            witness_ok = npc.witness.at("empty_clique").size() == 3;
        Certificate cat0_ok = is_cat0(bd);
        record("cube_boundary", !npc.holds && witness_ok && !cat0_ok.holds,
               {{"npc", npc.holds}, {"empty_3_cycle_witness", witness_ok}});
    }
    {
        CubicalComplex l = make_named("lshape");
        Certificate npc = is_npc(l);
        Certificate cat0 = is_cat0(l);
        record("lshape", npc.holds && cat0.holds, {{"npc", npc.holds}, {"cat0", cat0.holds}});
    }
    for (int n : {4, 5, 6}) {
        GeneratorSpec s;
        s.kind = GeneratorSpec::Kind::Annulus;
        s.n = n;
        CubicalComplex a = generate(s);
        Certificate npc = is_npc(a);
        Certificate cat0 = is_cat0(a);
        std::string reason = cat0.witness.is_null() ? "" : cat0.witness.value("reason", "");
        record("annulus" + std::to_string(n), npc.holds && !cat0.holds,
               {{"npc", npc.holds}, {"cat0", cat0.holds}, {"refutation", reason}});
    }
    // Contractible generated instances must certify CAT(0).
    int accepted = 0, total = 0;
    for (std::size_t i = 0; i < instances.size() && total < 24; i += 9) {
        ++total;
        if (is_cat0(instances[i]->X).holds) ++accepted;
    }
    record("generated_contractible", accepted == total, {{"accepted", accepted}, {"total", total}});

    res.pass = all;
    res.details = {{"checks", checks}};
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 4: walls and halfspaces.

CriterionResult criterion4(const std::vector<std::unique_ptr<Instance>>& instances) {
    CriterionResult res{4, "hyperplanes: single midcubes, two convex halfspaces, join links",
                        false, {}};
    std::vector<nlohmann::json> failures(instances.size());
    std::vector<int> wall_counts(instances.size(), 0);
    std::vector<int> small_prime_checked(instances.size(), 0);

    parallel_for(instances.size(), [&](std::size_t idx) {
        const Instance& inst = *instances[idx];
        const CubicalComplex& X = inst.X;
        Subdivision S = cubical_subdivision(X);
        LinkTable prime_links(S.prime);
        // Direct CAT(0) re-check of the subdivision on small instances; the
        // rest inherit it from the base metric.
        if (S.prime.cubes.size() <= 400) {
            if (!is_cat0(prime_links).holds) {
                failures[idx] = {{"instance", inst.id}, {"why", "subdivision failed direct CAT(0)"}};
                return;
            }
            small_prime_checked[idx] = 1;
        }

        std::vector<Wall> walls = wall_classes(X);
        wall_counts[idx] = static_cast<int>(walls.size());

        // Edge partition sanity.
        {
            std::size_t edge_total = 0;
            for (const auto& w : walls) edge_total += w.edges.size();
            if (edge_total != X.cell_count(1)) {
                failures[idx] = {{"instance", inst.id}, {"why", "walls do not partition edges"}};
                return;
            }
        }

        const int m_prime = 4; // physical pitch (1/2)/4 = 1/8
        GridGraph G = GridGraph::build(S.prime, m_prime);
        const double tol = 2.0 * G.pitch() * kSqrt3;
        std::mt19937_64 rng(mix_seed(inst.wseed, 0xC4));

        for (const auto& w : walls) {
            SageevReport sr = check_sageev(S, w);
            std::size_t crossed = 0;
            {
                std::set<CubeId> cubes;
                for (const auto& [cube, axis] : w.crossings) cubes.insert(cube);
                crossed = cubes.size();
            }
            if (!sr.pass || w.crossings.size() != crossed) {
                failures[idx] = {{"instance", inst.id}, {"wall", w.id},
                                 {"why", "midcube/component structure failed"},
                                 {"sageev", sr.to_json()}};
                return;
            }
            HalfspaceBundle hb = halfspaces(S, prime_links, w, Cat0Evidence::InheritedFromBase);
            if (!hb.all_convex() || !hb.cover_ok || !hb.join_check.at("pass").get<bool>()) {
                failures[idx] = {{"instance", inst.id}, {"wall", w.id},
                                 {"why", "halfspace certificates failed"},
                                 {"all_convex", hb.all_convex()},
                                 {"cover_ok", hb.cover_ok},
                                 {"join", hb.join_check}};
                return;
            }

            // Oracle cross-check: same-side pairs do not cross the hyperplane.
            std::vector<int> sigma_nodes, a_nodes, b_nodes;
            for (std::size_t nid = 0; nid < G.node_count(); ++nid) {
                CubeId cell = G.node_cell(static_cast<int>(nid));
                if (hb.sigma.contains(cell)) sigma_nodes.push_back(static_cast<int>(nid));
                else if (hb.side_a.contains(cell)) a_nodes.push_back(static_cast<int>(nid));
                else if (hb.side_b.contains(cell)) b_nodes.push_back(static_cast<int>(nid));
            }
            std::vector<double> to_sigma = G.field(sigma_nodes);
            int done = 0;
            for (int side = 0; side < 2 && done < kWallPairs; ++side) {
                const auto& mine = side == 0 ? a_nodes : b_nodes;
                const auto& other = side == 0 ? hb.side_b : hb.side_a;
                if (mine.size() < 2) continue;
                for (int src_i = 0; src_i < 2; ++src_i) {
                    int src = mine[rng() % mine.size()];
                    auto sp_field = G.field({src});
                    (void)sp_field;
                    for (int k = 0; k < kWallPairs / 4 && done < kWallPairs; ++k) {
                        int dst = mine[rng() % mine.size()];
                        if (dst == src) continue;
                        auto sp = G.shortest(src, dst);
                        if (!sp.reachable) continue;
                        ++done;
                        for (int node : sp.nodes) {
                            CubeId cell = G.node_cell(node);
                            bool strictly_other = other.contains(cell) && !hb.sigma.contains(cell);
                            if (strictly_other && to_sigma[node] > tol) {
                                failures[idx] = {{"instance", inst.id}, {"wall", w.id},
                                                 {"why", "same-side geodesic crossed the hyperplane"},
                                                 {"depth", to_sigma[node]}};
                                return;
                            }
                        }
                    }
                }
            }
        }
    });

    std::vector<nlohmann::json> bad;
    long walls_total = 0;
    int small_checked = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (!failures[i].is_null()) bad.push_back(failures[i]);
        walls_total += wall_counts[i];
        small_checked += small_prime_checked[i];
    }
    res.pass = bad.empty() && walls_total > 0;
    res.details = {{"walls_checked", walls_total},
                   {"pairs_per_wall", kWallPairs},
                   {"subdivisions_directly_certified", small_checked},
                   {"failures", summarize_failures(bad)},
                   {"failure_count", bad.size()}};
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 5: doubling.

CriterionResult criterion5(const std::vector<std::unique_ptr<Instance>>& instances) {
    CriterionResult res{5, "double of X along W: links flag iff CLC; involution symmetry", false, {}};
    std::vector<nlohmann::json> failures(instances.size());
    std::vector<int> positive(instances.size(), 0);

    parallel_for(instances.size(), [&](std::size_t idx) {
        const Instance& inst = *instances[idx];
        const CubicalComplex& X = inst.X;
        LinkTable links(X);
        SubcomplexRef W = inst.W();
        Certificate clc = is_clc(links, W);
        DoubledComplex D = make_double(X, W);
        nlohmann::json rep = double_flag_report(X, W, &D);
        bool flags = rep.at("all_links_flag").get<bool>();
        if (flags != clc.holds || !rep.at("cell_count_identity").get<bool>() ||
            !rep.at("involution_ok").get<bool>()) {
            failures[idx] = {{"instance", inst.id},
                             {"why", "double link verdict disagrees with CLC"},
                             {"clc", clc.holds}, {"double_flags", flags},
                             {"cell_count_identity", rep.at("cell_count_identity")},
                             {"involution_ok", rep.at("involution_ok")}};
            return;
        }
        if (clc.holds) {
            positive[idx] = 1;
            nlohmann::json ref = double_geodesic_reflection_test(X, W, kDoublePairs, kOracleM,
                                                                 mix_seed(inst.wseed, 0xC5));
            if (!ref.at("pass").get<bool>())
                failures[idx] = {{"instance", inst.id},
                                 {"why", "reflection test failed"}, {"report", ref}};
        }
    });

    std::vector<nlohmann::json> bad;
    int positives = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (!failures[i].is_null()) bad.push_back(failures[i]);
        positives += positive[i];
    }
    res.pass = bad.empty() && positives > 0;
    res.details = {{"instances", instances.size()},
                   {"reflection_tested", positives},
                   {"pairs_per_instance", kDoublePairs},
                   {"failures", summarize_failures(bad)},
                   {"failure_count", bad.size()}};
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 6: ball-cone isometry on the named fixtures.

CriterionResult criterion6(const SuiteOptions& opt) {
    CriterionResult res{6, "cone metric matches oracle distances near vertices", false, {}};
    struct Fixture { std::string name; VertexId v; };
    std::vector<Fixture> fixtures = {{"square", 0}, {"lshape", 3}, {"cube3", 0}};
    nlohmann::json rows = nlohmann::json::array();
    bool all = true;
    for (const auto& fx : fixtures) {
        CubicalComplex X = make_named(fx.name);
        // Shared sample lattice so the two pitches are compared on the same pairs.
        nlohmann::json at16 =
            ball_cone_isometry_test(X, fx.v, 200, 16, mix_seed(opt.seed, 0xC6), 16);
        nlohmann::json at32 =
            ball_cone_isometry_test(X, fx.v, 200, 32, mix_seed(opt.seed, 0xC6), 16);
        double d16 = at16.at("max_deviation").get<double>();
        double d32 = at32.at("max_deviation").get<double>();
        bool ok = d16 <= kConeDevCap && d32 <= d16 + 1e-6;
        all = all && ok;
        rows.push_back({{"fixture", fx.name}, {"vertex", fx.v}, {"max_dev_h16", d16},
                        {"max_dev_h32", d32}, {"pass", ok}});
    }
    res.pass = all;
    res.details = {{"bound_h16", kConeDevCap}, {"fixtures", rows}};
    return res;
}

// ---------------------------------------------------------------------------
// Criterion 7: oracle calibration against exact lengths.

CriterionResult criterion7(const SuiteOptions&) {
    CriterionResult res{7, "oracle reproduces exact diagonal and bent-geodesic lengths", false, {}};
    struct Case {
        std::string name;
        CubicalComplex X;
        AmbientPoint a, b;
        double exact;
    };
    std::vector<Case> cases;
    {
        CubicalComplex sq = make_named("square");
        AmbientPoint a{sq.vertex_cell[0], {}};
        AmbientPoint b{sq.vertex_cell[3], {}};
        cases.push_back({"square_diagonal", std::move(sq), a, b, std::sqrt(2.0)});
    }
    {
        CubicalComplex cu = make_named("cube3");
        AmbientPoint a{cu.vertex_cell[0], {}};
        AmbientPoint b{cu.vertex_cell[7], {}};
        cases.push_back({"cube_diagonal", std::move(cu), a, b, std::sqrt(3.0)});
    }
    {
        CubicalComplex l = make_named("lshape");
        // (1,2) and (2,1); the geodesic bends at the reflex vertex (1,1).
        AmbientPoint a{l.vertex_cell[7], {}};
        AmbientPoint b{l.vertex_cell[5], {}};
        cases.push_back({"lshape_bent", std::move(l), a, b, 2.0});
    }
    nlohmann::json rows = nlohmann::json::array();
    bool all = true;
    for (auto& c : cases) {
        GridGraph g8 = GridGraph::build(c.X, 8);
        GridGraph g16 = GridGraph::build(c.X, 16);
        double d8 = oracle_distance(g8, c.a, c.b).length;
        double d16 = oracle_distance(g16, c.a, c.b).length;
        double e8 = std::abs(d8 - c.exact) / c.exact;
        double e16 = std::abs(d16 - c.exact) / c.exact;
        bool ok = e8 <= 0.02 && e16 <= 0.01;
        all = all && ok;
        rows.push_back({{"case", c.name}, {"exact", c.exact}, {"h8", d8}, {"h16", d16},
                        {"rel_err_h8", e8}, {"rel_err_h16", e16}, {"pass", ok}});
    }
    res.pass = all;
    res.details = {{"cases", rows}};
    return res;
}

} // namespace

nlohmann::json SuiteOptions::to_json() const {
    return {{"instances", instances}, {"seed", seed}, {"verbose", verbose}};
}

SuiteOptions SuiteOptions::from_json(const nlohmann::json& j) {
    SuiteOptions o;
    o.instances = j.value("instances", o.instances);
    o.seed = j.value("seed", o.seed);
    o.verbose = j.value("verbose", o.verbose);
    return o;
}

SuiteResult run_acceptance(const SuiteOptions& options) {
    SuiteResult result;
    auto instances = make_instances(options);

    result.criteria.push_back(criterion1(instances));
    result.criteria.push_back(criterion2(instances));
    result.criteria.push_back(criterion3(instances));
    result.criteria.push_back(criterion4(instances));
    result.criteria.push_back(criterion5(instances));
    result.criteria.push_back(criterion6(options));
    result.criteria.push_back(criterion7(options));

    result.all_pass = true;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : result.criteria) {
        result.all_pass = result.all_pass && c.pass;
        arr.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"details", c.details}});
    }
    result.report = {{"options", options.to_json()}, {"criteria", arr},
                     {"all_pass", result.all_pass}};
    return result;
}

} // namespace cubecvx
