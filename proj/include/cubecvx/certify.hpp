#pragma once

#include "cubecvx/complex.hpp"
#include "cubecvx/links.hpp"
#include "cubecvx/linkmetric.hpp"
#include "cubecvx/oracle.hpp"

namespace cubecvx {

/// Machine-checkable verdict: a NOT_* certificate always carries a concrete
/// witness. Serialization is deterministic, so identical inputs produce
/// byte-identical certificates.
struct Certificate {
    std::string claim;
    bool holds = false;
    nlohmann::json witness;
    nlohmann::json subreports = nlohmann::json::array();
    std::string input_sha;
    nlohmann::json config;

    nlohmann::json to_json() const;
};

/// How the CAT(0) precondition of a downstream check was established:
/// checked directly, or inherited (a cubical subdivision carries the metric
/// of its base after rescaling).
enum class Cat0Evidence { Checked, InheritedFromBase };

/// Non-positive curvature (flag links at every vertex).
Certificate is_npc(const LinkTable& links);
Certificate is_npc(const CubicalComplex& X);

/// CAT(0): non-positively curved, 1-skeleton a median graph, and every
/// maximal cube pattern of the skeleton filled by a cube of the complex.
/// Errors: NotConnected.
Certificate is_cat0(const LinkTable& links);
Certificate is_cat0(const CubicalComplex& X);

/// Combinatorial local convexity: Lk(v,W) full in Lk(v,X) at every vertex of W.
Certificate is_clc(const LinkTable& links, const SubcomplexRef& W);
Certificate is_clc(const CubicalComplex& X, const SubcomplexRef& W);

/// Convexity decision: connected and CLC, assuming the ambient complex is
/// CAT(0). Errors: PreconditionNotCAT0, EmptySubcomplex.
Certificate is_convex(const LinkTable& links, const SubcomplexRef& W,
                      Cat0Evidence evidence = Cat0Evidence::Checked);
Certificate is_convex(const CubicalComplex& X, const SubcomplexRef& W);

/// Tangent-cone escape built from a CLC witness (v, sigma): a geodesic
/// segment with endpoints in W whose interior leaves W, with a certified
/// exact lower bound on its distance from W.
struct EscapeProbe {
    VertexId vertex = -1;
    std::vector<int> witness_dirs;
    CubeId cube = kNoCube; // cube realizing the witness simplex at v
    AmbientPoint a, b;     // segment endpoints, both in W
    double t_apex = 0, t_face = 0;
    double depth = 0;        // certified max distance of the segment from W (metric units)
    double depth_lambda = 0; // parameter of the deepest sample

    nlohmann::json to_json() const;
};

EscapeProbe escape_probe(const LinkTable& links, const SubcomplexRef& W, VertexId v,
                         const std::vector<int>& minimal_witness);

/// Numerical local-convexity probe: sampled pairs in small balls around
/// W-points, oracle geodesics checked against a grid-pitch tolerance.
/// Cross-validates is_clc; never the decision procedure.
/// Errors: PreconditionNotCAT0 (when evidence = Checked and the check fails).
nlohmann::json locally_convex_report(const LinkTable& links, const SubcomplexRef& W, double radius,
                                     int samples, int m, std::uint64_t seed,
                                     Cat0Evidence evidence = Cat0Evidence::Checked);

} // namespace cubecvx
