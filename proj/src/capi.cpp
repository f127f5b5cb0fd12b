#include "cubecvx.h"

#include "cubecvx/certify.hpp"
#include "cubecvx/doubling.hpp"
#include "cubecvx/generators.hpp"
#include "cubecvx/links.hpp"
#include "cubecvx/oracle.hpp"
#include "cubecvx/subdivision.hpp"
#include "cubecvx/suite.hpp"
#include "cubecvx/walls.hpp"

#include <cstring>
#include <memory>
#include <sstream>

using namespace cubecvx;

struct ccx_complex {
    std::shared_ptr<const CubicalComplex> X;
};

struct ccx_subcomplex {
    std::shared_ptr<const CubicalComplex> parent;
    std::vector<CubeId> cube_ids;

    SubcomplexRef ref() const { return SubcomplexRef::from_cubes(*parent, cube_ids); }
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ccx_status status_of(const Error& e) {
    switch (e.code()) {
        case ErrorCode::ParseError: return CCX_ERR_PARSE;
        case ErrorCode::MissingFace:
        case ErrorCode::DegenerateCube:
        case ErrorCode::DuplicateCube:
        case ErrorCode::DimensionExceeded:
        case ErrorCode::CoordOutOfRange:
        case ErrorCode::NotASubcomplex: return CCX_ERR_VALIDATE;
        case ErrorCode::EmptySubcomplex:
        case ErrorCode::NotAVertex:
        case ErrorCode::VertexNotInSubcomplex:
        case ErrorCode::BadSpec:
        case ErrorCode::BadArgument: return CCX_ERR_ARGUMENT;
        case ErrorCode::NotConnected:
        case ErrorCode::PreconditionNotCAT0:
        case ErrorCode::PreconditionFailed:
        case ErrorCode::SelfIntersecting:
        case ErrorCode::SageevViolation:
        case ErrorCode::NotInClosedStar:
        case ErrorCode::InconsistentCarriers: return CCX_ERR_PRECONDITION;
        case ErrorCode::TooFine: return CCX_ERR_RESOURCE;
        case ErrorCode::Unreachable: return CCX_ERR_UNREACHABLE;
        case ErrorCode::Internal: return CCX_ERR_INTERNAL;
    }
    return CCX_ERR_INTERNAL;
}

template <typename F>
ccx_status guarded(F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const nlohmann::json::exception& e) {
        g_last_error = std::string("ParseError: ") + e.what();
        return CCX_ERR_PARSE;
    } catch (const std::exception& e) {
        g_last_error = std::string("Internal: ") + e.what();
        return CCX_ERR_INTERNAL;
    }
}

nlohmann::json parse_options(const char* options_json) {
    if (!options_json || !*options_json) return nlohmann::json::object();
    return nlohmann::json::parse(options_json);
}

ccx_status decide(const Certificate& cert, int* holds, char** cert_json) {
    if (holds) *holds = cert.holds ? 1 : 0;
    if (cert_json) *cert_json = dup_string(cert.to_json().dump(2));
    return cert.holds ? CCX_OK : CCX_REFUTED;
}

AmbientPoint parse_point_spec(const CubicalComplex& X, const char* spec) {
    if (!spec) raise(ErrorCode::BadArgument, "missing point spec");
    std::string s(spec);
    auto colon = s.find(':');
    AmbientPoint p;
    try {
        p.cube = std::stoi(s.substr(0, colon));
    } catch (const std::exception&) {
        raise(ErrorCode::ParseError, "point spec must be <cube>:<c0>,<c1>,...");
    }
    if (p.cube < 0 || p.cube >= static_cast<CubeId>(X.cubes.size()))
        raise(ErrorCode::BadArgument, "point cube id out of range");
    if (colon != std::string::npos) {
        std::stringstream ss(s.substr(colon + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            double v = std::stod(tok);
            long long denom = 720720;
            p.coords.push_back(Rational(std::llround(v * denom), denom));
        }
    }
    if (static_cast<int>(p.coords.size()) != X.cubes[p.cube].dim)
        raise(ErrorCode::BadArgument, "coordinate count does not match the cube dimension");
    return X.canonicalize(std::move(p));
}

} // namespace

extern "C" {

const char* ccx_version(void) { return "1.0.0"; }

const char* ccx_status_name(ccx_status status) {
    switch (status) {
        case CCX_OK: return "ok";
        case CCX_REFUTED: return "refuted";
        case CCX_ERR_PARSE: return "parse_error";
        case CCX_ERR_VALIDATE: return "validation_error";
        case CCX_ERR_PRECONDITION: return "precondition_error";
        case CCX_ERR_ARGUMENT: return "argument_error";
        case CCX_ERR_UNREACHABLE: return "unreachable";
        case CCX_ERR_RESOURCE: return "resource_limit";
        case CCX_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* ccx_last_error(void) { return g_last_error.c_str(); }

void ccx_string_free(char* s) { std::free(s); }

ccx_status ccx_complex_from_json(const char* json_text, ccx_complex** out) {
    return guarded([&] {
        if (!json_text || !out) raise(ErrorCode::BadArgument, "null argument");
        nlohmann::json j = nlohmann::json::parse(json_text);
        auto X = std::make_shared<CubicalComplex>(CubicalComplex::from_json(j));
        *out = new ccx_complex{std::move(X)};
        return CCX_OK;
    });
}

ccx_status ccx_complex_to_json(const ccx_complex* X, char** out_json) {
    return guarded([&] {
        if (!X || !out_json) raise(ErrorCode::BadArgument, "null argument");
        *out_json = dup_string(X->X->to_json().dump(2));
        return CCX_OK;
    });
}

void ccx_complex_free(ccx_complex* X) { delete X; }

int ccx_complex_dim(const ccx_complex* X) { return X ? X->X->dim : -1; }

long long ccx_complex_cell_count(const ccx_complex* X, int dim) {
    if (!X) return -1;
    if (dim < 0) return static_cast<long long>(X->X->cell_count());
    return static_cast<long long>(X->X->cell_count(dim));
}

ccx_status ccx_subcomplex_from_json(const ccx_complex* X, const char* json_text,
                                    ccx_subcomplex** out, int* closure_added) {
    return guarded([&] {
        if (!X || !json_text || !out) raise(ErrorCode::BadArgument, "null argument");
        nlohmann::json j = nlohmann::json::parse(json_text);
        int added = 0;
        SubcomplexRef W = SubcomplexRef::from_json(*X->X, j, &added);
        if (closure_added) *closure_added = added;
        *out = new ccx_subcomplex{X->X, W.cube_ids};
        return CCX_OK;
    });
}

ccx_status ccx_subcomplex_to_json(const ccx_subcomplex* W, char** out_json) {
    return guarded([&] {
        if (!W || !out_json) raise(ErrorCode::BadArgument, "null argument");
        *out_json = dup_string(W->ref().to_json().dump(2));
        return CCX_OK;
    });
}

void ccx_subcomplex_free(ccx_subcomplex* W) { delete W; }

ccx_status ccx_subdivide(const ccx_complex* X, ccx_complex** out) {
    return guarded([&] {
        if (!X || !out) raise(ErrorCode::BadArgument, "null argument");
        Subdivision S = cubical_subdivision(*X->X);
        *out = new ccx_complex{std::make_shared<CubicalComplex>(std::move(S.prime))};
        return CCX_OK;
    });
}

ccx_status ccx_link_json(const ccx_complex* X, int vertex, char** out_json) {
    return guarded([&] {
        if (!X || !out_json) raise(ErrorCode::BadArgument, "null argument");
        SphericalComplex L = link(*X->X, vertex);
        *out_json = dup_string(L.to_json().dump(2));
        return CCX_OK;
    });
}

ccx_status ccx_certify_npc(const ccx_complex* X, int* holds, char** cert_json) {
    return guarded([&] {
        if (!X) raise(ErrorCode::BadArgument, "null argument");
        return decide(is_npc(*X->X), holds, cert_json);
    });
}

ccx_status ccx_certify_cat0(const ccx_complex* X, int* holds, char** cert_json) {
    return guarded([&] {
        if (!X) raise(ErrorCode::BadArgument, "null argument");
        return decide(is_cat0(*X->X), holds, cert_json);
    });
}

ccx_status ccx_check_clc(const ccx_complex* X, const ccx_subcomplex* W, int* holds,
                         char** cert_json) {
    return guarded([&] {
        if (!X || !W) raise(ErrorCode::BadArgument, "null argument");
        SubcomplexRef ref = W->ref();
        return decide(is_clc(*X->X, ref), holds, cert_json);
    });
}

ccx_status ccx_check_convex(const ccx_complex* X, const ccx_subcomplex* W, int* holds,
                            char** cert_json) {
    return guarded([&] {
        if (!X || !W) raise(ErrorCode::BadArgument, "null argument");
        SubcomplexRef ref = W->ref();
        return decide(is_convex(*X->X, ref), holds, cert_json);
    });
}

ccx_status ccx_verify_oracle(const ccx_complex* X, const ccx_subcomplex* W,
                             const char* options_json, int* holds, char** report_json) {
    return guarded([&] {
        if (!X || !W) raise(ErrorCode::BadArgument, "null argument");
        nlohmann::json opt = parse_options(options_json);
        LinkTable links(*X->X);
        SubcomplexRef ref = W->ref();
        nlohmann::json rep = locally_convex_report(
            links, ref, opt.value("radius", 0.4), opt.value("samples", 200),
            opt.value("m", 16), opt.value("seed", 1ull), Cat0Evidence::Checked);
        bool pass = rep.at("pass").get<bool>();
        if (holds) *holds = pass ? 1 : 0;
        if (report_json) *report_json = dup_string(rep.dump(2));
        return pass ? CCX_OK : CCX_REFUTED;
    });
}

ccx_status ccx_walls_json(const ccx_complex* X, char** out_json) {
    return guarded([&] {
        if (!X || !out_json) raise(ErrorCode::BadArgument, "null argument");
        *out_json = dup_string(walls_inventory(*X->X).dump(2));
        return CCX_OK;
    });
}

ccx_status ccx_halfspaces(const ccx_complex* X, int wall_id, const char* options_json,
                          int* holds, char** bundle_json) {
    return guarded([&] {
        if (!X) raise(ErrorCode::BadArgument, "null argument");
        nlohmann::json opt = parse_options(options_json);
        Certificate cat0 = is_cat0(*X->X);
        if (!cat0.holds)
            raise(ErrorCode::PreconditionNotCAT0, "halfspaces require a CAT(0) complex");
        std::vector<Wall> walls = wall_classes(*X->X);
        if (wall_id < 0 || wall_id >= static_cast<int>(walls.size()))
            raise(ErrorCode::BadArgument, "wall id out of range");
        Subdivision S = cubical_subdivision(*X->X);
        LinkTable prime_links(S.prime);
        HalfspaceBundle hb =
            halfspaces(S, prime_links, walls[wall_id], Cat0Evidence::InheritedFromBase);
        (void)opt;
        bool pass = hb.all_convex() && hb.cover_ok && hb.join_check.at("pass").get<bool>();
        if (holds) *holds = pass ? 1 : 0;
        if (bundle_json) *bundle_json = dup_string(hb.to_json().dump(2));
        return pass ? CCX_OK : CCX_REFUTED;
    });
}

ccx_status ccx_double_json(const ccx_complex* X, const ccx_subcomplex* W, char** doubled_json,
                           char** flag_report_json, int* flag_holds) {
    return guarded([&] {
        if (!X || !W) raise(ErrorCode::BadArgument, "null argument");
        SubcomplexRef ref = W->ref();
        DoubledComplex D = make_double(*X->X, ref);
        nlohmann::json rep = double_flag_report(*X->X, ref, &D);
        if (doubled_json) {
            nlohmann::json dj = D.dbl.to_json();
            dj["simple"] = D.simple();
            dj["shared_cells"] = D.shared_cells;
            *doubled_json = dup_string(dj.dump(2));
        }
        bool pass = rep.at("all_links_flag").get<bool>();
        if (flag_report_json) *flag_report_json = dup_string(rep.dump(2));
        if (flag_holds) *flag_holds = pass ? 1 : 0;
        return pass ? CCX_OK : CCX_REFUTED;
    });
}

ccx_status ccx_geodesic(const ccx_complex* X, const char* from_spec, const char* to_spec,
                        const char* options_json, char** result_json) {
    return guarded([&] {
        if (!X || !result_json) raise(ErrorCode::BadArgument, "null argument");
        nlohmann::json opt = parse_options(options_json);
        int m = opt.value("m", 8);
        AmbientPoint a = parse_point_spec(*X->X, from_spec);
        AmbientPoint b = parse_point_spec(*X->X, to_spec);
        GridGraph G = GridGraph::build(*X->X, m);
        DistanceResult res = oracle_distance(G, a, b);
        nlohmann::json j;
        j["length"] = res.length;
        j["snap_from"] = res.snap_a;
        j["snap_to"] = res.snap_b;
        j["m"] = m;
        j["pitch"] = G.pitch();
        if (G.dim_warning()) j["warning"] = "oracle dilation constant not established for dim >= 4";
        if (opt.value("straighten", true)) {
            PolyPath refined = straighten(*X->X, res.path);
            j["refined_length"] = refined.length(*X->X);
            j["path"] = refined.to_json(*X->X)["points"];
        } else {
            j["path"] = res.path.to_json(*X->X)["points"];
        }
        *result_json = dup_string(j.dump(2));
        return CCX_OK;
    });
}

ccx_status ccx_generate(const char* spec_json, char** complex_json, char** subcomplex_json) {
    return guarded([&] {
        if (!spec_json || !complex_json) raise(ErrorCode::BadArgument, "null argument");
        nlohmann::json j = nlohmann::json::parse(spec_json);
        GeneratorSpec spec = GeneratorSpec::from_json(j);
        CubicalComplex X = generate(spec);
        *complex_json = dup_string(X.to_json().dump(2));
        if (subcomplex_json) {
            *subcomplex_json = nullptr;
            if (j.contains("subcomplex")) {
                const auto& sj = j.at("subcomplex");
                SubcomplexRef W = random_subcomplex(X, sj.value("seed", 1ull),
                                                    sj.value("fraction", 0.5));
                *subcomplex_json = dup_string(W.to_json().dump(2));
            }
        }
        return CCX_OK;
    });
}

ccx_status ccx_suite_run(const char* options_json, int* all_pass, char** report_json) {
    return guarded([&] {
        SuiteOptions opt = SuiteOptions::from_json(parse_options(options_json));
        SuiteResult res = run_acceptance(opt);
        if (all_pass) *all_pass = res.all_pass ? 1 : 0;
        if (report_json) *report_json = dup_string(res.report.dump(2));
        return res.all_pass ? CCX_OK : CCX_REFUTED;
    });
}

} // extern "C"
