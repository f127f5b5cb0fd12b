// Command-line front end for the cubecvx shared library. Talks to the
// library exclusively through the C API in cubecvx.h; every run embeds its
// full configuration in the emitted JSON so runs are reproducible
// byte-for-byte.

#include "cubecvx.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

using nlohmann::json;

constexpr int kExitHolds = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& out_path, const json& doc) {
    std::string text = doc.dump(2);
    text.push_back('\n');
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        out << text;
    }
}

struct OwnedString {
    char* s = nullptr;
    ~OwnedString() { ccx_string_free(s); }
    json parse() const { return s ? json::parse(s) : json(); }
};

struct OwnedComplex {
    ccx_complex* c = nullptr;
    ~OwnedComplex() { ccx_complex_free(c); }
};

struct OwnedSubcomplex {
    ccx_subcomplex* w = nullptr;
    ~OwnedSubcomplex() { ccx_subcomplex_free(w); }
};

int fail(ccx_status st) {
    std::cerr << "error (" << ccx_status_name(st) << "): " << ccx_last_error() << "\n";
    return kExitError;
}

int load_complex(const std::string& path, OwnedComplex& X) {
    ccx_status st = ccx_complex_from_json(read_file(path).c_str(), &X.c);
    if (st != CCX_OK) return fail(st);
    return -1;
}

int load_subcomplex(const OwnedComplex& X, const std::string& path, OwnedSubcomplex& W,
                    bool quiet = false) {
    int closure_added = 0;
    ccx_status st = ccx_subcomplex_from_json(X.c, read_file(path).c_str(), &W.w, &closure_added);
    if (st != CCX_OK) return fail(st);
    if (closure_added > 0 && !quiet)
        std::cerr << "warning: subcomplex closure completed, " << closure_added
                  << " face(s) added\n";
    return -1;
}

json run_config(const std::string& command, const json& args) {
    return json{{"tool", "cubecvx"}, {"version", ccx_version()}, {"command", command},
                {"args", args}};
}

/// Deciders share one wrapper: exit 0 claim holds, 1 refuted, 2 error.
int emit_decision(const std::string& command, const json& args, ccx_status st, int holds,
                  OwnedString& payload, const std::string& out_path, const char* key) {
    if (st != CCX_OK && st != CCX_REFUTED) return fail(st);
    json doc;
    doc["run"] = run_config(command, args);
    doc[key] = payload.parse();
    write_output(out_path, doc);
    return holds ? kExitHolds : kExitRefuted;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cubecvx: convexity certificates for finite cubical complexes"};
    app.require_subcommand(1);

    std::string complex_path, sub_path, out_path, from_spec, to_spec;
    std::string gen_kind = "named", gen_name;
    std::vector<int> gen_dims;
    int gen_n = 4, gen_dim = 2, wall_id = 0, samples = 200, m = 8, instances = 200;
    double radius = 0.4, fraction = -1;
    std::uint64_t seed = 1;
    int vertex = 0;

    auto add_complex_opt = [&](CLI::App* cmd, bool with_sub) {
        cmd->add_option("--complex", complex_path, "complex JSON file")->required();
        if (with_sub) cmd->add_option("--sub", sub_path, "subcomplex JSON file")->required();
        cmd->add_option("--out", out_path, "write the result JSON here (default stdout)");
    };

    auto* c_validate = app.add_subcommand("validate", "validate a complex file");
    c_validate->add_option("file", complex_path, "complex JSON file")->required();
    c_validate->add_option("--out", out_path, "result path");

    auto* c_link = app.add_subcommand("link", "export the link of a vertex");
    add_complex_opt(c_link, false);
    c_link->add_option("--vertex", vertex, "base vertex id")->required();

    auto* c_npc = app.add_subcommand("certify-npc", "non-positive curvature certificate");
    add_complex_opt(c_npc, false);

    auto* c_cat0 = app.add_subcommand("certify-cat0", "CAT(0) certificate");
    add_complex_opt(c_cat0, false);

    auto* c_clc = app.add_subcommand("check-clc", "combinatorial local convexity of a subcomplex");
    add_complex_opt(c_clc, true);

    auto* c_convex = app.add_subcommand("check-convex", "convexity of a subcomplex");
    add_complex_opt(c_convex, true);

    auto* c_oracle = app.add_subcommand("verify-oracle",
                                        "numerical local-convexity cross-check of check-clc");
    add_complex_opt(c_oracle, true);
    c_oracle->add_option("--radius", radius, "ball radius (default 0.4)");
    c_oracle->add_option("--samples", samples, "sampled pairs (default 200)");
    c_oracle->add_option("--h", m, "grid pitch denominator m, pitch = 1/m (default 16)")
        ->default_val(16);
    c_oracle->add_option("--seed", seed, "sampling seed");

    auto* c_walls = app.add_subcommand("walls", "wall inventory (parallel edge classes)");
    add_complex_opt(c_walls, false);

    auto* c_half = app.add_subcommand("halfspaces", "hyperplane and halfspace certificates");
    add_complex_opt(c_half, false);
    c_half->add_option("--wall", wall_id, "wall id from the inventory")->required();

    auto* c_double = app.add_subcommand("double", "double of X along W with the flag report");
    add_complex_opt(c_double, true);

    auto* c_geo = app.add_subcommand("geodesic", "oracle geodesic between two points");
    add_complex_opt(c_geo, false);
    c_geo->add_option("--from", from_spec, "<cube>:<c0>,<c1>,...")->required();
    c_geo->add_option("--to", to_spec, "<cube>:<c0>,<c1>,...")->required();
    c_geo->add_option("--h", m, "grid pitch denominator m, pitch = 1/m (default 8)");

    auto* c_gen = app.add_subcommand("gen", "generate an instance");
    c_gen->add_option("--kind", gen_kind, "named|grid_region|staircase|cube_tree|annulus");
    c_gen->add_option("--name", gen_name, "named instance (square, lshape, cube3, ...)");
    c_gen->add_option("--dims", gen_dims, "grid_region sides");
    c_gen->add_option("--n", gen_n, "cube count / annulus size");
    c_gen->add_option("--dim", gen_dim, "cube dimension for staircase/cube_tree");
    c_gen->add_option("--seed", seed, "generator seed");
    c_gen->add_option("--fraction", fraction, "also emit a random subcomplex of this fraction");
    c_gen->add_option("--out", out_path, "complex output path (default stdout)");
    std::string sub_out;
    c_gen->add_option("--sub-out", sub_out, "subcomplex output path");

    auto* c_suite = app.add_subcommand("suite", "run the full acceptance battery");
    c_suite->add_option("--instances", instances, "generated instances (default 200)");
    c_suite->add_option("--seed", seed, "suite seed");
    c_suite->add_option("--out", out_path, "report path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_validate->parsed()) {
            OwnedComplex X;
            if (int rc = load_complex(complex_path, X); rc >= 0) return rc;
            json doc;
            doc["run"] = run_config("validate", {{"complex", complex_path}});
            doc["valid"] = true;
            doc["dim"] = ccx_complex_dim(X.c);
            json cells = json::array();
            for (int d = 0; d <= ccx_complex_dim(X.c); ++d)
                cells.push_back(ccx_complex_cell_count(X.c, d));
            doc["cells_by_dim"] = cells;
            doc["cells"] = ccx_complex_cell_count(X.c, -1);
            write_output(out_path, doc);
            return kExitHolds;
        }

        if (c_link->parsed()) {
            OwnedComplex X;
            if (int rc = load_complex(complex_path, X); rc >= 0) return rc;
            OwnedString out;
            ccx_status st = ccx_link_json(X.c, vertex, &out.s);
            if (st != CCX_OK) return fail(st);
            json doc;
            doc["run"] = run_config("link", {{"complex", complex_path}, {"vertex", vertex}});
            doc["link"] = out.parse();
            write_output(out_path, doc);
            return kExitHolds;
        }

        if (c_npc->parsed() || c_cat0->parsed()) {
            OwnedComplex X;
            if (int rc = load_complex(complex_path, X); rc >= 0) return rc;
            OwnedString cert;
            int holds = 0;
            bool npc = c_npc->parsed();
            ccx_status st = npc ? ccx_certify_npc(X.c, &holds, &cert.s)
                                : ccx_certify_cat0(X.c, &holds, &cert.s);
            return emit_decision(npc ? "certify-npc" : "certify-cat0",
                                 {{"complex", complex_path}}, st, holds, cert, out_path,
                                 "certificate");
        }

        if (c_clc->parsed() || c_convex->parsed()) {
            OwnedComplex X;
            if (int rc = load_complex(complex_path, X); rc >= 0) return rc;
            OwnedSubcomplex W;
            if (int rc = load_subcomplex(X, sub_path, W); rc >= 0) return rc;
            OwnedString cert;
            int holds = 0;
            bool clc = c_clc->parsed();
            ccx_status st = clc ? ccx_check_clc(X.c, W.w, &holds, &cert.s)
                                : ccx_check_convex(X.c, W.w, &holds, &cert.s);
            return emit_decision(clc ? "check-clc" : "check-convex",
                                 {{"complex", complex_path}, {"sub", sub_path}}, st, holds, cert,
                                 out_path, "certificate");
        }

        if (c_oracle->parsed()) {
            OwnedComplex X;
            if (int rc = load_complex(complex_path, X); rc >= 0) return rc;
            OwnedSubcomplex W;
            if (int rc = load_subcomplex(X, sub_path, W); rc >= 0) return rc;
            json opts{{"radius", radius}, {"samples", samples}, {"m", m}, {"seed", seed}};
            OwnedString rep;
            int holds = 0;
            ccx_status st = ccx_verify_oracle(X.c, W.w, opts.dump().c_str(), &holds, &rep.s);
            json args{{"complex", complex_path}, {"sub", sub_path}, {"options", opts}};
            return emit_decision("verify-oracle", args, st, holds, rep, out_path, "report");
        }

        if (c_walls->parsed()) {
            OwnedComplex X;
            if (int rc = load_complex(complex_path, X); rc >= 0) return rc;
            OwnedString out;
            ccx_status st = ccx_walls_json(X.c, &out.s);
            if (st != CCX_OK) return fail(st);
            json doc;
            doc["run"] = run_config("walls", {{"complex", complex_path}});
            doc["walls"] = out.parse()["walls"];
            write_output(out_path, doc);
            return kExitHolds;
        }

        if (c_half->parsed()) {
            OwnedComplex X;
            if (int rc = load_complex(complex_path, X); rc >= 0) return rc;
            OwnedString bundle;
            int holds = 0;
            ccx_status st = ccx_halfspaces(X.c, wall_id, "", &holds, &bundle.s);
            return emit_decision("halfspaces", {{"complex", complex_path}, {"wall", wall_id}}, st,
                                 holds, bundle, out_path, "bundle");
        }

        if (c_double->parsed()) {
            OwnedComplex X;
            if (int rc = load_complex(complex_path, X); rc >= 0) return rc;
            OwnedSubcomplex W;
            if (int rc = load_subcomplex(X, sub_path, W); rc >= 0) return rc;
            OwnedString doubled, report;
            int holds = 0;
            ccx_status st = ccx_double_json(X.c, W.w, &doubled.s, &report.s, &holds);
            if (st != CCX_OK && st != CCX_REFUTED) return fail(st);
            json doc;
            doc["run"] = run_config("double", {{"complex", complex_path}, {"sub", sub_path}});
            doc["double"] = doubled.parse();
            doc["flag_report"] = report.parse();
            write_output(out_path, doc);
            return holds ? kExitHolds : kExitRefuted;
        }

        if (c_geo->parsed()) {
            OwnedComplex X;
            if (int rc = load_complex(complex_path, X); rc >= 0) return rc;
            json opts{{"m", m}, {"straighten", true}};
            OwnedString out;
            ccx_status st = ccx_geodesic(X.c, from_spec.c_str(), to_spec.c_str(),
                                         opts.dump().c_str(), &out.s);
            if (st != CCX_OK) return fail(st);
            json doc;
            doc["run"] = run_config("geodesic", {{"complex", complex_path}, {"from", from_spec},
                                                 {"to", to_spec}, {"options", opts}});
            doc["geodesic"] = out.parse();
            write_output(out_path, doc);
            return kExitHolds;
        }

        if (c_gen->parsed()) {
            json spec{{"kind", gen_kind}};
            if (!gen_name.empty()) spec["name"] = gen_name;
            if (!gen_dims.empty()) spec["dims"] = gen_dims;
            spec["n"] = gen_n;
            spec["dim"] = gen_dim;
            spec["seed"] = seed;
            if (fraction >= 0) spec["subcomplex"] = {{"seed", seed}, {"fraction", fraction}};
            OwnedString cj, sj;
            ccx_status st = ccx_generate(spec.dump().c_str(), &cj.s, &sj.s);
            if (st != CCX_OK) return fail(st);
            write_output(out_path, cj.parse());
            if (sj.s && !sub_out.empty()) write_output(sub_out, sj.parse());
            return kExitHolds;
        }

        if (c_suite->parsed()) {
            json opts{{"instances", instances}, {"seed", seed}};
            OwnedString rep;
            int all_pass = 0;
            ccx_status st = ccx_suite_run(opts.dump().c_str(), &all_pass, &rep.s);
            if (st != CCX_OK && st != CCX_REFUTED) return fail(st);
            json doc;
            doc["run"] = run_config("suite", opts);
            doc["report"] = rep.parse();
            write_output(out_path, doc);
            for (const auto& c : doc["report"]["criteria"])
                std::cerr << (c["pass"].get<bool>() ? "[PASS] " : "[FAIL] ") << "criterion "
                          << c["id"] << ": " << c["name"].get<std::string>() << "\n";
            return all_pass ? kExitHolds : kExitRefuted;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
