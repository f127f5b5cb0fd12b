#pragma once

#include "cubecvx/certify.hpp"
#include "cubecvx/doubling.hpp"
#include "cubecvx/generators.hpp"
#include "cubecvx/walls.hpp"

namespace cubecvx {

/// Options for the acceptance battery. Tolerances and per-case sample counts
/// are pinned constants of the battery, not options.
struct SuiteOptions {
    int instances = 200;      // generated CAT(0) instances (dim <= 3, <= 50 cubes)
    std::uint64_t seed = 20260810;
    bool verbose = false;

    nlohmann::json to_json() const;
    static SuiteOptions from_json(const nlohmann::json& j);
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    nlohmann::json details;
};

struct SuiteResult {
    bool all_pass = false;
    std::vector<CriterionResult> criteria;
    nlohmann::json report;
};

/// Runs the full acceptance battery (7 criteria) over a deterministic
/// generated instance suite plus the named controls.
SuiteResult run_acceptance(const SuiteOptions& options);

} // namespace cubecvx
