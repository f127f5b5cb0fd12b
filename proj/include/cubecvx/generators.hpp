#pragma once

#include "cubecvx/complex.hpp"

namespace cubecvx {

/// Deterministic instance generator: same spec, same complex.
struct GeneratorSpec {
    enum class Kind { Named, GridRegion, Staircase, CubeTree, Annulus };
    Kind kind = Kind::Named;
    std::string name;          // Named: vertex, edge, square, lshape, cube3, cube_boundary
    std::vector<int> dims;     // GridRegion: box sides
    int n = 0;                 // Staircase/CubeTree: cube count; Annulus: squares
    int dim = 2;               // Staircase/CubeTree: cube dimension
    std::uint64_t seed = 0;    // CubeTree growth
    nlohmann::json expected;   // declared ground truth for controls

    nlohmann::json to_json() const;
    static GeneratorSpec from_json(const nlohmann::json& j);
};

/// Errors: BadSpec.
CubicalComplex generate(const GeneratorSpec& spec);

/// Convenience constructors for the named fixtures used throughout the tests.
CubicalComplex make_named(const std::string& name);

/// Face-closed connected subcomplex grown by seeded BFS over cells; the
/// fraction of cells is approximately `target_fraction`. target 0 yields a
/// single vertex, target 1 all of X.
SubcomplexRef random_subcomplex(const CubicalComplex& X, std::uint64_t seed,
                                double target_fraction);

} // namespace cubecvx
