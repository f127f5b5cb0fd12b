#pragma once

#include "cubecvx/certify.hpp"

namespace cubecvx {

/// The double of X along W: two copies of X with the copies of W identified,
/// carrying the swap involution whose fixed cells are exactly the image of W.
/// The result may fail simplicity; it lives in the relaxed cell-complex
/// representation and is only fed to the link and oracle machinery.
struct DoubledComplex {
    CubicalComplex dbl;
    const CubicalComplex* base = nullptr;

    std::vector<CubeId> fold1, fold2;   // X-cube -> double-cube, per copy
    std::vector<CubeId> involution;     // double-cube -> double-cube
    std::vector<char> fixed_cell;       // double-cube -> fixed by the involution
    std::vector<VertexId> vfold1, vfold2;
    std::vector<VertexId> vinvolution;
    std::vector<CubeId> shared_cells;   // image of W, sorted

    bool simple() const { return dbl.simple; }
    nlohmann::json simplicity_report() const;
};

/// Errors: none (face-closed nonempty W is the caller's contract; a relaxed
/// result is allowed and flagged).
DoubledComplex make_double(const CubicalComplex& X, const SubcomplexRef& W);

/// Checks every vertex link of the double for simpliciality and flagness;
/// the verdict must match is_clc(X, W).
nlohmann::json double_flag_report(const CubicalComplex& X, const SubcomplexRef& W,
                                  const DoubledComplex* prebuilt = nullptr);

/// Oracle checks on the double for CLC subcomplexes: sampled W-to-W grid
/// geodesics are involution-symmetric and stay near W, the fold embeds the
/// vertex metric isometrically, and the involution preserves it exactly.
/// Errors: PreconditionFailed (requires is_cat0(X) and is_clc(X, W)).
nlohmann::json double_geodesic_reflection_test(const CubicalComplex& X, const SubcomplexRef& W,
                                               int samples, int m, std::uint64_t seed);

} // namespace cubecvx
