#pragma once

#include "cubecvx/complex.hpp"

namespace cubecvx {

/// First cubical subdivision X' of X. Every k-cube splits into 2^k subcubes
/// of side 1/2; X' is stored as a unit-cube complex with metric_scale halved.
/// X'-vertices are the cell centers of X, so X'-vertex id == X-cell id.
struct Subdivision {
    CubicalComplex prime;
    const CubicalComplex* base = nullptr;

    /// Where each X'-cube came from: parent X-cube (= carrier of the open
    /// cell), the parent axes left free, and per-axis offsets in {0, 1/2}.
    struct CellOrigin {
        CubeId parent = kNoCube;
        std::vector<int> axes;
        std::vector<Rational> offset;
    };
    std::vector<CellOrigin> origin; // per X'-cube

    /// Carrier map: X-cube whose open cell contains the X'-cube's interior.
    CubeId carrier(CubeId prime_cube) const { return origin[prime_cube].parent; }

    AmbientPoint to_prime(const AmbientPoint& p) const;
    AmbientPoint to_base(const AmbientPoint& p) const;

    /// X'-cells contained in the midcube of `cube` orthogonal to `axis`.
    std::vector<CubeId> midcube_cells(CubeId cube, int axis) const;

private:
    std::unordered_map<std::uint64_t, CubeId> index_; // (parent, Tmask, obits) -> X'-cube
    friend Subdivision cubical_subdivision(const CubicalComplex& X);
    CubeId lookup(CubeId parent, unsigned tmask, unsigned obits) const;
};

Subdivision cubical_subdivision(const CubicalComplex& X);

} // namespace cubecvx
