#include "cubecvx/subdivision.hpp"

#include <algorithm>

namespace cubecvx {

namespace {

std::uint64_t key_of(CubeId parent, unsigned tmask, unsigned obits) {
    return (static_cast<std::uint64_t>(parent) << 32) | (static_cast<std::uint64_t>(tmask) << 16) |
           obits;
}

} // namespace

CubeId Subdivision::lookup(CubeId parent, unsigned tmask, unsigned obits) const {
    auto it = index_.find(key_of(parent, tmask, obits));
    return it == index_.end() ? kNoCube : it->second;
}

Subdivision cubical_subdivision(const CubicalComplex& X) {
    Subdivision S;
    S.base = &X;
    const Rational half(1, 2);

    // X'-vertex per X-cell: its center.
    const int nverts = static_cast<int>(X.cubes.size());

    std::vector<Cube> cells;
    // Center of the point o + eps/2 on the free axes, as an X-cell id.
    auto corner_vertex = [&](CubeId f, const std::vector<int>& axes,
                             const std::vector<Rational>& offset, unsigned eps) {
        AmbientPoint p;
        p.cube = f;
        p.coords.assign(X.cubes[f].dim, half);
        for (std::size_t u = 0; u < axes.size(); ++u)
            p.coords[axes[u]] = offset[u] + ((eps >> u) & 1 ? half : Rational(0));
        p = X.canonicalize(p);
        // Canonical half-coordinate points are cell centers.
        for (const Rational& c : p.coords)
            if (c != half) raise(ErrorCode::Internal, "subdivision corner did not canonicalize to a center");
        return static_cast<VertexId>(p.cube);
    };

    for (CubeId f = 0; f < static_cast<CubeId>(X.cubes.size()); ++f) {
        const int k = X.cubes[f].dim;
        for (unsigned tmask = 0; tmask < (1u << k); ++tmask) {
            std::vector<int> axes;
            for (int j = 0; j < k; ++j)
                if (tmask & (1u << j)) axes.push_back(j);
            const int d = static_cast<int>(axes.size());
            for (unsigned obits = 0; obits < (1u << d); ++obits) {
                std::vector<Rational> offset(d);
                for (int u = 0; u < d; ++u) offset[u] = (obits >> u) & 1 ? half : Rational(0);
                Cube c;
                c.dim = d;
                c.corners.resize(1u << d);
                for (unsigned eps = 0; eps < (1u << d); ++eps)
                    c.corners[eps] = corner_vertex(f, axes, offset, eps);
                CubeId id = static_cast<CubeId>(cells.size());
                cells.push_back(std::move(c));
                S.origin.push_back({f, axes, offset});
                S.index_.emplace(key_of(f, tmask, obits), id);
            }
        }
    }

    S.prime = CubicalComplex::validate(nverts, std::move(cells), std::max(4, X.dim));
    S.prime.metric_scale = X.metric_scale / 2.0;
    return S;
}

AmbientPoint Subdivision::to_prime(const AmbientPoint& p_in) const {
    const CubicalComplex& X = *base;
    AmbientPoint p = X.canonicalize(p_in);
    const int k = X.cubes[p.cube].dim;
    const Rational half(1, 2);
    unsigned tmask = (1u << k) - 1;
    unsigned obits = 0;
    std::vector<Rational> y(k);
    for (int j = 0; j < k; ++j) {
        Rational o(0);
        if (p.coords[j] > half) { o = half; obits |= (1u << j); }
        y[j] = (p.coords[j] - o) * 2;
    }
    CubeId c = lookup(p.cube, tmask, obits);
    if (c == kNoCube) raise(ErrorCode::Internal, "subdivision index miss");
    return prime.canonicalize({c, std::move(y)});
}

AmbientPoint Subdivision::to_base(const AmbientPoint& p_in) const {
    AmbientPoint p = prime.canonicalize(p_in);
    const CellOrigin& org = origin[p.cube];
    const Rational half(1, 2);
    std::vector<Rational> x(base->cubes[org.parent].dim, half);
    for (std::size_t u = 0; u < org.axes.size(); ++u)
        x[org.axes[u]] = org.offset[u] + p.coords[u] / 2;
    return base->canonicalize({org.parent, std::move(x)});
}

std::vector<CubeId> Subdivision::midcube_cells(CubeId cube, int axis) const {
    const CubicalComplex& X = *base;
    std::vector<CubeId> out;
    std::vector<char> seen(prime.cubes.size(), 0);
    // Walk the face lattice of `cube`, collecting X'-cells pinned at 1/2 on
    // the coordinate realizing `axis` in each face.
    struct Item { CubeId cell; int axis; };
    std::vector<Item> stack{{cube, axis}};
    std::vector<std::pair<CubeId, int>> visited;
    auto was_visited = [&](CubeId c, int a) {
        return std::find(visited.begin(), visited.end(), std::make_pair(c, a)) != visited.end();
    };
    while (!stack.empty()) {
        auto [f, j] = stack.back();
        stack.pop_back();
        if (was_visited(f, j)) continue;
        visited.emplace_back(f, j);
        const int k = X.cubes[f].dim;
        // Cells of the subdivision of f with coordinate j fixed at 1/2.
        for (unsigned tmask = 0; tmask < (1u << k); ++tmask) {
            if (tmask & (1u << j)) continue;
            std::vector<int> axes;
            for (int a = 0; a < k; ++a)
                if (tmask & (1u << a)) axes.push_back(a);
            for (unsigned obits = 0; obits < (1u << axes.size()); ++obits) {
                CubeId c = lookup(f, tmask, obits);
                if (c != kNoCube && !seen[c]) { seen[c] = 1; out.push_back(c); }
            }
        }
        // Recurse into faces not pinning axis j.
        for (int a = 0; a < k; ++a) {
            if (a == j) continue;
            for (int side = 0; side < 2; ++side) {
                const FaceEmbed& emb = X.faces[f][2 * a + side];
                // Find the face axis realizing parent axis j.
                for (std::size_t u = 0; u < emb.par_axis.size(); ++u)
                    if (emb.par_axis[u] == j) stack.push_back({emb.cell, static_cast<int>(u)});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace cubecvx
