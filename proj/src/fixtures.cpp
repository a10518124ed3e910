#include "cch/fixtures.hpp"

#include <cmath>

namespace cch {

Chain cube_block(const GridDomain& domain, int m, int side, const IVec& corner) {
    if (m + 1 > domain.n()) throw std::invalid_argument("cube_block: m+1 exceeds n");
    if (side < 1) throw std::invalid_argument("cube_block: side must be >= 1");
    IVec axes(m + 1);
    for (int i = 0; i <= m; ++i) axes[i] = i;
    Chain out(domain, m + 1);
    IVec offset(m + 1, 0);
    while (true) {
        IVec base = corner;
        for (int i = 0; i <= m; ++i) base[i] += offset[i];
        out.add(CellId{base, axes}, 1.0);
        int i = m;
        for (; i >= 0; --i) {
            if (offset[i] < side - 1) {
                ++offset[i];
                break;
            }
            offset[i] = 0;
        }
        if (i < 0) break;
    }
    return out;
}

Chain cube_boundary_cycle(const GridDomain& domain, int m, int side, const IVec& corner) {
    return boundary(cube_block(domain, m, side, corner));
}

Chain ball_block(const GridDomain& domain, int m, int radius_cells, const IVec& center) {
    if (m + 1 > domain.n()) throw std::invalid_argument("ball_block: m+1 exceeds n");
    if (radius_cells < 1) throw std::invalid_argument("ball_block: radius must be >= 1");
    IVec axes(m + 1);
    for (int i = 0; i <= m; ++i) axes[i] = i;
    Chain out(domain, m + 1);
    const double r2 = static_cast<double>(radius_cells) * radius_cells;
    IVec off(m + 1, -radius_cells);
    while (true) {
        double d2 = 0;
        for (int i = 0; i <= m; ++i) {
            double c = off[i] + 0.5;
            d2 += c * c;
        }
        if (d2 <= r2) {
            IVec base = center;
            for (int i = 0; i <= m; ++i) base[i] += off[i];
            out.add(CellId{base, axes}, 1.0);
        }
        int i = m;
        for (; i >= 0; --i) {
            if (off[i] < radius_cells - 1) {
                ++off[i];
                break;
            }
            off[i] = -radius_cells;
        }
        if (i < 0) break;
    }
    if (out.empty()) throw std::invalid_argument("ball_block: empty ball");
    return out;
}

Chain sphere_like_cycle(const GridDomain& domain, int m, int radius_cells,
                        const IVec& center) {
    return boundary(ball_block(domain, m, radius_cells, center));
}

long zerocap_N(int j, double alpha, int m) {
    // largest integer <= r_j^{alpha-m} = 2^{j(m-alpha)}
    return static_cast<long>(std::floor(std::pow(2.0, j * (m - alpha)) + 1e-12));
}

int zerocap_M(int j, double alpha) {
    // largest integer <= j^-2 r_j^{-alpha} = 2^{j alpha} / j^2
    return static_cast<int>(std::floor(std::pow(2.0, j * alpha) /
                                           (static_cast<double>(j) * j) +
                                       1e-12));
}

GridDomain zerocap_domain(int J, double alpha, int m, int n) {
    if (n < 2 || m < 1 || m > n - 1)
        throw std::invalid_argument("zerocap_domain: need n >= 2, 1 <= m <= n-1");
    const long scale = 1L << J;  // lattice points per unit length
    int maxM = 1;
    for (int j = 1; j <= J; ++j) maxM = std::max(maxM, zerocap_M(j, alpha));
    IVec lo(n), hi(n);
    lo[0] = 0;
    hi[0] = static_cast<int>((2 * J + 2) * scale);
    lo[1] = 0;
    hi[1] = static_cast<int>((2 * maxM + 2) * scale);
    for (int i = 2; i < n; ++i) {
        lo[i] = -static_cast<int>(scale);
        hi[i] = static_cast<int>(scale);
    }
    return GridDomain(n, std::pow(2.0, -J), lo, hi);
}

namespace {

ZerocapLevels build_levels(int J, double alpha, int m, int n, const GridDomain& domain) {
    ZerocapLevels out;
    out.T = Chain(domain, m);
    const long scale = 1L << J;
    for (int j = 1; j <= J; ++j) {
        const long Nj = zerocap_N(j, alpha, m);
        const int Mj = zerocap_M(j, alpha);
        out.N.push_back(Nj);
        out.M.push_back(Mj);
        out.r.push_back(std::pow(2.0, -j));
        const int radius_cells = static_cast<int>(scale >> j);  // r_j / h
        if (Mj == 0 || radius_cells < 1) continue;
        // Centers on the doubled lattice (2j, 2k): keeps the balls
        // B(x_j^k, 2 r_j) pairwise disjoint as cell sets, which the
        // continuum construction only achieves up to touching.
        for (int k = 1; k <= Mj; ++k) {
            IVec center(n, 0);
            center[0] = static_cast<int>(2 * j * scale);
            center[1] = static_cast<int>(2 * k * scale);
            Chain sphere = sphere_like_cycle(domain, m, radius_cells, center);
            out.T += static_cast<double>(Nj) * sphere;
        }
    }
    return out;
}

}  // namespace

ZerocapLevels zerocap_current(int J, double alpha, int m, int n) {
    if (J < 0) throw std::invalid_argument("zerocap_current: J must be >= 0");
    if (!(alpha > 0 && alpha <= m))
        throw std::invalid_argument("zerocap_current: need 0 < alpha <= m");
    GridDomain domain = zerocap_domain(std::max(J, 1), alpha, m, n);
    if (J == 0) {
        ZerocapLevels out;
        out.T = Chain(domain, m);
        return out;
    }
    return build_levels(J, alpha, m, n, domain);
}

Chain segment_chain(const GridDomain& domain, const IVec& start, int axis, int len) {
    LatticePath p;
    IVec v = start;
    p.vertices.push_back(v);
    for (int i = 0; i < len; ++i) {
        ++v[axis];
        p.vertices.push_back(v);
    }
    return chain_from_lattice_path(domain, p);
}

}  // namespace cch
