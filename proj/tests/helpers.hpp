// Shared test utilities: deterministic random chains, paths, and fields.

#pragma once

#include <random>

#include "cch/chain.hpp"
#include "cch/forms.hpp"

namespace cch::testing {

using Rng = std::mt19937_64;

inline GridDomain box_domain(int n, int extent, double h = 1.0) {
    IVec lo(n, 0), hi(n, extent);
    return GridDomain(n, h, lo, hi);
}

// Random m-chain with integer coefficients in [-3, 3] on `count` cells.
inline Chain random_chain(const GridDomain& D, int m, int count, Rng& rng) {
    Chain T(D, m);
    auto subsets = axis_subsets(D.n(), m);
    std::uniform_int_distribution<int> pick_subset(0, static_cast<int>(subsets.size()) - 1);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int i = 0; i < count; ++i) {
        const IVec& axes = subsets[pick_subset(rng)];
        IVec base(D.n());
        bool ok = true;
        for (int a = 0; a < D.n(); ++a) {
            bool spans = false;
            for (int x : axes) spans = spans || (x == a);
            int top = spans ? D.hi()[a] - 1 : D.hi()[a];
            if (top < D.lo()[a]) {
                ok = false;
                break;
            }
            std::uniform_int_distribution<int> pos(D.lo()[a], top);
            base[a] = pos(rng);
        }
        if (!ok) continue;
        int w = coeff(rng);
        if (w != 0) T.add(CellId{base, axes}, w);
    }
    return T;
}

// Random lattice path staying inside the domain.
inline LatticePath random_path(const GridDomain& D, int steps, Rng& rng) {
    LatticePath p;
    IVec v(D.n());
    for (int a = 0; a < D.n(); ++a) {
        std::uniform_int_distribution<int> pos(D.lo()[a], D.hi()[a]);
        v[a] = pos(rng);
    }
    p.vertices.push_back(v);
    std::uniform_int_distribution<int> pick_axis(0, D.n() - 1);
    std::uniform_int_distribution<int> pick_dir(0, 1);
    for (int s = 0; s < steps; ++s) {
        for (int attempt = 0; attempt < 16; ++attempt) {
            int a = pick_axis(rng);
            int d = pick_dir(rng) ? 1 : -1;
            IVec w = v;
            w[a] += d;
            if (w[a] >= D.lo()[a] && w[a] <= D.hi()[a]) {
                v = w;
                break;
            }
        }
        if (p.vertices.back() != v) p.vertices.push_back(v);
    }
    return p;
}

// Random m-form with integer coefficients on `count` cells.
inline DiscreteForm random_form(const GridDomain& D, int m, int count, Rng& rng) {
    Chain c = random_chain(D, m, count, rng);
    DiscreteForm w(D, m);
    for (const auto& [cell, v] : c.coeffs()) w.set(cell, v);
    return w;
}

}  // namespace cch::testing
