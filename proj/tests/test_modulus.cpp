#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cch/fixtures.hpp"
#include "cch/modulus.hpp"
#include "helpers.hpp"

using namespace cch;
using cch::testing::box_domain;
using cch::testing::random_chain;

namespace {

// Independent curve-modulus solver: plain projected dual subgradient on
// densities over n-cells, with the edge pairing rebuilt from scratch by
// walking the paths.  Converges slowly but needs nothing from the library
// beyond cell bookkeeping.
double graph_modulus_oracle(const GridDomain& D, const std::vector<LatticePath>& paths,
                            double p, double mu_w, int iters) {
    std::map<IVec, int> index;
    std::vector<IVec> cells;
    std::vector<std::map<int, double>> sigma;
    const double h = D.spacing();
    for (const auto& path : paths) {
        std::map<int, double> s;
        for (size_t i = 0; i + 1 < path.vertices.size(); ++i) {
            IVec a = path.vertices[i], b = path.vertices[i + 1];
            int axis = -1;
            for (size_t k = 0; k < a.size(); ++k)
                if (a[k] != b[k]) axis = static_cast<int>(k);
            IVec lo = a;
            if (b[axis] < a[axis]) lo = b;
            // incident n-cells of the edge: offsets -1/0 on the other axes
            std::vector<IVec> inc;
            const int n = D.n();
            for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
                IVec q = lo;
                int bit = 0;
                bool ok = true;
                for (int ax = 0; ax < n; ++ax) {
                    if (ax == axis) continue;
                    if (mask & (1 << bit)) q[ax] -= 1;
                    ++bit;
                }
                for (int ax = 0; ax < n; ++ax)
                    if (q[ax] < D.lo()[ax] || q[ax] + 1 > D.hi()[ax]) ok = false;
                if (ok) inc.push_back(q);
            }
            for (const auto& q : inc) {
                if (!index.count(q)) {
                    index[q] = static_cast<int>(cells.size());
                    cells.push_back(q);
                }
                s[index.at(q)] += h / static_cast<double>(inc.size());
            }
        }
        sigma.push_back(std::move(s));
    }
    std::vector<double> lambda(paths.size(), 0.1);
    std::vector<double> f(cells.size(), 0.0);
    auto rebuild_f = [&] {
        std::fill(f.begin(), f.end(), 0.0);
        for (size_t t = 0; t < sigma.size(); ++t)
            for (const auto& [q, v] : sigma[t]) f[q] += lambda[t] * v;
        for (auto& v : f) v = std::pow(v / (p * mu_w), 1.0 / (p - 1.0));
    };
    for (int it = 1; it <= iters; ++it) {
        rebuild_f();
        double step = 0.5 / std::sqrt(static_cast<double>(it));
        for (size_t t = 0; t < sigma.size(); ++t) {
            double pair_t = 0;
            for (const auto& [q, v] : sigma[t]) pair_t += v * f[q];
            lambda[t] = std::max(0.0, lambda[t] + step * (1.0 - pair_t));
        }
    }
    rebuild_f();
    double worst = 1e300;
    for (size_t t = 0; t < sigma.size(); ++t) {
        double pair_t = 0;
        for (const auto& [q, v] : sigma[t]) pair_t += v * f[q];
        worst = std::min(worst, pair_t);
    }
    double energy = 0;
    for (double v : f) energy += std::pow(v / worst, p) * mu_w;
    return energy;
}

}  // namespace

TEST_CASE("line integral basics") {
    GridDomain D = box_domain(2, 6);
    Chain path = segment_chain(D, IVec{1, 3}, 0, 4);

    Density one(D);
    for (const auto& q : D.cells(2)) one.set(q.base, 1.0);
    CHECK(line_integral(one, path) == doctest::Approx(path.mass()));

    Density zero(D);
    CHECK(line_integral(zero, path) == 0.0);

    // density 1 strictly above the path: each edge sees mean 1/2
    Density above(D);
    for (const auto& q : D.cells(2))
        if (q.base[1] >= 3) above.set(q.base, 1.0);
    CHECK(line_integral(above, path) == doctest::Approx(0.5 * path.mass()));
}

TEST_CASE("pairing weights reproduce the line integral") {
    cch::testing::Rng rng(51);
    GridDomain D = box_domain(3, 4);
    for (int rep = 0; rep < 10; ++rep) {
        Chain T = random_chain(D, 1, 6, rng);
        Density f(D);
        for (const auto& q : D.cells(3))
            f.set(q.base, 0.25 + 0.5 * ((q.base[0] + q.base[2]) % 3));
        Density sigma = pairing_weights(T);
        double via_sigma = 0;
        for (const auto& [q, s] : sigma.values()) via_sigma += s * f.at(q);
        CHECK(via_sigma == doctest::Approx(line_integral(f, T)).epsilon(1e-12));
    }
}

TEST_CASE("single-constraint modulus: solver matches the closed form") {
    cch::testing::Rng rng(53);
    GridDomain D = box_domain(2, 8);
    MeasureWeights mu(D);  // h^n = 1
    for (double p : {1.5, 2.0, 3.0}) {
        for (int rep = 0; rep < 17; ++rep) {
            Chain T = random_chain(D, 1, 5, rng);
            if (T.empty()) continue;
            auto [cf_value, cf_density] = modulus_single_closed_form(T, p, mu);
            ModulusSolution sol = modulus({T}, p, mu, 1e-10);
            REQUIRE(sol.feasible);
            CHECK(std::abs(sol.value - cf_value) <= 1e-6 * cf_value);
            CHECK(sol.kkt_residual <= 1e-8);
            CHECK(line_integral(sol.density, T) >= 1.0 - 1e-8);
            // closed-form density achieves the constraint with equality
            CHECK(line_integral(cf_density, T) == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("hand-checked closed form: interior vertex, p = 2") {
    GridDomain D = box_domain(1, 10, 1.0);
    // 0-chain on an interior vertex: sigma = 1/2 on each of 2 incident cells
    Chain pt(D, 0);
    pt.add(CellId{{5}, {}}, 1.0);
    MeasureWeights mu(D);
    auto [value, density] = modulus_single_closed_form(pt, 2.0, mu);
    // K = 2 * (1/2)^2 = 1/2, value = K^{-1} = 2
    CHECK(value == doctest::Approx(2.0));
    ModulusSolution sol = modulus({pt}, 2.0, mu, 1e-10);
    CHECK(std::abs(sol.value - value) <= 1e-10 * value);
}

TEST_CASE("scaling: doubling the chain scales modulus by 2^-p") {
    cch::testing::Rng rng(59);
    GridDomain D = box_domain(2, 6);
    MeasureWeights mu(D);
    for (double p : {1.5, 2.0, 2.5}) {
        Chain T = random_chain(D, 1, 6, rng);
        if (T.empty()) continue;
        double v1 = modulus_single_closed_form(T, p, mu).first;
        double v2 = modulus_single_closed_form(2.0 * T, p, mu).first;
        CHECK(v2 == doctest::Approx(std::pow(2.0, -p) * v1).epsilon(1e-12));
    }
}

TEST_CASE("family with a zero-mass member has infinite modulus") {
    GridDomain D = box_domain(2, 4);
    MeasureWeights mu(D);
    Chain good = segment_chain(D, IVec{0, 1}, 0, 3);
    ModulusSolution sol = modulus({good, Chain(D, 1)}, 2.0, mu);
    CHECK_FALSE(sol.feasible);
    CHECK(std::isinf(sol.value));
}

TEST_CASE("p < 1 is rejected") {
    GridDomain D = box_domain(2, 4);
    MeasureWeights mu(D);
    CHECK_THROWS_AS(modulus({segment_chain(D, IVec{0, 0}, 0, 2)}, 0.5, mu),
                    std::invalid_argument);
}

TEST_CASE("disjoint parallel paths: modulus is additive") {
    GridDomain D = box_domain(2, 24);
    MeasureWeights mu(D);
    for (double p : {1.7, 2.0}) {
        std::vector<Chain> fam;
        double single = 0;
        for (int k = 0; k < 3; ++k) {
            Chain path = segment_chain(D, IVec{2, 4 + 8 * k}, 0, 6);
            if (k == 0) single = modulus({path}, p, mu).value;
            fam.push_back(path);
        }
        ModulusSolution sol = modulus(fam, p, mu, 1e-10);
        CHECK(std::abs(sol.value - 3.0 * single) <= 1e-6 * sol.value);
        CHECK(sol.kkt_residual <= 1e-8);
        for (double d : sol.duals) CHECK(d >= 0.0);
    }
}

TEST_CASE("p = 1 modulus via LP") {
    GridDomain D = box_domain(2, 6);
    MeasureWeights mu(D);
    Chain path = segment_chain(D, IVec{1, 3}, 0, 3);
    ModulusSolution sol = modulus({path}, 1.0, mu, 1e-9);
    REQUIRE(sol.feasible);
    // the optimum concentrates on a cell where sigma/mu is largest
    Density sigma = pairing_weights(path);
    double best = 1e300;
    for (const auto& [q, s] : sigma.values()) best = std::min(best, mu.at(q) / s);
    CHECK(sol.value <= best + 1e-9);
    CHECK(sol.value > 0.0);
    CHECK(line_integral(sol.density, path) >= 1.0 - 1e-9);
}

TEST_CASE("monotonicity and subadditivity") {
    cch::testing::Rng rng(61);
    GridDomain D = box_domain(2, 7);
    MeasureWeights mu(D);
    int done = 0;
    for (int rep = 0; rep < 60 && done < 25; ++rep) {
        Chain A = random_chain(D, 1, 4, rng);
        Chain B = random_chain(D, 1, 4, rng);
        Chain C = random_chain(D, 1, 4, rng);
        if (A.empty() || B.empty() || C.empty()) continue;
        ++done;
        double p = (rep % 2) ? 2.0 : 1.8;
        double vAB = modulus({A, B}, p, mu).value;
        double vABC = modulus({A, B, C}, p, mu).value;
        CHECK(vAB <= vABC + 1e-8);  // monotone under inclusion
        double vA = modulus({A}, p, mu).value;
        double vBC = modulus({B, C}, p, mu).value;
        CHECK(vABC <= vA + vBC + 1e-8);  // subadditive
    }
    CHECK(done >= 20);
}

TEST_CASE("chain modulus of injective paths equals the graph modulus") {
    GridDomain D = box_domain(2, 10);
    MeasureWeights mu(D);
    std::vector<LatticePath> paths;
    for (int k = 0; k < 3; ++k) {
        LatticePath p;
        for (int i = 0; i <= 5; ++i) p.vertices.push_back(IVec{2 + i, 3 + 2 * k});
        paths.push_back(p);
    }
    std::vector<Chain> fam;
    for (const auto& p : paths) fam.push_back(chain_from_lattice_path(D, p));
    for (double p : {2.0, 1.6}) {
        double lib = modulus(fam, p, mu, 1e-10).value;
        double oracle = graph_modulus_oracle(D, paths, p, mu.uniform_value(), 40000);
        CHECK(std::abs(lib - oracle) <= 2e-4 * (1.0 + lib));
    }
}

TEST_CASE("capacity lower bounds") {
    GridDomain D = box_domain(2, 8);
    MeasureWeights mu(D);
    Chain target(D, 0);
    target.add(CellId{{2, 2}, {}}, -1.0);
    target.add(CellId{{3, 2}, {}}, 1.0);

    Chain edge = segment_chain(D, IVec{2, 2}, 0, 1);
    ModulusSolution one = capacity_lower({target}, {edge}, 2.0, mu);
    auto cf = modulus_single_closed_form(edge, 2.0, mu);
    CHECK(one.value == doctest::Approx(cf.first).epsilon(1e-8));

    // second filling: the three-sided detour
    LatticePath around;
    around.vertices = {{2, 2}, {2, 3}, {3, 3}, {3, 2}};
    Chain detour = chain_from_lattice_path(D, around);
    ModulusSolution two = capacity_lower({target}, {edge, detour}, 2.0, mu);
    CHECK(two.value >= one.value - 1e-9);

    ModulusSolution empty = capacity_lower({target}, {}, 2.0, mu);
    CHECK(empty.value == 0.0);

    Chain bad = segment_chain(D, IVec{5, 5}, 0, 1);
    CHECK_THROWS_WITH_AS(capacity_lower({target}, {bad}, 2.0, mu),
                         doctest::Contains("filling 0"), std::invalid_argument);
}

TEST_CASE("capacity upper certificate") {
    GridDomain D = box_domain(2, 8);
    MeasureWeights mu(D);
    Chain f1 = segment_chain(D, IVec{1, 1}, 0, 2);
    Chain f2 = segment_chain(D, IVec{1, 4}, 0, 3);

    Density one(D);
    for (const auto& q : D.cells(2)) one.set(q.base, 1.0);
    auto [energy, min_pair] = capacity_upper_certificate(one, {f1, f2}, 2.0, mu);
    CHECK(min_pair == doctest::Approx(std::min(f1.mass(), f2.mass())));
    CHECK(energy == doctest::Approx(64.0));  // 8x8 cells, mu = 1

    Density zero(D);
    auto [e0, p0] = capacity_upper_certificate(zero, {f1}, 2.0, mu);
    CHECK(e0 == 0.0);
    CHECK(p0 == 0.0);
}

TEST_CASE("annuli density: admissibility, disjointness, energy decay") {
    GridDomain D = box_domain(2, 144);
    MeasureWeights mu(D);
    std::vector<IVec> A = {IVec{72, 72}};

    for (double p : {1.5, 2.0, 3.0}) {
        AnnuliDensity base = annuli_density(D, A, 1, p, mu);
        double e1 = lp_energy(base.rho, p, mu);
        for (int ell = 1; ell <= 4; ++ell) {
            AnnuliDensity ad = annuli_density(D, A, ell, p, mu);
            for (size_t i = 0; i < ad.levels.size(); ++i)
                for (size_t j = i + 1; j < ad.levels.size(); ++j)
                    CHECK(ad.levels[i].supports_disjoint(ad.levels[j]));
            double el = lp_energy(ad.rho, p, mu);
            CHECK(el <= std::pow(ell, 1.0 - p) * e1 * (1.0 + 1e-6));
        }
    }

    // admissibility for random crossing paths (center to beyond the
    // outermost ring)
    cch::testing::Rng rng(67);
    AnnuliDensity ad = annuli_density(D, A, 4, 2.0, mu);
    int biggest = 0;
    for (int r : ad.inner_radii) biggest = std::max(biggest, 2 * r);
    std::uniform_int_distribution<int> dir(0, 3), jitter(-1, 1);
    for (int rep = 0; rep < 50; ++rep) {
        LatticePath path;
        IVec v{72, 72};
        path.vertices.push_back(v);
        int want_axis = dir(rng) % 2, want_sign = (dir(rng) < 2) ? 1 : -1;
        while (std::max(std::abs(v[0] - 72), std::abs(v[1] - 72)) <= biggest + 1) {
            IVec w = v;
            if (jitter(rng) == 0) {
                w[1 - want_axis] += jitter(rng);
            } else {
                w[want_axis] += want_sign;
            }
            if (w == v) continue;
            bool ok = true;
            for (int i = 0; i < 2; ++i) ok = ok && w[i] >= 0 && w[i] <= 144;
            if (!ok) continue;
            v = w;
            path.vertices.push_back(v);
        }
        Chain pc = chain_from_lattice_path(D, path);
        CHECK(line_integral(ad.rho, pc) >= 1.0 - 1e-9);
    }

    CHECK_THROWS_AS(annuli_density(D, {}, 1, 2.0, mu), std::invalid_argument);
    CHECK_THROWS_WITH_AS(annuli_density(D, A, 12, 2.0, mu),
                         doctest::Contains("insufficient room"), std::invalid_argument);
}

TEST_CASE("growth profile") {
    SUBCASE("flat line patch fits alpha close to 1") {
        // half-integer radii make the interior ball mass exactly 2r
        GridDomain D = box_domain(3, 64);
        Chain line(D, 1);
        for (int x = 2; x < 62; ++x) line.add(CellId{{x, 32, 32}, {0}}, 1.0);
        auto gp = growth_profile(line, 2.0, {2.5, 4.5, 6.5, 8.5});
        CHECK(std::abs(gp.fitted_alpha - 1.0) <= 0.1);
        CHECK(gp.r2 >= 0.999);
    }

    SUBCASE("closed square cycle fits alpha close to 1") {
        GridDomain D = box_domain(2, 24);
        Chain cyc = cube_boundary_cycle(D, 1, 12, IVec{6, 6});
        auto gp = growth_profile(cyc, 2.0, {1.5, 2.5, 3.5, 4.5});
        CHECK(std::abs(gp.fitted_alpha - 1.0) <= 0.1);
    }

    SUBCASE("flat plane patch: alpha near 2 at desk scale") {
        // lattice disk counts and edge truncation leave a visible bias at
        // these sizes, so the tolerance is looser here
        GridDomain D = box_domain(3, 24);
        Chain patch(D, 2);
        for (int x = 2; x < 22; ++x)
            for (int y = 2; y < 22; ++y) patch.add(CellId{{x, y, 12}, {0, 1}}, 1.0);
        auto gp = growth_profile(patch, 2.0, {2.0, 3.0, 4.5, 6.0});
        CHECK(std::abs(gp.fitted_alpha - 2.0) <= 0.25);
    }

    SUBCASE("single weighted vertex: alpha = 0, A recovers the weight") {
        GridDomain D = box_domain(2, 6);
        Chain pt(D, 0);
        pt.add(CellId{{3, 3}, {}}, 2.5);
        auto gp = growth_profile(pt, 3.0, {0.5, 1.0, 2.0});
        CHECK(std::abs(gp.fitted_alpha) <= 1e-9);
        CHECK(gp.fitted_A == doctest::Approx(2.5));
    }

    SUBCASE("errors") {
        GridDomain D = box_domain(2, 6);
        CHECK_THROWS_AS(growth_profile(Chain(D, 1), 2.0, {1.0}), std::invalid_argument);
        Chain pt(D, 0);
        pt.add(CellId{{1, 1}, {}}, 1.0);
        CHECK_THROWS_AS(growth_profile(pt, 2.0, {2.0, 1.0}), std::invalid_argument);
    }
}

TEST_CASE("active-set p=2 agrees with dual ascent on overlapping families") {
    cch::testing::Rng rng(71);
    GridDomain D = box_domain(2, 6);
    MeasureWeights mu(D);
    for (int rep = 0; rep < 15; ++rep) {
        std::vector<Chain> fam;
        for (int k = 0; k < 3; ++k) {
            Chain T = random_chain(D, 1, 4, rng);
            if (!T.empty()) fam.push_back(T);
        }
        if (fam.empty()) continue;
        ModulusSolution a = modulus(fam, 2.0, mu, 1e-10);
        ModulusSolution b = modulus_dual_ascent(fam, 2.0, mu, 1e-10);
        CHECK(std::abs(a.value - b.value) <= 1e-7 * (1.0 + a.value));
    }
}
