#include "cch/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sparse pairing weights over a shared support index.
struct FamilyData {
    std::vector<IVec> support;             // union of n-cell bases
    std::map<IVec, int> index;
    std::vector<std::vector<std::pair<int, double>>> sigma;  // per member
    std::vector<double> mu_w;              // measure weight per support cell
    bool degenerate = false;               // some member has empty sigma
};

FamilyData build_family(const std::vector<Chain>& family, const MeasureWeights& mu) {
    FamilyData fd;
    for (const auto& T : family) {
        Density s = pairing_weights(T);
        if (s.values().empty()) fd.degenerate = true;
        for (const auto& [q, v] : s.values()) {
            if (!fd.index.count(q)) {
                fd.index[q] = static_cast<int>(fd.support.size());
                fd.support.push_back(q);
            }
        }
    }
    for (const auto& T : family) {
        Density s = pairing_weights(T);
        std::vector<std::pair<int, double>> row;
        row.reserve(s.values().size());
        for (const auto& [q, v] : s.values()) row.emplace_back(fd.index.at(q), v);
        fd.sigma.push_back(std::move(row));
    }
    fd.mu_w.resize(fd.support.size());
    for (size_t i = 0; i < fd.support.size(); ++i) fd.mu_w[i] = mu.at(fd.support[i]);
    return fd;
}

ModulusSolution infeasible_solution(const GridDomain& domain, size_t members) {
    ModulusSolution out;
    out.value = kInf;
    out.feasible = false;
    out.density = Density(domain);
    out.duals.assign(members, 0.0);
    return out;
}

// Finalize: rescale f so every constraint is >= 1 exactly, compute value,
// duals, and the KKT residual (stationarity, feasibility, complementary
// slackness).
ModulusSolution finalize(const FamilyData& fd, const GridDomain& domain, double p,
                         std::vector<double> f, std::vector<double> lambda,
                         long iterations) {
    ModulusSolution out;
    out.iterations = iterations;
    double min_pair = kInf;
    std::vector<double> pairings(fd.sigma.size(), 0.0);
    for (size_t t = 0; t < fd.sigma.size(); ++t) {
        double s = 0;
        for (const auto& [q, v] : fd.sigma[t]) s += v * f[q];
        pairings[t] = s;
        min_pair = std::min(min_pair, s);
    }
    if (!fd.sigma.empty() && min_pair < 1.0 && min_pair > 0) {
        double scale = 1.0 / min_pair;
        for (double& v : f) v *= scale;
        for (double& s : pairings) s *= scale;
    }
    out.density = Density(domain);
    double energy = 0;
    for (size_t q = 0; q < f.size(); ++q) {
        if (f[q] != 0.0) out.density.set(fd.support[q], f[q]);
        energy += std::pow(f[q], p) * fd.mu_w[q];
    }
    out.value = energy;
    out.duals = std::move(lambda);

    // KKT residuals on the reported point.
    double feas = 0, slack = 0, stat = 0, stat_scale = 0;
    for (size_t t = 0; t < fd.sigma.size(); ++t) {
        feas = std::max(feas, 1.0 - pairings[t]);
        slack = std::max(slack, out.duals[t] * (pairings[t] - 1.0));
    }
    std::vector<double> s_acc(f.size(), 0.0);
    for (size_t t = 0; t < fd.sigma.size(); ++t)
        for (const auto& [q, v] : fd.sigma[t]) s_acc[q] += out.duals[t] * v;
    for (size_t q = 0; q < f.size(); ++q) {
        double grad = p * std::pow(f[q], p - 1.0) * fd.mu_w[q];
        stat_scale = std::max(stat_scale, std::max(grad, s_acc[q]));
        // At f = 0 the subgradient condition is grad - s >= 0.
        double r = (f[q] == 0.0) ? std::max(0.0, s_acc[q] - grad) : std::abs(grad - s_acc[q]);
        stat = std::max(stat, r);
    }
    if (stat_scale > 0) stat /= stat_scale;
    out.kkt_residual = std::max({feas, slack, stat});
    return out;
}

ModulusSolution modulus_p1_lp(const std::vector<Chain>& family, const FamilyData& fd,
                              const GridDomain& domain, double tol) {
    const int m = static_cast<int>(family.size());
    LpProblem prob;
    prob.A.rows = m;
    std::vector<std::vector<std::pair<int, double>>> cols(fd.support.size());
    for (int t = 0; t < m; ++t)
        for (const auto& [q, v] : fd.sigma[t]) cols[q].emplace_back(t, v);
    for (size_t q = 0; q < fd.support.size(); ++q) {
        prob.A.add_column(cols[q]);
        prob.c.push_back(fd.mu_w[q]);
    }
    for (int t = 0; t < m; ++t) {  // surplus variables
        prob.A.add_column({{t, -1.0}});
        prob.c.push_back(0.0);
    }
    prob.b.assign(m, 1.0);
    LpOptions opts;
    opts.tol = tol * 1e-1;
    LpSolution sol = solve_lp(prob, opts);
    if (sol.status == LpStatus::iteration_limit)
        throw SolverLimitError("modulus LP: iteration cap exceeded", sol.objective);
    std::vector<double> f(fd.support.size());
    for (size_t q = 0; q < fd.support.size(); ++q) f[q] = std::max(sol.x[q], 0.0);
    std::vector<double> lambda(m);
    for (int t = 0; t < m; ++t) lambda[t] = std::max(sol.y[t], 0.0);
    ModulusSolution out = finalize(fd, domain, 1.0, std::move(f), std::move(lambda),
                                   sol.iterations);
    // For p = 1 stationarity is LP dual feasibility; fold in the LP's own
    // certificate quality.
    out.kkt_residual = std::max(out.kkt_residual, sol.duality_gap);
    return out;
}

std::vector<double> inner_minimizer(const FamilyData& fd, double p,
                                    const std::vector<double>& lambda) {
    std::vector<double> s(fd.support.size(), 0.0);
    for (size_t t = 0; t < fd.sigma.size(); ++t) {
        if (lambda[t] == 0.0) continue;
        for (const auto& [q, v] : fd.sigma[t]) s[q] += lambda[t] * v;
    }
    const double inv = 1.0 / (p - 1.0);
    std::vector<double> f(s.size());
    for (size_t q = 0; q < s.size(); ++q)
        f[q] = std::pow(s[q] / (p * fd.mu_w[q]), inv);
    return f;
}

ModulusSolution modulus_active_set_p2(const std::vector<Chain>& family,
                                      const FamilyData& fd, const GridDomain& domain,
                                      double tol) {
    const int m = static_cast<int>(family.size());
    // Gram matrix G_ts = sum_q sigma_t(q) sigma_s(q) / (2 mu(q)); then
    // f = sum lambda_t sigma_t / (2 mu) and pairing_t = (G lambda)_t.
    std::vector<double> G(static_cast<size_t>(m) * m, 0.0);
    for (int t = 0; t < m; ++t) {
        std::vector<double> dense(fd.support.size(), 0.0);
        for (const auto& [q, v] : fd.sigma[t]) dense[q] = v;
        for (int s = t; s < m; ++s) {
            double acc = 0;
            for (const auto& [q, v] : fd.sigma[s])
                if (dense[q] != 0.0) acc += dense[q] * v / (2.0 * fd.mu_w[q]);
            G[t * m + s] = acc;
            G[s * m + t] = acc;
        }
    }
    std::vector<char> active(m, 0);
    std::vector<double> lambda(m, 0.0);
    long iters = 0;
    for (int round = 0; round < 4 * m + 16; ++round) {
        ++iters;
        // Solve G_WW lambda_W = 1 on the active set.
        std::vector<int> W;
        for (int t = 0; t < m; ++t)
            if (active[t]) W.push_back(t);
        std::fill(lambda.begin(), lambda.end(), 0.0);
        if (!W.empty()) {
            const int k = static_cast<int>(W.size());
            std::vector<double> M(static_cast<size_t>(k) * k), rhs(k, 1.0);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) M[i * k + j] = G[W[i] * m + W[j]];
            // Gaussian elimination with partial pivoting; a singular block
            // means a redundant constraint, which we deactivate.
            std::vector<int> perm(k);
            std::iota(perm.begin(), perm.end(), 0);
            bool singular = false;
            for (int c = 0; c < k && !singular; ++c) {
                int piv = c;
                for (int r = c + 1; r < k; ++r)
                    if (std::abs(M[r * k + c]) > std::abs(M[piv * k + c])) piv = r;
                if (std::abs(M[piv * k + c]) < 1e-14) {
                    active[W[perm[c]]] = 0;
                    singular = true;
                    break;
                }
                if (piv != c) {
                    for (int j = 0; j < k; ++j) std::swap(M[piv * k + j], M[c * k + j]);
                    std::swap(rhs[piv], rhs[c]);
                    std::swap(perm[piv], perm[c]);
                }
                for (int r = c + 1; r < k; ++r) {
                    double fct = M[r * k + c] / M[c * k + c];
                    for (int j = c; j < k; ++j) M[r * k + j] -= fct * M[c * k + j];
                    rhs[r] -= fct * rhs[c];
                }
            }
            if (singular) continue;
            std::vector<double> lw(k);
            for (int r = k - 1; r >= 0; --r) {
                double s = rhs[r];
                for (int j = r + 1; j < k; ++j) s -= M[r * k + j] * lw[j];
                lw[r] = s / M[r * k + r];
            }
            for (int i = 0; i < k; ++i) lambda[W[perm[i]]] = lw[i];
        }
        // Drop the most negative multiplier, if any.
        int drop = -1;
        double worst = -tol * 1e-2;
        for (int t = 0; t < m; ++t)
            if (active[t] && lambda[t] < worst) {
                worst = lambda[t];
                drop = t;
            }
        if (drop >= 0) {
            active[drop] = 0;
            continue;
        }
        // Add the most violated constraint.
        int add = -1;
        double viol = tol * 1e-2;
        for (int t = 0; t < m; ++t) {
            double pair_t = 0;
            for (int s = 0; s < m; ++s) pair_t += G[t * m + s] * lambda[s];
            if (!active[t] && 1.0 - pair_t > viol) {
                viol = 1.0 - pair_t;
                add = t;
            }
        }
        if (add < 0) break;
        active[add] = 1;
    }
    for (double& l : lambda) l = std::max(l, 0.0);
    std::vector<double> f(fd.support.size(), 0.0);
    for (int t = 0; t < m; ++t) {
        if (lambda[t] == 0.0) continue;
        for (const auto& [q, v] : fd.sigma[t]) f[q] += lambda[t] * v;
    }
    for (size_t q = 0; q < f.size(); ++q) f[q] /= 2.0 * fd.mu_w[q];
    return finalize(fd, domain, 2.0, std::move(f), std::move(lambda), iters);
}

}  // namespace

ModulusSolution modulus_dual_ascent(const std::vector<Chain>& family, double p,
                                    const MeasureWeights& mu, double tol) {
    if (p <= 1.0) throw std::invalid_argument("modulus_dual_ascent: requires p > 1");
    FamilyData fd = build_family(family, mu);
    if (family.empty()) {
        ModulusSolution out;
        out.density = Density(mu.domain());
        return out;
    }
    if (fd.degenerate) return infeasible_solution(mu.domain(), family.size());

    const int m = static_cast<int>(family.size());
    std::vector<double> lambda(m, 0.0);
    const double inv = 1.0 / (p - 1.0);
    std::vector<double> s_field(fd.support.size(), 0.0);

    auto pairing = [&](int t) {
        double acc = 0;
        for (const auto& [q, v] : fd.sigma[t])
            acc += v * std::pow(s_field[q] / (p * fd.mu_w[q]), inv);
        return acc;
    };

    long iters = 0;
    const long max_sweeps = 20000;
    double residual = kInf;
    for (long sweep = 0; sweep < max_sweeps; ++sweep) {
        ++iters;
        for (int t = 0; t < m; ++t) {
            // Remove t's contribution, then pick lambda_t >= 0 so that the
            // constraint is tight (or zero if already satisfied).
            if (lambda[t] != 0.0)
                for (const auto& [q, v] : fd.sigma[t]) s_field[q] -= lambda[t] * v;
            lambda[t] = 0.0;
            if (pairing(t) >= 1.0) continue;
            double lo = 0.0, hi = 1.0;
            for (const auto& [q, v] : fd.sigma[t]) s_field[q] += hi * v;
            int guard = 0;
            while (pairing(t) < 1.0 && guard++ < 200) {
                for (const auto& [q, v] : fd.sigma[t]) s_field[q] += hi * v;
                lo = hi;
                hi *= 2.0;
            }
            // s_field currently holds lambda_t = hi; bisect in [lo, hi].
            double cur = hi;
            for (int it = 0; it < 100; ++it) {
                double mid = 0.5 * (lo + hi);
                double delta = mid - cur;
                if (delta != 0.0)
                    for (const auto& [q, v] : fd.sigma[t]) s_field[q] += delta * v;
                cur = mid;
                if (pairing(t) < 1.0)
                    lo = mid;
                else
                    hi = mid;
                if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
            }
            if (cur != hi) {
                for (const auto& [q, v] : fd.sigma[t]) s_field[q] += (hi - cur) * v;
                cur = hi;
            }
            lambda[t] = cur;
        }
        // Convergence: feasibility and complementary slackness.
        residual = 0;
        for (int t = 0; t < m; ++t) {
            double c = pairing(t);
            residual = std::max(residual, 1.0 - c);
            residual = std::max(residual, lambda[t] * (c - 1.0));
        }
        if (residual <= tol * 1e-2) break;
    }
    if (residual > tol) {
        double dual_lb = 0;  // g(lambda) = sum lambda - (p-1)/p sum s f
        std::vector<double> f = inner_minimizer(fd, p, lambda);
        double sf = 0;
        for (size_t q = 0; q < f.size(); ++q) sf += s_field[q] * f[q];
        for (int t = 0; t < m; ++t) dual_lb += lambda[t];
        dual_lb -= (p - 1.0) / p * sf;
        throw SolverLimitError("modulus: dual ascent did not reach tolerance; dual bound " +
                                   std::to_string(dual_lb),
                               dual_lb);
    }
    std::vector<double> f = inner_minimizer(fd, p, lambda);
    return finalize(fd, mu.domain(), p, std::move(f), std::move(lambda), iters);
}

ModulusSolution modulus(const std::vector<Chain>& family, double p,
                        const MeasureWeights& mu, double tol) {
    if (p < 1.0) throw std::invalid_argument("modulus: requires p >= 1");
    FamilyData fd = build_family(family, mu);
    if (family.empty()) {
        ModulusSolution out;
        out.density = Density(mu.domain());
        return out;
    }
    if (fd.degenerate) return infeasible_solution(mu.domain(), family.size());
    if (p == 1.0) return modulus_p1_lp(family, fd, mu.domain(), tol);
    if (p == 2.0) {
        ModulusSolution sol = modulus_active_set_p2(family, fd, mu.domain(), tol);
        if (sol.kkt_residual <= tol) return sol;
        // Degenerate active set; the general path is slower but safe.
        return modulus_dual_ascent(family, p, mu, tol);
    }
    return modulus_dual_ascent(family, p, mu, tol);
}

std::pair<double, Density> modulus_single_closed_form(const Chain& T, double p,
                                                      const MeasureWeights& mu) {
    if (p <= 1.0)
        throw std::invalid_argument("modulus_single_closed_form: requires p > 1");
    Density sigma = pairing_weights(T);
    if (sigma.values().empty()) return {kInf, Density(T.domain())};
    const double pp = p / (p - 1.0);
    double K = 0;
    for (const auto& [q, v] : sigma.values())
        K += std::pow(v, pp) * std::pow(mu.at(q), -1.0 / (p - 1.0));
    double value = std::pow(K, 1.0 - p);
    Density f(T.domain());
    for (const auto& [q, v] : sigma.values())
        f.set(q, std::pow(v / mu.at(q), 1.0 / (p - 1.0)) / K);
    return {value, f};
}

ModulusSolution capacity_lower(const std::vector<Chain>& lambda,
                               const std::vector<Chain>& fillings, double p,
                               const MeasureWeights& mu, double tol) {
    for (size_t i = 0; i < fillings.size(); ++i) {
        Chain bd = boundary(fillings[i]);
        bool found = false;
        for (const auto& T : lambda)
            if (bd == T) {
                found = true;
                break;
            }
        if (!found)
            throw std::invalid_argument(
                "capacity_lower: filling " + std::to_string(i) +
                " has boundary outside the target family");
    }
    if (fillings.empty()) {
        ModulusSolution out;
        out.density = Density(mu.domain());
        return out;  // vacuous constraints: value 0
    }
    return modulus(fillings, p, mu, tol);
}

std::pair<double, double> capacity_upper_certificate(const Density& f,
                                                     const std::vector<Chain>& fillings,
                                                     double p, const MeasureWeights& mu) {
    double energy = lp_energy(f, p, mu);
    double min_pair = fillings.empty() ? 0.0 : kInf;
    for (const auto& S : fillings) min_pair = std::min(min_pair, line_integral(f, S));
    return {energy, min_pair};
}

AnnuliDensity annuli_density(const GridDomain& domain, const std::vector<IVec>& A_bases,
                             int levels, double p, const MeasureWeights& mu,
                             int base_radius) {
    if (A_bases.empty()) throw std::invalid_argument("annuli_density: empty cell set");
    if (levels < 1) throw std::invalid_argument("annuli_density: levels must be >= 1");
    if (base_radius < 3) throw std::invalid_argument("annuli_density: base radius >= 3");
    const int n = domain.n();
    const double h = domain.spacing();
    IVec all_axes(n);
    for (int i = 0; i < n; ++i) all_axes[i] = i;
    // Bounding box of A (cell bases).
    IVec alo = A_bases[0], ahi = A_bases[0];
    for (const auto& q : A_bases)
        for (int i = 0; i < n; ++i) {
            alo[i] = std::min(alo[i], q[i]);
            ahi[i] = std::max(ahi[i], q[i]);
        }
    // How many dyadic rings fit entirely in the domain.
    int max_levels = 0;
    while (true) {
        long a = static_cast<long>(base_radius) << max_levels;
        long outer = 2 * a;
        bool fits = true;
        for (int i = 0; i < n; ++i)
            if (alo[i] - outer < domain.lo()[i] || ahi[i] + 1 + outer > domain.hi()[i])
                fits = false;
        if (!fits) break;
        ++max_levels;
    }
    if (levels > max_levels)
        throw std::invalid_argument("annuli_density: insufficient room for " +
                                    std::to_string(levels) + " levels (domain holds " +
                                    std::to_string(max_levels) + ")");

    // l-infinity distance from the nearest corner of cell q to the vertex
    // box of A; ring k keeps distances in [a_k, 2 a_k - 1].  Every unit
    // step of a lattice path moves the vertex distance by at most one, and
    // an edge with both endpoints at distances in [a+1, 2a-1] has all its
    // incident n-cells inside the ring, which yields the crossing bound.
    auto cell_dist = [&](const IVec& q) {
        long d = 0;
        for (int i = 0; i < n; ++i) {
            long lo_gap = alo[i] - q[i] - 1;
            long hi_gap = q[i] - (ahi[i] + 1);
            d = std::max(d, std::max(lo_gap, hi_gap));
        }
        return d;
    };

    std::vector<Density> rings;
    std::vector<double> energies;
    std::vector<int> radii;
    for (int k = 1; k <= max_levels; ++k) {
        const long a = static_cast<long>(base_radius) << (k - 1);
        Density ring(domain);
        const double value = 1.0 / (h * static_cast<double>(a - 2));
        // Sweep the bounding box of the outer ring.
        IVec lo(n), hi(n);
        for (int i = 0; i < n; ++i) {
            lo[i] = static_cast<int>(alo[i] - 2 * a);
            hi[i] = static_cast<int>(ahi[i] + 2 * a);
        }
        IVec q = lo;
        while (true) {
            long d = cell_dist(q);
            if (d >= a && d <= 2 * a - 1 && domain.contains(CellId{q, all_axes}))
                ring.set(q, value);
            int i = n - 1;
            for (; i >= 0; --i) {
                if (q[i] < hi[i]) {
                    ++q[i];
                    break;
                }
                q[i] = lo[i];
            }
            if (i < 0) break;
        }
        energies.push_back(lp_energy(ring, p, mu));
        rings.push_back(std::move(ring));
        radii.push_back(static_cast<int>(a));
    }
    // Enumerate by decreasing energy (outer ring first on ties) so that
    // rho^1 carries the largest single-ring energy.
    std::vector<int> order(rings.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        if (energies[x] != energies[y]) return energies[x] > energies[y];
        return radii[x] > radii[y];
    });

    AnnuliDensity out;
    out.max_levels = max_levels;
    out.rho = Density(domain);
    for (int k = 0; k < levels; ++k) {
        int idx = order[k];
        out.levels.push_back(rings[idx]);
        out.level_energies.push_back(energies[idx]);
        out.inner_radii.push_back(radii[idx]);
        out.rho += rings[idx];
    }
    out.rho *= 1.0 / static_cast<double>(levels);
    return out;
}

double ball_mass(const Chain& T, const std::vector<double>& center, double r) {
    const double h = T.domain().spacing();
    const double hm = std::pow(h, T.dim());
    double s = 0;
    for (const auto& [c, w] : T.coeffs()) {
        auto b = c.barycenter(h);
        double d2 = 0;
        for (size_t i = 0; i < b.size(); ++i) d2 += (b[i] - center[i]) * (b[i] - center[i]);
        if (d2 <= r * r + 1e-15) s += std::abs(w) * hm;
    }
    return s;
}

GrowthProfile growth_profile(const Chain& T, double p, const std::vector<double>& radii) {
    if (T.empty()) throw std::invalid_argument("growth_profile: zero-mass chain");
    if (p <= 1.0) throw std::invalid_argument("growth_profile: requires p > 1");
    for (size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw std::invalid_argument("growth_profile: radii must increase");
    if (radii.empty() || radii.front() <= 0)
        throw std::invalid_argument("growth_profile: radii must be positive");

    const double h = T.domain().spacing();
    const double hm = std::pow(h, T.dim());
    const double mass = T.mass();
    const double ex = 1.0 / (p - 1.0);

    std::vector<std::pair<std::vector<double>, double>> cells;  // (barycenter, ||T||)
    for (const auto& [c, w] : T.coeffs())
        cells.emplace_back(c.barycenter(h), std::abs(w) * hm);

    GrowthProfile out;
    out.radii = radii;
    for (double r : radii) {
        double lhs = 0;
        for (const auto& [z, wz] : cells) {
            double bm = 0;
            for (const auto& [y, wy] : cells) {
                double d2 = 0;
                for (size_t i = 0; i < z.size(); ++i) d2 += (y[i] - z[i]) * (y[i] - z[i]);
                if (d2 <= r * r + 1e-15) bm += wy;
            }
            lhs += std::pow(bm, ex) * wz;
        }
        out.lhs_over_mass.push_back(lhs / mass);
    }
    std::vector<double> lx, ly;
    for (size_t i = 0; i < radii.size(); ++i) {
        lx.push_back(std::log(radii[i]));
        ly.push_back(std::log(std::max(out.lhs_over_mass[i], 1e-300)));
    }
    LinearFit fit = linear_fit(lx, ly);
    out.fitted_alpha = fit.slope * (p - 1.0);
    out.fitted_A = std::exp(fit.intercept * (p - 1.0));
    out.r2 = fit.r2;
    return out;
}

}  // namespace cch
