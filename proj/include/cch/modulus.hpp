// p-modulus of finite chain families and p-capacity bounds via filling
// families.
//
//   M_p(Gamma) = inf { sum_q f(q)^p mu(q) :  f >= 0,
//                      int f d||T|| >= 1 for every T in Gamma }
//
// p = 1 is solved as a linear program; p = 2 by a dual active-set method;
// general p > 1 by dual ascent on the multipliers with the separable
// closed-form inner minimizer f = (sum_T lambda_T sigma_T / (p mu))^{1/(p-1)},
// each coordinate solved by safeguarded bisection.  Returned densities are
// rescaled to be exactly admissible, so the value is a true upper bound and
// the duals certify it from below.

#pragma once

#include "cch/density.hpp"
#include "cch/fit.hpp"
#include "cch/lp.hpp"

namespace cch {

struct ModulusSolution {
    double value = 0;  // +inf when some member has vanishing mass
    Density density;
    std::vector<double> duals;  // one nonnegative weight per family member
    double kkt_residual = 0;
    bool feasible = true;
    long iterations = 0;
};

ModulusSolution modulus(const std::vector<Chain>& family, double p,
                        const MeasureWeights& mu, double tol = 1e-8);

// The general-p dual-ascent path, exposed for cross-checking the p = 2
// active-set route.
ModulusSolution modulus_dual_ascent(const std::vector<Chain>& family, double p,
                                    const MeasureWeights& mu, double tol = 1e-8);

// One-constraint KKT solution, p > 1:
//   value = ( sum_q sigma(q)^{p/(p-1)} mu(q)^{-1/(p-1)} )^{1-p}.
// Serves as the oracle for the solver.
std::pair<double, Density> modulus_single_closed_form(const Chain& T, double p,
                                                      const MeasureWeights& mu);

// Modulus of a finite filling subfamily: a certified lower bound for
// cap_p(Lambda, .).  Every filling's boundary must equal a member of
// Lambda exactly.
ModulusSolution capacity_lower(const std::vector<Chain>& lambda,
                               const std::vector<Chain>& fillings, double p,
                               const MeasureWeights& mu, double tol = 1e-8);

// energy = |f|_p^p and the smallest pairing over the fillings; when the
// pairing is >= 1 the energy certifies cap <= energy over that subfamily.
std::pair<double, double> capacity_upper_certificate(const Density& f,
                                                     const std::vector<Chain>& fillings,
                                                     double p, const MeasureWeights& mu);

// Nested l-infinity annuli around a cell set A.  Ring k has inner lattice
// radius a_k = base_radius * 2^{k-1}, value 1/(h (a_k - 2)) on cells at
// ring distance, which makes every ring admissible for any 1-chain joining
// A to the outside of the largest ring (each unit step moves the l-inf
// distance by at most one).  All rings that fit in the domain are built
// once and enumerated by decreasing p-energy; rho^ell averages the first
// ell of them, so energy(rho^ell) <= ell^{1-p} energy(rho^1) holds by
// construction while supports stay pairwise disjoint.
struct AnnuliDensity {
    Density rho;                  // rho^ell
    std::vector<Density> levels;  // the ell rings used, energy-descending
    std::vector<double> level_energies;
    std::vector<int> inner_radii;  // lattice units, matching `levels`
    int max_levels = 0;            // how many rings the domain could hold
};
AnnuliDensity annuli_density(const GridDomain& domain, const std::vector<IVec>& A_bases,
                             int levels, double p, const MeasureWeights& mu,
                             int base_radius = 4);

// Growth table for eq-style bounds: rows are
//   LHS(r)/mass(T) with LHS(r) = int ||T||(B(z,r))^{1/(p-1)} d||T||(z),
// fit on log-log axes gives alpha/(p-1) and log A^{1/(p-1)}.
struct GrowthProfile {
    std::vector<double> radii;
    std::vector<double> lhs_over_mass;
    double fitted_alpha = 0;
    double fitted_A = 0;
    double r2 = 0;
};
GrowthProfile growth_profile(const Chain& T, double p, const std::vector<double>& radii);

// ||T||(B(x, r)) with Euclidean balls sampled at cell barycenters.
double ball_mass(const Chain& T, const std::vector<double>& center, double r);

}  // namespace cch
