// Flat norm, weighted flat norm, and filling volume as linear programs
// over the cubical complex.
//
// Unweighted problems are solved on the bounding box of the input's
// support: clamping R^n onto an axis-aligned box is 1-Lipschitz and maps
// cells to cells, so any decomposition can be pushed into the box without
// increasing mass.  Weighted problems are solved over the full domain
// (or a caller-supplied box) because moving mass can change its cost.

#pragma once

#include <optional>

#include "cch/density.hpp"
#include "cch/lp.hpp"

namespace cch {

struct FlatDecomposition {
    double value = 0;       // mass(R) + mass(V), or the weighted analog
    Chain R;                // dim m
    Chain V;                // dim m+1
    double residual = 0;    // |T - R - boundary(V)|_inf on coefficients
    double duality_gap = 0;
    long lp_iterations = 0;
};

struct FillResult {
    double value = 0;  // +inf when no filling exists
    std::optional<Chain> S;
    double residual = 0;
    double duality_gap = 0;
    long lp_iterations = 0;
    bool feasible = true;
};

// Feasibility of boundary(S) = T on a box domain: cycles of dimension >= 1
// are always fillable; 0-chains are fillable iff their total weight is 0.
bool is_fillable(const Chain& T);

FillResult fill_volume(const Chain& T, double tol = 1e-9);

FlatDecomposition flat_norm(const Chain& T, double tol = 1e-9);

// Objective  int hD d||R|| + int gD d||V||  with the incident-average
// pairing; reduces to flat_norm when hD = gD = 1.
FlatDecomposition weighted_flat_norm(const Chain& T, const Density& hD,
                                     const Density& gD, double tol = 1e-9,
                                     const std::optional<std::pair<IVec, IVec>>& region =
                                         std::nullopt);

// Checks the Fillvol = flat-norm lemma on a cycle: when Fillvol(T) <=
// mass(T) the two optima must agree.
struct FillvolFlatReport {
    bool hypothesis_met = false;  // Fillvol(T) <= mass(T)
    double fillvol = 0;
    double flatnorm = 0;
    double difference = 0;
    bool equal_within_tol = false;
};
FillvolFlatReport fillvol_equals_flat_check(const Chain& T, double tol = 1e-8);

}  // namespace cch
