// Canonical chain fixtures: filled blocks and their boundary cycles,
// discrete sphere-like cycles, and the multi-scale zero-capacity current.

#pragma once

#include "cch/chain.hpp"

namespace cch {

// Sum of the (m+1)-cells of the block [corner, corner + side]^{m+1} along
// axes 0..m, all coefficients +1.
Chain cube_block(const GridDomain& domain, int m, int side, const IVec& corner);

// boundary(cube_block): an m-cycle of mass 2 (m+1) (side h)^m.
Chain cube_boundary_cycle(const GridDomain& domain, int m, int side, const IVec& corner);

// Filled (m+1)-ball: unit (m+1)-cells along axes 0..m whose barycenters lie
// within `radius_cells` of the center vertex (Euclidean, lattice units).
Chain ball_block(const GridDomain& domain, int m, int radius_cells, const IVec& center);

// boundary(ball_block): the discrete m-sphere.
Chain sphere_like_cycle(const GridDomain& domain, int m, int radius_cells,
                        const IVec& center);

// Truncation at level J of the multi-scale current
//    T = sum_{j<=J} sum_{k<=M_j} N_j * (sphere of radius 2^-j at (j, k, 0...)),
// built on a grid of spacing 2^-J.  N_j = floor(r_j^{alpha-m}) and
// M_j = floor(j^-2 r_j^-alpha) with r_j = 2^-j; levels with M_j = 0
// contribute nothing.  Mass stays bounded by c * sum j^-2 and the growth
// bound ||T||(B(x,r)) <= C r^alpha holds with C independent of J.
struct ZerocapLevels {
    Chain T;                  // the truncated current
    std::vector<int> M;       // copies per level, index j-1
    std::vector<long> N;      // multiplicity per level
    std::vector<double> r;    // radii 2^-j
};
ZerocapLevels zerocap_current(int J, double alpha, int m, int n);

// Domain holding zerocap_current(J): spacing 2^-J, box sized to the level
// centers (j, k, 0, ...).
GridDomain zerocap_domain(int J, double alpha, int m, int n);

// Paper-style parameters for level j.
long zerocap_N(int j, double alpha, int m);
int zerocap_M(int j, double alpha);

// Straight segment of `len` edges along `axis` starting at `start`.
Chain segment_chain(const GridDomain& domain, const IVec& start, int axis, int len);

}  // namespace cch
