// Scalar fields on lattice vertices, with the discrete pointwise-Lipschitz
// surrogates.  The true limits r -> 0 are unattainable on a grid, so both
// constants are read off a finite radius schedule (default {h, 2h, 4h}):
//
//   m_s(x) = max over 0 < |y-x| <= s of |f(y)-f(x)| / |y-x|
//   Lip(x) = m at the widest schedule radius (= max over the schedule)
//   lip(x) = m at the tightest radius      (= min over the schedule)
//
// Lip dominates every single-step difference quotient and is the side used
// for strict upper-norm/upper-gradient checks; lip is an estimate only.
// Both are exact for affine fields with axis-aligned gradients, and Lip
// reaches the euclidean gradient norm once the schedule admits an aligned
// lattice direction.

#pragma once

#include <functional>

#include "cch/density.hpp"

namespace cch {

class ScalarField {
public:
    ScalarField() = default;
    // Vertex box lo..hi inclusive.
    ScalarField(IVec lo, IVec hi);

    const IVec& lo() const { return lo_; }
    const IVec& hi() const { return hi_; }
    int n() const { return static_cast<int>(lo_.size()); }
    size_t size() const { return values_.size(); }
    const std::vector<double>& raw() const { return values_; }
    std::vector<double>& raw() { return values_; }

    bool contains_vertex(const IVec& v) const;
    double at(const IVec& v) const;
    void set(const IVec& v, double value);

    // All vertices, row-major.
    std::vector<IVec> vertices() const;

    // Multilinear interpolation at a geometric point (lattice units of h).
    double interpolate(const std::vector<double>& point_in_lattice_units) const;

    static ScalarField sample(const IVec& lo, const IVec& hi, double h,
                              const std::function<double(const std::vector<double>&)>& f);

private:
    IVec lo_, hi_;
    std::vector<int> stride_;
    std::vector<double> values_;
    size_t flat(const IVec& v) const;
};

struct LipEstimate {
    ScalarField lip;
    ScalarField Lip;
    std::vector<double> radii;
};

// Discrete pointwise Lipschitz constants of f over the given radius
// schedule (geometric units, each >= h).  Distances are Euclidean.
LipEstimate lip_field(const ScalarField& f, double h,
                      const std::vector<double>& radii = {});

}  // namespace cch
