// Densities live on top-dimensional (n-)cells.  The pairing with an m-cell
// uses the incident-average rule: the density value seen by an m-cell is
// the arithmetic mean of the density over the n-cells incident to it
// (2^{n-m} of them in the interior, fewer at the domain boundary).  The
// rule is symmetric and exact for constant densities.

#pragma once

#include <map>

#include "cch/chain.hpp"

namespace cch {

// Nonnegative function on n-cells, sparse with default 0.
// n-cells are keyed by their base lattice point.
class Density {
public:
    Density() = default;
    explicit Density(GridDomain domain) : domain_(std::move(domain)) {}

    const GridDomain& domain() const { return domain_; }
    const std::map<IVec, double>& values() const { return values_; }

    double at(const IVec& base) const;
    void set(const IVec& base, double v);
    void add(const IVec& base, double v);

    Density& operator+=(const Density& other);
    Density& operator*=(double s);
    friend Density operator+(Density a, const Density& b) { return a += b; }
    friend Density operator*(double s, Density a) { return a *= s; }

    bool supports_disjoint(const Density& other) const;

private:
    GridDomain domain_;
    std::map<IVec, double> values_;
};

// Ambient measure: weight per n-cell, uniform h^n unless overridden.
class MeasureWeights {
public:
    MeasureWeights() = default;
    explicit MeasureWeights(GridDomain domain);
    MeasureWeights(GridDomain domain, double uniform);

    const GridDomain& domain() const { return domain_; }
    double at(const IVec& base) const;
    void set(const IVec& base, double w);
    double uniform_value() const { return uniform_; }

    // sup over sampled balls of mu(B(x,r)) / r^Q; checkable growth bound.
    double ball_growth_constant(double Q, const std::vector<double>& radii) const;

private:
    GridDomain domain_;
    double uniform_ = 1.0;
    std::map<IVec, double> overrides_;
};

// Bases of the n-cells incident to `c` that lie inside the domain.
std::vector<IVec> incident_top_cells(const GridDomain& domain, const CellId& c);

// sigma(q) = sum over cells c of T incident to q of ||T||(c) / #incident(c).
// Then  line_integral(f, T) = sum_q f(q) sigma(q).
Density pairing_weights(const Chain& T);

// int f d||T|| under the incident-average rule.
double line_integral(const Density& f, const Chain& T);

// ||f||_p^p = sum f(q)^p mu(q), and ||f||_p.
double lp_energy(const Density& f, double p, const MeasureWeights& mu);
double lp_norm(const Density& f, double p, const MeasureWeights& mu);

// Restriction of the energy/norm to n-cells whose barycenter lies within
// Euclidean distance r of a point (geometric coordinates).
double lp_norm_on_ball(const Density& f, double p, const MeasureWeights& mu,
                       const std::vector<double>& center, double r);

// Vertex field -> density on n-cells, taking the max (or mean) over the
// 2^n corner vertices of each cell.  `vertex_value` is queried on lattice
// points.  Max preserves upper-gradient inequalities along edges.
enum class CornerRule { max, mean };
Density density_from_vertices(const GridDomain& domain,
                              const std::function<double(const IVec&)>& vertex_value,
                              const std::pair<IVec, IVec>& box, CornerRule rule);

}  // namespace cch
