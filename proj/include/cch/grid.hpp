// cch -- cubical chains and cochains on lattice boxes.
//
// GridDomain describes an axis-aligned lattice box in R^n with spacing h.
// Cells of every dimension 0..n are addressed by CellId = (base, axes):
// the cell spans [base_i*h, (base_i+1)*h] along each axis in `axes` and
// sits at the point base_i*h along every other axis.

#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cch {

using IVec = std::vector<int>;

// Identifier of an m-cell. `axes` is strictly increasing; m = axes.size().
struct CellId {
    IVec base;
    IVec axes;

    int dim() const { return static_cast<int>(axes.size()); }

    friend auto operator<=>(const CellId& a, const CellId& b) {
        if (auto c = a.base <=> b.base; c != 0) return c;
        return a.axes <=> b.axes;
    }
    friend bool operator==(const CellId&, const CellId&) = default;

    bool has_axis(int a) const {
        for (int x : axes)
            if (x == a) return true;
        return false;
    }

    // Geometric volume h^m.
    double volume(double h) const;
    // Geometric barycenter: base*h + (h/2) sum of unit vectors over axes.
    std::vector<double> barycenter(double h) const;

    std::string str() const;
};

// Axis-aligned lattice box [lo, hi] with spacing h.  lo < hi componentwise.
class GridDomain {
public:
    GridDomain() = default;
    GridDomain(int n, double h, IVec lo, IVec hi);

    int n() const { return n_; }
    double spacing() const { return h_; }
    const IVec& lo() const { return lo_; }
    const IVec& hi() const { return hi_; }

    // True if the cell (of any dimension) lies inside [lo, hi].
    bool contains(const CellId& c) const;
    void require(const CellId& c) const;

    // Number of m-cells: sum over axis subsets S of size m of
    // prod_i (extent_i if i in S else extent_i + 1).
    std::uint64_t cell_count(int m) const;

    // All m-cells, in lexicographic (base, axes) order.
    std::vector<CellId> cells(int m) const;

    friend bool operator==(const GridDomain&, const GridDomain&) = default;

private:
    int n_ = 0;
    double h_ = 1.0;
    IVec lo_, hi_;
};

// Strictly increasing axis subsets of {0..n-1} of size m, lexicographic.
std::vector<IVec> axis_subsets(int n, int m);

}  // namespace cch
