// Sparse real-coefficient chains on the cells of a GridDomain, with the
// cubical boundary operator and the homotopy (prism) construction.
//
// Orientation convention: an m-cell with axes (a_0 < ... < a_{m-1}) is
// oriented by that ordered frame, and
//     boundary = sum_k (-1)^k (front_k - back_k)
// where back_k / front_k are the faces obtained by dropping axis a_k at
// base and base + e_{a_k}.  With this convention the boundary of a unit
// square is +bottom, +right, -top, -left.

#pragma once

#include <functional>
#include <map>
#include <optional>

#include "cch/grid.hpp"

namespace cch {

class Chain;

// Per-cell mass distribution ||T||: cell -> |coeff| * h^m.
struct MassVector {
    std::map<CellId, double> values;
    double total() const;
};

class Chain {
public:
    Chain() = default;
    Chain(GridDomain domain, int dim);

    const GridDomain& domain() const { return domain_; }
    int dim() const { return dim_; }
    const std::map<CellId, double>& coeffs() const { return coeffs_; }
    bool empty() const { return coeffs_.empty(); }
    size_t support_size() const { return coeffs_.size(); }

    double coeff(const CellId& c) const;
    // Accumulates, validates the cell, and drops exact zeros.
    void add(const CellId& c, double w);
    void set(const CellId& c, double w);

    double mass() const;
    MassVector mass_vector() const;

    // True while every coefficient is an integer (set on construction,
    // cleared by non-integral arithmetic).
    bool is_integral() const { return integral_; }
    void mark_integral(bool v) { integral_ = v; }

    Chain& operator+=(const Chain& other);
    Chain& operator-=(const Chain& other);
    Chain& operator*=(double s);
    friend Chain operator+(Chain a, const Chain& b) { return a += b; }
    friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
    friend Chain operator*(double s, Chain a) { return a *= s; }
    Chain operator-() const;

    friend bool operator==(const Chain& a, const Chain& b) {
        return a.dim_ == b.dim_ && a.domain_ == b.domain_ && a.coeffs_ == b.coeffs_;
    }

    // Max |coefficient| over the support (0 for the zero chain).
    double coeff_inf_norm() const;

    // Bounding lattice box of the support, clamped outward to valid cells.
    // Empty chain -> nullopt.
    std::optional<std::pair<IVec, IVec>> support_box() const;

private:
    GridDomain domain_;
    int dim_ = 0;
    std::map<CellId, double> coeffs_;
    bool integral_ = true;
    void check_cell(const CellId& c) const;
};

// Signed faces of a single cell, in the convention above.
// Returns pairs (face, sign).
std::vector<std::pair<CellId, int>> cell_boundary(const CellId& c);

Chain boundary(const Chain& T);

Chain restrict_chain(const Chain& T, const std::function<bool(const CellId&)>& keep);

// Shift by an integer lattice vector; mass and boundary are preserved.
Chain translate(const Chain& T, const IVec& v);

// Pushforward under x |-> anchor*h + 2^{-k} (x - anchor*h) into `target`,
// whose spacing must equal domain.h * 2^{-k}.  Cell -> cell, coefficients
// preserved, mass scales by 2^{-km}.
Chain dyadic_scale(const Chain& T, int k, const IVec& anchor, const GridDomain& target);

// Ordered lattice vertices, consecutive entries adjacent (one step along
// one axis).
struct LatticePath {
    std::vector<IVec> vertices;
    size_t steps() const { return vertices.empty() ? 0 : vertices.size() - 1; }
};

Chain chain_from_lattice_path(const GridDomain& domain, const LatticePath& path);

// Discrete straight-line homotopy from T to translate(T, v), advancing one
// unit step at a time along axes in increasing order.  Returns (S, R) with
//     translate(T, v) - T = boundary(S) + R,      R = prism of boundary(T),
// mass(S) <= h * |v|_1 * mass(T).  R = 0 when boundary(T) = 0.
struct PrismFill {
    Chain S;  // dim m+1
    Chain R;  // dim m
};
PrismFill prism_fill(const Chain& T, const IVec& v);

}  // namespace cch
