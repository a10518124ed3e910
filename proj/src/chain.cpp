#include "cch/chain.hpp"

#include <algorithm>
#include <cmath>

namespace cch {

double MassVector::total() const {
    double s = 0;
    for (const auto& [c, v] : values) s += v;
    return s;
}

Chain::Chain(GridDomain domain, int dim) : domain_(std::move(domain)), dim_(dim) {
    if (dim < 0 || dim > domain_.n())
        throw std::invalid_argument("Chain: dimension out of range");
}

double Chain::coeff(const CellId& c) const {
    auto it = coeffs_.find(c);
    return it == coeffs_.end() ? 0.0 : it->second;
}

void Chain::check_cell(const CellId& c) const {
    if (c.dim() != dim_)
        throw std::invalid_argument("Chain: cell dimension mismatch at " + c.str());
    domain_.require(c);
}

void Chain::add(const CellId& c, double w) {
    if (w == 0.0) return;
    check_cell(c);
    double& slot = coeffs_[c];
    slot += w;
    if (slot == 0.0) coeffs_.erase(c);
    if (w != std::floor(w)) integral_ = false;
}

void Chain::set(const CellId& c, double w) {
    check_cell(c);
    if (w == 0.0)
        coeffs_.erase(c);
    else
        coeffs_[c] = w;
    if (w != std::floor(w)) integral_ = false;
}

double Chain::mass() const {
    double hm = std::pow(domain_.spacing(), dim_);
    double s = 0;
    for (const auto& [c, w] : coeffs_) s += std::abs(w);
    return s * hm;
}

MassVector Chain::mass_vector() const {
    double hm = std::pow(domain_.spacing(), dim_);
    MassVector mv;
    for (const auto& [c, w] : coeffs_) mv.values[c] = std::abs(w) * hm;
    return mv;
}

Chain& Chain::operator+=(const Chain& other) {
    if (other.empty()) return *this;
    if (dim_ != other.dim_ || !(domain_ == other.domain_))
        throw std::invalid_argument("Chain: domain/dimension mismatch in addition");
    for (const auto& [c, w] : other.coeffs_) add(c, w);
    integral_ = integral_ && other.integral_;
    return *this;
}

Chain& Chain::operator-=(const Chain& other) {
    if (other.empty()) return *this;
    if (dim_ != other.dim_ || !(domain_ == other.domain_))
        throw std::invalid_argument("Chain: domain/dimension mismatch in subtraction");
    for (const auto& [c, w] : other.coeffs_) add(c, -w);
    integral_ = integral_ && other.integral_;
    return *this;
}

Chain& Chain::operator*=(double s) {
    if (s == 0.0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [c, w] : coeffs_) w *= s;
    if (s != std::floor(s)) integral_ = false;
    return *this;
}

Chain Chain::operator-() const {
    Chain out = *this;
    for (auto& [c, w] : out.coeffs_) w = -w;
    return out;
}

double Chain::coeff_inf_norm() const {
    double m = 0;
    for (const auto& [c, w] : coeffs_) m = std::max(m, std::abs(w));
    return m;
}

std::optional<std::pair<IVec, IVec>> Chain::support_box() const {
    if (coeffs_.empty()) return std::nullopt;
    const int n = domain_.n();
    IVec lo(n, INT32_MAX), hi(n, INT32_MIN);
    for (const auto& [c, w] : coeffs_) {
        for (int i = 0; i < n; ++i) {
            int top = c.has_axis(i) ? c.base[i] + 1 : c.base[i];
            lo[i] = std::min(lo[i], c.base[i]);
            hi[i] = std::max(hi[i], top);
        }
    }
    // A box needs positive extent along every axis.
    for (int i = 0; i < n; ++i) {
        if (lo[i] == hi[i]) {
            if (hi[i] < domain_.hi()[i])
                ++hi[i];
            else
                --lo[i];
        }
    }
    return std::make_pair(lo, hi);
}

std::vector<std::pair<CellId, int>> cell_boundary(const CellId& c) {
    std::vector<std::pair<CellId, int>> faces;
    const int m = c.dim();
    faces.reserve(2 * m);
    for (int k = 0; k < m; ++k) {
        int axis = c.axes[k];
        CellId face;
        face.base = c.base;
        face.axes.reserve(m - 1);
        for (int j = 0; j < m; ++j)
            if (j != k) face.axes.push_back(c.axes[j]);
        int sign = (k % 2 == 0) ? 1 : -1;
        CellId front = face;
        front.base[axis] += 1;
        faces.emplace_back(std::move(front), sign);
        faces.emplace_back(std::move(face), -sign);
    }
    return faces;
}

Chain boundary(const Chain& T) {
    if (T.dim() < 1) throw std::invalid_argument("no boundary in dimension 0");
    Chain out(T.domain(), T.dim() - 1);
    for (const auto& [c, w] : T.coeffs())
        for (const auto& [face, sign] : cell_boundary(c)) out.add(face, sign * w);
    out.mark_integral(T.is_integral());
    return out;
}

Chain restrict_chain(const Chain& T, const std::function<bool(const CellId&)>& keep) {
    Chain out(T.domain(), T.dim());
    for (const auto& [c, w] : T.coeffs())
        if (keep(c)) out.set(c, w);
    out.mark_integral(T.is_integral());
    return out;
}

Chain translate(const Chain& T, const IVec& v) {
    if (static_cast<int>(v.size()) != T.domain().n())
        throw std::invalid_argument("translate: vector dimension mismatch");
    Chain out(T.domain(), T.dim());
    for (const auto& [c, w] : T.coeffs()) {
        CellId moved = c;
        for (size_t i = 0; i < v.size(); ++i) moved.base[i] += v[i];
        if (!T.domain().contains(moved))
            throw std::out_of_range("translate: out of domain at " + moved.str());
        out.set(moved, w);
    }
    out.mark_integral(T.is_integral());
    return out;
}

Chain dyadic_scale(const Chain& T, int k, const IVec& anchor, const GridDomain& target) {
    if (k < 0) throw std::invalid_argument("dyadic_scale: k must be >= 0");
    const double want = T.domain().spacing() / std::pow(2.0, k);
    if (std::abs(target.spacing() - want) > 1e-15 * want)
        throw std::invalid_argument("dyadic_scale: target spacing must be h * 2^-k");
    if (target.n() != T.domain().n())
        throw std::invalid_argument("dyadic_scale: dimension mismatch");
    const long scale = 1L << k;
    Chain out(target, T.dim());
    for (const auto& [c, w] : T.coeffs()) {
        CellId img = c;
        for (size_t i = 0; i < img.base.size(); ++i)
            img.base[i] = static_cast<int>(anchor[i] * scale + (c.base[i] - anchor[i]));
        if (!target.contains(img))
            throw std::out_of_range("dyadic_scale: image out of target domain");
        out.add(img, w);
    }
    out.mark_integral(T.is_integral());
    return out;
}

Chain chain_from_lattice_path(const GridDomain& domain, const LatticePath& path) {
    Chain out(domain, 1);
    for (size_t s = 0; s + 1 < path.vertices.size(); ++s) {
        const IVec& a = path.vertices[s];
        const IVec& b = path.vertices[s + 1];
        int axis = -1, dir = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            int d = b[i] - a[i];
            if (d == 0) continue;
            if (std::abs(d) != 1 || axis != -1)
                throw std::invalid_argument("lattice path: consecutive vertices not adjacent");
            axis = static_cast<int>(i);
            dir = d;
        }
        if (axis == -1)
            throw std::invalid_argument("lattice path: repeated vertex");
        CellId edge;
        edge.base = (dir > 0) ? a : b;
        edge.axes = {axis};
        out.add(edge, dir);
    }
    return out;
}

namespace {

// Prism of a single cell under a unit shift along `axis` in direction
// dir = +/-1.  Degenerate (returns nothing) when the cell already spans
// the axis.
void add_unit_prism(Chain& S, const CellId& c, double w, int axis, int dir) {
    if (c.has_axis(axis)) return;
    CellId swept;
    swept.base = c.base;
    if (dir < 0) swept.base[axis] -= 1;
    int pos = 0;
    swept.axes.reserve(c.axes.size() + 1);
    for (int a : c.axes) {
        if (a < axis) ++pos;
        swept.axes.push_back(a);
    }
    swept.axes.insert(swept.axes.begin() + pos, axis);
    double sign = (pos % 2 == 0) ? 1.0 : -1.0;
    S.add(swept, dir * sign * w);
}

Chain prism_of(const Chain& T, int axis, int dir) {
    Chain S(T.domain(), T.dim() + 1);
    for (const auto& [c, w] : T.coeffs()) add_unit_prism(S, c, w, axis, dir);
    S.mark_integral(T.is_integral());
    return S;
}

}  // namespace

PrismFill prism_fill(const Chain& T, const IVec& v) {
    if (static_cast<int>(v.size()) != T.domain().n())
        throw std::invalid_argument("prism_fill: vector dimension mismatch");
    if (T.dim() + 1 > T.domain().n())
        throw std::invalid_argument("prism_fill: no room for a prism in top dimension");
    PrismFill out{Chain(T.domain(), T.dim() + 1), Chain(T.domain(), T.dim())};
    Chain cur = T;
    Chain cur_bdry = (T.dim() >= 1) ? boundary(T) : Chain(T.domain(), 0);
    bool track_bdry = T.dim() >= 1;
    for (int axis = 0; axis < T.domain().n(); ++axis) {
        int dir = (v[axis] > 0) ? 1 : -1;
        for (int s = 0; s < std::abs(v[axis]); ++s) {
            out.S += prism_of(cur, axis, dir);
            IVec step(v.size(), 0);
            step[axis] = dir;
            cur = translate(cur, step);
            if (track_bdry) {
                out.R += prism_of(cur_bdry, axis, dir);
                cur_bdry = translate(cur_bdry, step);
            }
        }
    }
    return out;
}

}  // namespace cch
