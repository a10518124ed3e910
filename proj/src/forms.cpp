#include "cch/forms.hpp"

#include <cmath>

namespace cch {

DiscreteForm::DiscreteForm(GridDomain domain, int degree)
    : domain_(std::move(domain)), degree_(degree) {
    if (degree < 0 || degree > domain_.n())
        throw std::invalid_argument("DiscreteForm: degree out of range");
}

double DiscreteForm::coeff(const CellId& c) const {
    auto it = coeffs_.find(c);
    return it == coeffs_.end() ? 0.0 : it->second;
}

void DiscreteForm::set(const CellId& c, double v) {
    if (c.dim() != degree_)
        throw std::invalid_argument("DiscreteForm: cell degree mismatch");
    domain_.require(c);
    if (v == 0.0)
        coeffs_.erase(c);
    else
        coeffs_[c] = v;
}

void DiscreteForm::add(const CellId& c, double v) {
    if (v == 0.0) return;
    if (c.dim() != degree_)
        throw std::invalid_argument("DiscreteForm: cell degree mismatch");
    domain_.require(c);
    double& slot = coeffs_[c];
    slot += v;
    if (slot == 0.0) coeffs_.erase(c);
}

DiscreteForm& DiscreteForm::operator+=(const DiscreteForm& other) {
    if (degree_ != other.degree_ || !(domain_ == other.domain_))
        throw std::invalid_argument("DiscreteForm: mismatch in addition");
    for (const auto& [c, v] : other.coeffs_) add(c, v);
    return *this;
}

DiscreteForm& DiscreteForm::operator*=(double s) {
    if (s == 0.0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [c, v] : coeffs_) v *= s;
    return *this;
}

DiscreteForm DiscreteForm::sample(
    const GridDomain& domain, int degree, const std::pair<IVec, IVec>& box,
    const std::function<double(const std::vector<double>&, const IVec&)>& coefficient) {
    DiscreteForm w(domain, degree);
    GridDomain sub(domain.n(), domain.spacing(), box.first, box.second);
    for (const auto& c : sub.cells(degree)) {
        if (!domain.contains(c)) continue;
        double v = coefficient(c.barycenter(domain.spacing()), c.axes);
        if (v != 0.0) w.set(c, v);
    }
    return w;
}

double eval_form(const DiscreteForm& w, const Chain& T) {
    if (w.degree() != T.dim())
        throw std::invalid_argument("eval_form: degree mismatch");
    if (!(w.domain() == T.domain()))
        throw std::invalid_argument("eval_form: domain mismatch");
    const double hm = std::pow(T.domain().spacing(), T.dim());
    double s = 0;
    const bool chain_smaller = T.coeffs().size() < w.coeffs().size();
    if (chain_smaller) {
        for (const auto& [c, t] : T.coeffs()) s += t * w.coeff(c);
    } else {
        for (const auto& [c, v] : w.coeffs()) s += v * T.coeff(c);
    }
    return s * hm;
}

DiscreteForm exterior_derivative(const DiscreteForm& w) {
    const int n = w.domain().n();
    if (w.degree() >= n)
        throw std::invalid_argument("exterior_derivative: form already top degree");
    DiscreteForm dw(w.domain(), w.degree() + 1);
    const double inv_h = 1.0 / w.domain().spacing();
    // Candidate (m+1)-cells: those with a support cell of w among their faces.
    std::map<CellId, char> candidates;
    for (const auto& [c, v] : w.coeffs()) {
        (void)v;
        for (int a = 0; a < n; ++a) {
            if (c.has_axis(a)) continue;
            CellId up;
            up.axes.reserve(c.axes.size() + 1);
            int pos = 0;
            for (int x : c.axes) {
                if (x < a) ++pos;
                up.axes.push_back(x);
            }
            up.axes.insert(up.axes.begin() + pos, a);
            up.base = c.base;
            if (w.domain().contains(up)) candidates[up] = 1;
            up.base[a] -= 1;
            if (w.domain().contains(up)) candidates[up] = 1;
        }
    }
    for (const auto& [e, tag] : candidates) {
        (void)tag;
        double v = 0;
        for (const auto& [face, sign] : cell_boundary(e)) v += sign * w.coeff(face);
        if (v != 0.0) dw.set(e, v * inv_h);
    }
    return dw;
}

double form_norm_constant(int n, int m) {
    double binom = 1;
    for (int i = 0; i < m; ++i) binom = binom * (n - i) / (i + 1);
    return std::sqrt(binom);
}

Density form_coefficient_density(const DiscreteForm& w) {
    const GridDomain& D = w.domain();
    const int n = D.n();
    IVec all_axes(n);
    for (int i = 0; i < n; ++i) all_axes[i] = i;
    // Per n-cell, per axis-subset: max |coefficient| over the faces of the
    // cell carrying that subset; then the Euclidean norm over subsets.
    std::map<IVec, std::map<IVec, double>> comp;
    for (const auto& [c, v] : w.coeffs()) {
        for (const auto& q : incident_top_cells(D, c)) {
            double& slot = comp[q][c.axes];
            slot = std::max(slot, std::abs(v));
        }
    }
    Density out(D);
    for (const auto& [q, comps] : comp) {
        double s = 0;
        for (const auto& [axes, v] : comps) s += v * v;
        out.set(q, std::sqrt(s));
    }
    return out;
}

Density upper_norm_density(const DiscreteForm& w) {
    Density d = form_coefficient_density(w);
    d *= form_norm_constant(w.domain().n(), w.degree());
    return d;
}

Density upper_gradient_density(const DiscreteForm& w) {
    Density d = form_coefficient_density(exterior_derivative(w));
    d *= form_norm_constant(w.domain().n(), w.degree() + 1);
    return d;
}

}  // namespace cch
