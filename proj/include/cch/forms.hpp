// Discrete differential forms: one real coefficient per m-cell, paired
// with chains by  eval(w, T) = sum_c T_c * w_c * h^m.  The coboundary is
// defined through the cubical boundary, so the Stokes identity
// eval(d w, S) = eval(w, boundary(S)) holds exactly.

#pragma once

#include "cch/density.hpp"

namespace cch {

class DiscreteForm {
public:
    DiscreteForm() = default;
    DiscreteForm(GridDomain domain, int degree);

    const GridDomain& domain() const { return domain_; }
    int degree() const { return degree_; }
    const std::map<CellId, double>& coeffs() const { return coeffs_; }

    double coeff(const CellId& c) const;
    void set(const CellId& c, double v);
    void add(const CellId& c, double v);

    DiscreteForm& operator+=(const DiscreteForm& other);
    DiscreteForm& operator*=(double s);

    // Populate degree-m coefficients over a lattice box by sampling a
    // function of (barycenter, axes).
    static DiscreteForm sample(const GridDomain& domain, int degree,
                               const std::pair<IVec, IVec>& box,
                               const std::function<double(const std::vector<double>&,
                                                          const IVec&)>& coefficient);

private:
    GridDomain domain_;
    int degree_ = 0;
    std::map<CellId, double> coeffs_;
};

double eval_form(const DiscreteForm& w, const Chain& T);

// Cubical coboundary: (dw)(e) = <w, boundary(e)> / h.
DiscreteForm exterior_derivative(const DiscreteForm& w);

// Lift |w| to a density on n-cells: at each n-cell, the Euclidean norm
// over axis components of the largest face coefficient per component.
// With the incident-average pairing this makes |eval(w,T)| <= int |w| d||T||
// hold cellwise, so sqrt(C(n,m)) |w| matches the coefficient-norm bound
// with room to spare.
Density form_coefficient_density(const DiscreteForm& w);

// sqrt(C(n,m)) recorded alongside the lift.
double form_norm_constant(int n, int m);

// C1 |w| and C2 |dw|.
Density upper_norm_density(const DiscreteForm& w);
Density upper_gradient_density(const DiscreteForm& w);

}  // namespace cch
