// Cochains: extended-real valued, sublinear functions on chains with
// omega(0) = 0.  Evaluation returns a tagged finite/infinite value and
// sums propagate infinity (finite + finite adds; anything else is +inf).

#pragma once

#include <functional>
#include <memory>
#include <string>

#include "cch/forms.hpp"
#include "cch/scalar_field.hpp"

namespace cch {

class ExtendedReal {
public:
    ExtendedReal() = default;
    ExtendedReal(double v) : value_(v), finite_(true) {}  // NOLINT(implicit)
    static ExtendedReal infinity() { return ExtendedReal(0.0, false); }

    bool finite() const { return finite_; }
    double value() const {
        if (!finite_) throw std::domain_error("ExtendedReal: value of infinity");
        return value_;
    }
    double value_or_inf() const;
    double abs_or_inf() const;

    friend ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) {
        if (!a.finite_ || !b.finite_) return infinity();
        return ExtendedReal(a.value_ + b.value_);
    }

private:
    ExtendedReal(double v, bool f) : value_(v), finite_(f) {}
    double value_ = 0;
    bool finite_ = true;
};

class Cochain {
public:
    enum class Kind { form, tuple, function, sum, custom };

    Cochain() = default;
    Cochain(Kind kind, int dim, bool linear,
            std::function<ExtendedReal(const Chain&)> eval, std::string label = {});

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool linear() const { return linear_; }
    const std::string& label() const { return label_; }

    ExtendedReal operator()(const Chain& T) const;

private:
    Kind kind_ = Kind::custom;
    int dim_ = 0;
    bool linear_ = false;
    std::function<ExtendedReal(const Chain&)> eval_;
    std::string label_;
};

// Linear cochain from a discrete form.
Cochain form_cochain(const DiscreteForm& w);

// omega(T) = T(f, pi_1..pi_m): per m-cell, interpolated f at the barycenter
// times the determinant of forward differences of the pi's along the
// cell's axes, times coefficient and h^m.  Multilinear and alternating in
// the pi's; exact for affine data.
Cochain tuple_cochain(const ScalarField& f, const std::vector<ScalarField>& pis,
                      const GridDomain& domain);

// omega(sum theta_i [x_i]) = sum theta_i u(x_i); infinite when the chain
// touches a vertex where |u| = inf.
Cochain zero_cochain(const ScalarField& u);

// Sum with infinity propagation; both inputs must be linear.
Cochain add_cochains(const Cochain& a, const Cochain& b);
Cochain negate_cochain(const Cochain& a);

// Verification reports.
struct CheckRow {
    int member = 0;
    double lhs = 0;     // |omega(T)|
    double rhs = 0;     // int h d||T||  or  int g d||S||
    double margin = 0;  // rhs - lhs
    bool pass = false;
};
struct CheckReport {
    std::vector<CheckRow> rows;
    bool all_pass = true;
    double min_margin = 0;
};

CheckReport check_upper_norm(const Cochain& w, const Density& hD,
                             const std::vector<Chain>& family, double tol = 1e-9);

// Pairs (T, S) must satisfy boundary(S) = T exactly.
CheckReport check_upper_gradient(const Cochain& w, const Density& gD,
                                 const std::vector<std::pair<Chain, Chain>>& pairs,
                                 double tol = 1e-9);

// min over candidate pairs passing both checks of |h|_q + |g|_p;
// +inf when nothing passes.  An upper bound for the true infimum.
double sobolev_norm(const Cochain& w, const std::vector<Density>& h_candidates,
                    const std::vector<Density>& g_candidates, double q, double p,
                    const std::vector<Chain>& family,
                    const std::vector<std::pair<Chain, Chain>>& pairs,
                    const MeasureWeights& mu, double tol = 1e-9);

// u(x) = |omega(translate(T, x))| on the lattice box `region` of shift
// vectors.
ScalarField translate_field(const Cochain& w, const Chain& T,
                            const std::pair<IVec, IVec>& region);

// Mean of |omega(translate(T, x))| over lattice vectors with |x| h <= r.
double average_translate(const Cochain& w, const Chain& T, double r);

}  // namespace cch
