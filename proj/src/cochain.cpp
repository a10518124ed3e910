#include "cch/cochain.hpp"

#include <cmath>
#include <limits>

namespace cch {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double ExtendedReal::value_or_inf() const { return finite_ ? value_ : kInf; }
double ExtendedReal::abs_or_inf() const { return finite_ ? std::abs(value_) : kInf; }

Cochain::Cochain(Kind kind, int dim, bool linear,
                 std::function<ExtendedReal(const Chain&)> eval, std::string label)
    : kind_(kind), dim_(dim), linear_(linear), eval_(std::move(eval)),
      label_(std::move(label)) {}

ExtendedReal Cochain::operator()(const Chain& T) const {
    if (T.dim() != dim_)
        throw std::invalid_argument("Cochain: chain dimension mismatch");
    if (T.empty()) return ExtendedReal(0.0);
    return eval_(T);
}

Cochain form_cochain(const DiscreteForm& w) {
    auto wp = std::make_shared<DiscreteForm>(w);
    return Cochain(Cochain::Kind::form, w.degree(), true,
                   [wp](const Chain& T) { return ExtendedReal(eval_form(*wp, T)); },
                   "form");
}

namespace {

double det_small(std::vector<double>& a, int m) {
    // Gaussian elimination with partial pivoting; m <= 4 in practice.
    double det = 1;
    for (int k = 0; k < m; ++k) {
        int piv = k;
        for (int r = k + 1; r < m; ++r)
            if (std::abs(a[r * m + k]) > std::abs(a[piv * m + k])) piv = r;
        if (a[piv * m + k] == 0.0) return 0.0;
        if (piv != k) {
            for (int c = 0; c < m; ++c) std::swap(a[piv * m + c], a[k * m + c]);
            det = -det;
        }
        det *= a[k * m + k];
        for (int r = k + 1; r < m; ++r) {
            double f = a[r * m + k] / a[k * m + k];
            for (int c = k; c < m; ++c) a[r * m + c] -= f * a[k * m + c];
        }
    }
    return det;
}

}  // namespace

Cochain tuple_cochain(const ScalarField& f, const std::vector<ScalarField>& pis,
                      const GridDomain& domain) {
    const int m = static_cast<int>(pis.size());
    auto fp = std::make_shared<ScalarField>(f);
    auto pp = std::make_shared<std::vector<ScalarField>>(pis);
    const double h = domain.spacing();
    auto eval = [fp, pp, m, h](const Chain& T) -> ExtendedReal {
        double total = 0;
        std::vector<double> D(static_cast<size_t>(m) * m);
        for (const auto& [c, w] : T.coeffs()) {
            // Forward differences of each pi along the cell's axes.
            for (int j = 0; j < m; ++j) {
                const ScalarField& pi = (*pp)[j];
                double base_val = pi.at(c.base);
                for (int k = 0; k < m; ++k) {
                    IVec stepv = c.base;
                    stepv[c.axes[k]] += 1;
                    D[j * m + k] = (pi.at(stepv) - base_val) / h;
                }
            }
            double det = (m == 0) ? 1.0 : det_small(D, m);
            std::vector<double> bary(c.base.size());
            for (size_t i = 0; i < bary.size(); ++i) bary[i] = c.base[i];
            for (int a : c.axes) bary[a] += 0.5;
            double fval = fp->interpolate(bary);
            total += w * fval * det * std::pow(h, m);
        }
        return ExtendedReal(total);
    };
    return Cochain(Cochain::Kind::tuple, m, true, eval, "tuple");
}

Cochain zero_cochain(const ScalarField& u) {
    auto up = std::make_shared<ScalarField>(u);
    auto eval = [up](const Chain& T) -> ExtendedReal {
        double total = 0;
        for (const auto& [c, w] : T.coeffs()) {
            double v = up->at(c.base);
            if (!std::isfinite(v)) return ExtendedReal::infinity();
            total += w * v;
        }
        return ExtendedReal(total);
    };
    return Cochain(Cochain::Kind::function, 0, true, eval, "0-cochain");
}

Cochain add_cochains(const Cochain& a, const Cochain& b) {
    if (!a.linear() || !b.linear())
        throw std::invalid_argument("add_cochains: both summands must be linear");
    if (a.dim() != b.dim())
        throw std::invalid_argument("add_cochains: dimension mismatch");
    auto ac = std::make_shared<Cochain>(a);
    auto bc = std::make_shared<Cochain>(b);
    auto eval = [ac, bc](const Chain& T) { return (*ac)(T) + (*bc)(T); };
    return Cochain(Cochain::Kind::sum, a.dim(), true, eval, "sum");
}

Cochain negate_cochain(const Cochain& a) {
    auto ac = std::make_shared<Cochain>(a);
    auto eval = [ac](const Chain& T) -> ExtendedReal {
        ExtendedReal v = (*ac)(T);
        if (!v.finite()) return v;
        return ExtendedReal(-v.value());
    };
    return Cochain(a.kind(), a.dim(), a.linear(), eval, "neg");
}

CheckReport check_upper_norm(const Cochain& w, const Density& hD,
                             const std::vector<Chain>& family, double tol) {
    CheckReport rep;
    rep.min_margin = kInf;
    for (size_t i = 0; i < family.size(); ++i) {
        CheckRow row;
        row.member = static_cast<int>(i);
        row.lhs = w(family[i]).abs_or_inf();
        row.rhs = line_integral(hD, family[i]);
        row.margin = row.rhs - row.lhs;
        row.pass = row.margin >= -tol;
        rep.min_margin = std::min(rep.min_margin, row.margin);
        rep.all_pass = rep.all_pass && row.pass;
        rep.rows.push_back(row);
    }
    if (family.empty()) rep.min_margin = 0;
    return rep;
}

CheckReport check_upper_gradient(const Cochain& w, const Density& gD,
                                 const std::vector<std::pair<Chain, Chain>>& pairs,
                                 double tol) {
    CheckReport rep;
    rep.min_margin = kInf;
    for (size_t i = 0; i < pairs.size(); ++i) {
        const auto& [T, S] = pairs[i];
        Chain bd = boundary(S);
        if (!(bd == T))
            throw std::invalid_argument("check_upper_gradient: boundary(S) != T for pair " +
                                        std::to_string(i));
        CheckRow row;
        row.member = static_cast<int>(i);
        row.lhs = w(T).abs_or_inf();
        row.rhs = line_integral(gD, S);
        row.margin = row.rhs - row.lhs;
        row.pass = row.margin >= -tol;
        rep.min_margin = std::min(rep.min_margin, row.margin);
        rep.all_pass = rep.all_pass && row.pass;
        rep.rows.push_back(row);
    }
    if (pairs.empty()) rep.min_margin = 0;
    return rep;
}

double sobolev_norm(const Cochain& w, const std::vector<Density>& h_candidates,
                    const std::vector<Density>& g_candidates, double q, double p,
                    const std::vector<Chain>& family,
                    const std::vector<std::pair<Chain, Chain>>& pairs,
                    const MeasureWeights& mu, double tol) {
    if (h_candidates.empty() || g_candidates.empty())
        throw std::invalid_argument("sobolev_norm: candidate lists must be nonempty");
    double best_h = kInf, best_g = kInf;
    for (const auto& hD : h_candidates)
        if (check_upper_norm(w, hD, family, tol).all_pass)
            best_h = std::min(best_h, lp_norm(hD, q, mu));
    for (const auto& gD : g_candidates)
        if (check_upper_gradient(w, gD, pairs, tol).all_pass)
            best_g = std::min(best_g, lp_norm(gD, p, mu));
    return best_h + best_g;
}

ScalarField translate_field(const Cochain& w, const Chain& T,
                            const std::pair<IVec, IVec>& region) {
    ScalarField u(region.first, region.second);
    for (const auto& v : u.vertices()) u.set(v, w(translate(T, v)).abs_or_inf());
    return u;
}

double average_translate(const Cochain& w, const Chain& T, double r) {
    const GridDomain& D = T.domain();
    const double h = D.spacing();
    if (r < h) throw std::invalid_argument("average_translate: r must be >= h");
    const int reach = static_cast<int>(std::floor(r / h + 1e-9));
    const int n = D.n();
    double total = 0;
    long count = 0;
    IVec v(n, -reach);
    while (true) {
        double d2 = 0;
        for (int i = 0; i < n; ++i) d2 += static_cast<double>(v[i]) * v[i];
        if (d2 * h * h <= r * r + 1e-12) {
            total += w(translate(T, v)).abs_or_inf();
            ++count;
        }
        int i = n - 1;
        for (; i >= 0; --i) {
            if (v[i] < reach) {
                ++v[i];
                break;
            }
            v[i] = -reach;
        }
        if (i < 0) break;
    }
    if (count == 0) throw std::invalid_argument("average_translate: empty lattice ball");
    return total / static_cast<double>(count);
}

}  // namespace cch
