#include "cch/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cch {

ScalarField::ScalarField(IVec lo, IVec hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size() || lo_.empty())
        throw std::invalid_argument("ScalarField: bad box");
    size_t total = 1;
    stride_.assign(lo_.size(), 1);
    for (int i = static_cast<int>(lo_.size()) - 1; i >= 0; --i) {
        if (hi_[i] < lo_[i]) throw std::invalid_argument("ScalarField: hi < lo");
        stride_[i] = static_cast<int>(total);
        total *= static_cast<size_t>(hi_[i] - lo_[i] + 1);
    }
    values_.assign(total, 0.0);
}

size_t ScalarField::flat(const IVec& v) const {
    size_t idx = 0;
    for (size_t i = 0; i < lo_.size(); ++i) idx += static_cast<size_t>(v[i] - lo_[i]) * stride_[i];
    return idx;
}

bool ScalarField::contains_vertex(const IVec& v) const {
    if (v.size() != lo_.size()) return false;
    for (size_t i = 0; i < lo_.size(); ++i)
        if (v[i] < lo_[i] || v[i] > hi_[i]) return false;
    return true;
}

double ScalarField::at(const IVec& v) const {
    if (!contains_vertex(v)) throw std::out_of_range("ScalarField: vertex outside box");
    return values_[flat(v)];
}

void ScalarField::set(const IVec& v, double value) {
    if (!contains_vertex(v)) throw std::out_of_range("ScalarField: vertex outside box");
    values_[flat(v)] = value;
}

std::vector<IVec> ScalarField::vertices() const {
    std::vector<IVec> out;
    out.reserve(values_.size());
    IVec v = lo_;
    while (true) {
        out.push_back(v);
        int i = static_cast<int>(lo_.size()) - 1;
        for (; i >= 0; --i) {
            if (v[i] < hi_[i]) {
                ++v[i];
                break;
            }
            v[i] = lo_[i];
        }
        if (i < 0) break;
    }
    return out;
}

double ScalarField::interpolate(const std::vector<double>& p) const {
    const int n = static_cast<int>(lo_.size());
    IVec cell(n);
    std::vector<double> frac(n);
    for (int i = 0; i < n; ++i) {
        double f = std::floor(p[i]);
        int c = static_cast<int>(f);
        if (c >= hi_[i]) c = hi_[i] - 1;  // clamp to top cell
        if (c < lo_[i]) c = lo_[i];
        cell[i] = c;
        frac[i] = p[i] - c;
    }
    double acc = 0;
    const size_t corners = size_t{1} << n;
    for (size_t mask = 0; mask < corners; ++mask) {
        IVec v = cell;
        double wgt = 1;
        for (int i = 0; i < n; ++i) {
            if (mask & (size_t{1} << i)) {
                ++v[i];
                wgt *= frac[i];
            } else {
                wgt *= 1.0 - frac[i];
            }
        }
        if (wgt != 0.0) acc += wgt * at(v);
    }
    return acc;
}

ScalarField ScalarField::sample(const IVec& lo, const IVec& hi, double h,
                                const std::function<double(const std::vector<double>&)>& f) {
    ScalarField out(lo, hi);
    std::vector<double> p(lo.size());
    for (const auto& v : out.vertices()) {
        for (size_t i = 0; i < p.size(); ++i) p[i] = v[i] * h;
        out.set(v, f(p));
    }
    return out;
}

LipEstimate lip_field(const ScalarField& f, double h, const std::vector<double>& radii_in) {
    std::vector<double> radii = radii_in;
    if (radii.empty()) radii = {h, 2 * h, 4 * h};
    if (radii.empty()) throw std::invalid_argument("lip_field: empty radius schedule");
    for (double r : radii)
        if (r < h) throw std::invalid_argument("lip_field: radii must be >= h");
    std::sort(radii.begin(), radii.end());

    const int n = f.n();
    const double rmax = radii.back();
    const int reach = static_cast<int>(std::floor(rmax / h + 1e-9));

    // Offsets within the largest radius, grouped by evaluation order.
    std::vector<std::pair<IVec, double>> offsets;  // (offset, |offset| in lattice units)
    IVec off(n, -reach);
    while (true) {
        double d2 = 0;
        bool zero = true;
        for (int i = 0; i < n; ++i) {
            d2 += static_cast<double>(off[i]) * off[i];
            if (off[i] != 0) zero = false;
        }
        double d = std::sqrt(d2);
        if (!zero && d * h <= rmax + 1e-12) offsets.emplace_back(off, d);
        int i = n - 1;
        for (; i >= 0; --i) {
            if (off[i] < reach) {
                ++off[i];
                break;
            }
            off[i] = -reach;
        }
        if (i < 0) break;
    }

    LipEstimate out;
    out.radii = radii;
    out.lip = ScalarField(f.lo(), f.hi());
    out.Lip = ScalarField(f.lo(), f.hi());
    for (const auto& v : f.vertices()) {
        double fv = f.at(v);
        // steepest difference quotient |df| / |dy| within each radius
        std::vector<double> steep(radii.size(), 0.0);
        for (const auto& [o, dist] : offsets) {
            IVec y(n);
            for (int i = 0; i < n; ++i) y[i] = v[i] + o[i];
            if (!f.contains_vertex(y)) continue;
            double quot = std::abs(f.at(y) - fv) / (dist * h);
            double geo = dist * h;
            for (size_t k = 0; k < radii.size(); ++k)
                if (geo <= radii[k] + 1e-12) steep[k] = std::max(steep[k], quot);
        }
        // steep[] is nondecreasing in the radius, so lip reads the tightest
        // radius and Lip the widest
        out.lip.set(v, steep.front());
        out.Lip.set(v, steep.back());
    }
    return out;
}

}  // namespace cch
