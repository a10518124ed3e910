#include "cch/density.hpp"

#include <cmath>

namespace cch {

double Density::at(const IVec& base) const {
    auto it = values_.find(base);
    return it == values_.end() ? 0.0 : it->second;
}

void Density::set(const IVec& base, double v) {
    if (v < 0) throw std::invalid_argument("Density: negative value");
    if (v == 0.0)
        values_.erase(base);
    else
        values_[base] = v;
}

void Density::add(const IVec& base, double v) {
    double& slot = values_[base];
    slot += v;
    if (slot < 0) throw std::invalid_argument("Density: negative value");
    if (slot == 0.0) values_.erase(base);
}

Density& Density::operator+=(const Density& other) {
    for (const auto& [q, v] : other.values_) add(q, v);
    return *this;
}

Density& Density::operator*=(double s) {
    if (s < 0) throw std::invalid_argument("Density: negative scale");
    if (s == 0.0) {
        values_.clear();
        return *this;
    }
    for (auto& [q, v] : values_) v *= s;
    return *this;
}

bool Density::supports_disjoint(const Density& other) const {
    const auto& a = values_;
    const auto& b = other.values_;
    const auto& small = a.size() < b.size() ? a : b;
    const auto& big = a.size() < b.size() ? b : a;
    for (const auto& [q, v] : small)
        if (big.count(q)) return false;
    return true;
}

MeasureWeights::MeasureWeights(GridDomain domain) : domain_(std::move(domain)) {
    uniform_ = std::pow(domain_.spacing(), domain_.n());
}

MeasureWeights::MeasureWeights(GridDomain domain, double uniform)
    : domain_(std::move(domain)), uniform_(uniform) {
    if (!(uniform > 0)) throw std::invalid_argument("MeasureWeights: weights must be > 0");
}

double MeasureWeights::at(const IVec& base) const {
    auto it = overrides_.find(base);
    return it == overrides_.end() ? uniform_ : it->second;
}

void MeasureWeights::set(const IVec& base, double w) {
    if (!(w > 0)) throw std::invalid_argument("MeasureWeights: weights must be > 0");
    overrides_[base] = w;
}

double MeasureWeights::ball_growth_constant(double Q, const std::vector<double>& radii) const {
    // Samples centers at every n-cell barycenter of a coarsened sweep.
    const int n = domain_.n();
    const double h = domain_.spacing();
    double worst = 0;
    IVec all_axes(n);
    for (int i = 0; i < n; ++i) all_axes[i] = i;
    auto cells = domain_.cells(n);
    for (double r : radii) {
        for (size_t ci = 0; ci < cells.size(); ci += std::max<size_t>(1, cells.size() / 512)) {
            auto center = cells[ci].barycenter(h);
            double total = 0;
            for (const auto& q : cells) {
                auto b = q.barycenter(h);
                double d2 = 0;
                for (int i = 0; i < n; ++i) d2 += (b[i] - center[i]) * (b[i] - center[i]);
                if (d2 <= r * r) total += at(q.base);
            }
            worst = std::max(worst, total / std::pow(r, Q));
        }
    }
    return worst;
}

std::vector<IVec> incident_top_cells(const GridDomain& domain, const CellId& c) {
    const int n = domain.n();
    std::vector<int> free_axes;
    for (int i = 0; i < n; ++i)
        if (!c.has_axis(i)) free_axes.push_back(i);
    std::vector<IVec> out;
    const size_t combos = size_t{1} << free_axes.size();
    IVec all_axes(n);
    for (int i = 0; i < n; ++i) all_axes[i] = i;
    for (size_t mask = 0; mask < combos; ++mask) {
        IVec base = c.base;
        for (size_t j = 0; j < free_axes.size(); ++j)
            if (mask & (size_t{1} << j)) base[free_axes[j]] -= 1;
        if (domain.contains(CellId{base, all_axes})) out.push_back(std::move(base));
    }
    return out;
}

Density pairing_weights(const Chain& T) {
    Density sigma(T.domain());
    const double hm = std::pow(T.domain().spacing(), T.dim());
    for (const auto& [c, w] : T.coeffs()) {
        auto tops = incident_top_cells(T.domain(), c);
        if (tops.empty()) continue;
        double share = std::abs(w) * hm / static_cast<double>(tops.size());
        for (const auto& q : tops) sigma.add(q, share);
    }
    return sigma;
}

double line_integral(const Density& f, const Chain& T) {
    if (!(f.domain() == T.domain()))
        throw std::invalid_argument("line_integral: domain mismatch");
    const double hm = std::pow(T.domain().spacing(), T.dim());
    double total = 0;
    for (const auto& [c, w] : T.coeffs()) {
        auto tops = incident_top_cells(T.domain(), c);
        if (tops.empty()) continue;
        double avg = 0;
        for (const auto& q : tops) avg += f.at(q);
        avg /= static_cast<double>(tops.size());
        total += std::abs(w) * hm * avg;
    }
    return total;
}

double lp_energy(const Density& f, double p, const MeasureWeights& mu) {
    double s = 0;
    for (const auto& [q, v] : f.values()) s += std::pow(v, p) * mu.at(q);
    return s;
}

double lp_norm(const Density& f, double p, const MeasureWeights& mu) {
    return std::pow(lp_energy(f, p, mu), 1.0 / p);
}

double lp_norm_on_ball(const Density& f, double p, const MeasureWeights& mu,
                       const std::vector<double>& center, double r) {
    const int n = f.domain().n();
    const double h = f.domain().spacing();
    double s = 0;
    for (const auto& [q, v] : f.values()) {
        double d2 = 0;
        for (int i = 0; i < n; ++i) {
            double b = (q[i] + 0.5) * h;
            d2 += (b - center[i]) * (b - center[i]);
        }
        if (d2 <= r * r) s += std::pow(v, p) * mu.at(q);
    }
    return std::pow(s, 1.0 / p);
}

Density density_from_vertices(const GridDomain& domain,
                              const std::function<double(const IVec&)>& vertex_value,
                              const std::pair<IVec, IVec>& box, CornerRule rule) {
    const int n = domain.n();
    Density out(domain);
    IVec all_axes(n);
    for (int i = 0; i < n; ++i) all_axes[i] = i;
    IVec base = box.first;
    while (true) {
        CellId cell{base, all_axes};
        if (domain.contains(cell)) {
            double acc = (rule == CornerRule::max) ? 0.0 : 0.0;
            const size_t corners = size_t{1} << n;
            for (size_t mask = 0; mask < corners; ++mask) {
                IVec v = base;
                for (int i = 0; i < n; ++i)
                    if (mask & (size_t{1} << i)) ++v[i];
                double val = vertex_value(v);
                if (rule == CornerRule::max)
                    acc = std::max(acc, val);
                else
                    acc += val / static_cast<double>(corners);
            }
            if (acc != 0.0) out.set(base, acc);
        }
        int i = n - 1;
        for (; i >= 0; --i) {
            if (base[i] < box.second[i] - 1) {
                ++base[i];
                break;
            }
            base[i] = box.first[i];
        }
        if (i < 0) break;
    }
    return out;
}

}  // namespace cch
