#include "cch/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cch {

double CellId::volume(double h) const {
    return std::pow(h, static_cast<double>(dim()));
}

std::vector<double> CellId::barycenter(double h) const {
    std::vector<double> p(base.size());
    for (size_t i = 0; i < base.size(); ++i) p[i] = base[i] * h;
    for (int a : axes) p[a] += 0.5 * h;
    return p;
}

std::string CellId::str() const {
    std::ostringstream os;
    os << "cell(base=[";
    for (size_t i = 0; i < base.size(); ++i) os << (i ? "," : "") << base[i];
    os << "], axes=[";
    for (size_t i = 0; i < axes.size(); ++i) os << (i ? "," : "") << axes[i];
    os << "])";
    return os.str();
}

GridDomain::GridDomain(int n, double h, IVec lo, IVec hi)
    : n_(n), h_(h), lo_(std::move(lo)), hi_(std::move(hi)) {
    if (n < 1) throw std::invalid_argument("GridDomain: n must be >= 1");
    if (!(h > 0)) throw std::invalid_argument("GridDomain: spacing must be > 0");
    if (static_cast<int>(lo_.size()) != n || static_cast<int>(hi_.size()) != n)
        throw std::invalid_argument("GridDomain: lo/hi size mismatch");
    for (int i = 0; i < n; ++i)
        if (!(lo_[i] < hi_[i]))
            throw std::invalid_argument("GridDomain: lo < hi required componentwise");
}

bool GridDomain::contains(const CellId& c) const {
    if (static_cast<int>(c.base.size()) != n_) return false;
    int prev = -1;
    for (int a : c.axes) {
        if (a <= prev || a >= n_) return false;
        prev = a;
    }
    for (int i = 0; i < n_; ++i) {
        int top = c.has_axis(i) ? c.base[i] + 1 : c.base[i];
        if (c.base[i] < lo_[i] || top > hi_[i]) return false;
    }
    return true;
}

void GridDomain::require(const CellId& c) const {
    if (!contains(c))
        throw std::out_of_range("cell out of domain: " + c.str());
}

std::uint64_t GridDomain::cell_count(int m) const {
    if (m < 0 || m > n_) return 0;
    std::uint64_t total = 0;
    for (const auto& S : axis_subsets(n_, m)) {
        std::uint64_t prod = 1;
        size_t k = 0;
        for (int i = 0; i < n_; ++i) {
            std::uint64_t extent = static_cast<std::uint64_t>(hi_[i] - lo_[i]);
            bool in_S = (k < S.size() && S[k] == i);
            if (in_S) ++k;
            prod *= in_S ? extent : extent + 1;
        }
        total += prod;
    }
    return total;
}

std::vector<CellId> GridDomain::cells(int m) const {
    std::vector<CellId> out;
    if (m < 0 || m > n_) return out;
    for (const auto& S : axis_subsets(n_, m)) {
        IVec base = lo_;
        while (true) {
            out.push_back(CellId{base, S});
            int i = n_ - 1;
            for (; i >= 0; --i) {
                bool spans = false;
                for (int a : S)
                    if (a == i) spans = true;
                int top = spans ? hi_[i] - 1 : hi_[i];
                if (base[i] < top) {
                    ++base[i];
                    break;
                }
                base[i] = lo_[i];
            }
            if (i < 0) break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<IVec> axis_subsets(int n, int m) {
    std::vector<IVec> out;
    if (m < 0 || m > n) return out;
    IVec cur(m);
    for (int i = 0; i < m; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int i = m - 1;
        while (i >= 0 && cur[i] == n - m + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < m; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

}  // namespace cch
