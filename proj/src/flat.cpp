#include "cch/flat.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace cch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sub-box of the domain covering the support of T (or a caller box),
// used as the working complex for the LP.
GridDomain working_box(const Chain& T,
                       const std::optional<std::pair<IVec, IVec>>& region) {
    const GridDomain& D = T.domain();
    if (region) return GridDomain(D.n(), D.spacing(), region->first, region->second);
    auto box = T.support_box();
    if (!box) return GridDomain(D.n(), D.spacing(), D.lo(), D.hi());
    return GridDomain(D.n(), D.spacing(), box->first, box->second);
}

struct CellIndex {
    std::vector<CellId> cells;
    std::map<CellId, int> index;
    explicit CellIndex(std::vector<CellId> cs) : cells(std::move(cs)) {
        for (size_t i = 0; i < cells.size(); ++i) index[cells[i]] = static_cast<int>(i);
    }
};

// Columns of the boundary operator from (m+1)-cells to m-cells.
std::vector<std::vector<std::pair<int, double>>> boundary_columns(
    const CellIndex& fillers, const CellIndex& faces) {
    std::vector<std::vector<std::pair<int, double>>> cols(fillers.cells.size());
    for (size_t j = 0; j < fillers.cells.size(); ++j) {
        for (const auto& [face, sign] : cell_boundary(fillers.cells[j])) {
            auto it = faces.index.find(face);
            if (it == faces.index.end())
                throw std::logic_error("boundary face escaped the working box");
            cols[j].emplace_back(it->second, static_cast<double>(sign));
        }
    }
    return cols;
}

double incident_average(const Density& f, const GridDomain& domain, const CellId& c) {
    auto tops = incident_top_cells(domain, c);
    if (tops.empty()) return 0.0;
    double s = 0;
    for (const auto& q : tops) s += f.at(q);
    return s / static_cast<double>(tops.size());
}

LpSolution run_lp(const LpProblem& prob, double tol) {
    LpOptions opts;
    opts.tol = tol;
    LpSolution sol = solve_lp(prob, opts);
    if (sol.status == LpStatus::iteration_limit)
        throw SolverLimitError("flat LP: iteration cap exceeded", sol.objective);
    if (sol.status == LpStatus::unbounded)
        throw std::runtime_error("flat LP: unbounded (nonnegative objective expected)");
    return sol;
}

}  // namespace

bool is_fillable(const Chain& T) {
    if (T.dim() > T.domain().n() - 1)
        throw std::invalid_argument("is_fillable: dimension must be <= n-1");
    if (T.empty()) return true;
    if (T.dim() == 0) {
        double total = 0, scale = 0;
        for (const auto& [c, w] : T.coeffs()) {
            total += w;
            scale += std::abs(w);
        }
        return std::abs(total) <= 1e-12 * scale;
    }
    Chain bd = boundary(T);
    return bd.mass() <= 1e-10 * (1.0 + T.mass());
}

FillResult fill_volume(const Chain& T, double tol) {
    if (T.dim() > T.domain().n() - 1)
        throw std::invalid_argument("fill_volume: dimension must be <= n-1");
    FillResult out;
    if (T.empty()) {
        out.S = Chain(T.domain(), T.dim() + 1);
        return out;
    }
    if (!is_fillable(T)) {
        out.value = kInf;
        out.feasible = false;
        return out;
    }
    GridDomain box = working_box(T, std::nullopt);
    CellIndex faces(box.cells(T.dim()));
    CellIndex fillers(box.cells(T.dim() + 1));
    auto cols = boundary_columns(fillers, faces);

    LpProblem prob;
    prob.A.rows = static_cast<int>(faces.cells.size());
    prob.b.assign(faces.cells.size(), 0.0);
    const double h = T.domain().spacing();
    const double cost = std::pow(h, T.dim() + 1);
    for (const auto& col : cols) {
        prob.A.add_column(col);
        prob.c.push_back(cost);
        auto neg = col;
        for (auto& e : neg) e.second = -e.second;
        prob.A.add_column(neg);
        prob.c.push_back(cost);
    }
    // Shift bases so the chain's cells hit the working box indexing.
    for (const auto& [c, w] : T.coeffs()) {
        auto it = faces.index.find(c);
        if (it == faces.index.end()) throw std::logic_error("support cell outside box");
        prob.b[it->second] = w;
    }

    LpSolution sol = run_lp(prob, tol);
    if (sol.status == LpStatus::infeasible) {
        out.value = kInf;
        out.feasible = false;
        return out;
    }
    out.value = sol.objective;
    out.duality_gap = sol.duality_gap;
    out.lp_iterations = sol.iterations;
    Chain S(T.domain(), T.dim() + 1);
    for (size_t j = 0; j < fillers.cells.size(); ++j) {
        double v = sol.x[2 * j] - sol.x[2 * j + 1];
        if (v != 0.0) S.add(fillers.cells[j], v);
    }
    Chain diff = boundary(S) - T;
    out.residual = diff.coeff_inf_norm();
    out.S = std::move(S);
    return out;
}

namespace {

FlatDecomposition flat_norm_impl(const Chain& T, const Density* hD, const Density* gD,
                                 double tol,
                                 const std::optional<std::pair<IVec, IVec>>& region) {
    if (T.dim() > T.domain().n() - 1)
        throw std::invalid_argument("flat_norm: dimension must be <= n-1");
    FlatDecomposition out;
    out.R = Chain(T.domain(), T.dim());
    out.V = Chain(T.domain(), T.dim() + 1);
    if (T.empty()) return out;

    GridDomain box = working_box(T, region);
    CellIndex faces(box.cells(T.dim()));
    CellIndex fillers(box.cells(T.dim() + 1));
    auto cols = boundary_columns(fillers, faces);

    const double h = T.domain().spacing();
    const double hm = std::pow(h, T.dim());
    const double hm1 = std::pow(h, T.dim() + 1);

    LpProblem prob;
    prob.A.rows = static_cast<int>(faces.cells.size());
    prob.b.assign(faces.cells.size(), 0.0);
    // R variables first (split), then V variables (split).
    for (size_t i = 0; i < faces.cells.size(); ++i) {
        double w = hm * (hD ? incident_average(*hD, T.domain(), faces.cells[i]) : 1.0);
        prob.A.add_column({{static_cast<int>(i), 1.0}});
        prob.c.push_back(w);
        prob.A.add_column({{static_cast<int>(i), -1.0}});
        prob.c.push_back(w);
    }
    for (size_t j = 0; j < fillers.cells.size(); ++j) {
        double w = hm1 * (gD ? incident_average(*gD, T.domain(), fillers.cells[j]) : 1.0);
        prob.A.add_column(cols[j]);
        prob.c.push_back(w);
        auto neg = cols[j];
        for (auto& e : neg) e.second = -e.second;
        prob.A.add_column(neg);
        prob.c.push_back(w);
    }
    for (const auto& [c, w] : T.coeffs()) {
        auto it = faces.index.find(c);
        if (it == faces.index.end()) throw std::logic_error("support cell outside box");
        prob.b[it->second] = w;
    }

    LpSolution sol = run_lp(prob, tol);
    if (sol.status == LpStatus::infeasible)
        throw std::logic_error("flat_norm: LP cannot be infeasible (R = T works)");
    out.value = sol.objective;
    out.duality_gap = sol.duality_gap;
    out.lp_iterations = sol.iterations;
    const size_t nf = faces.cells.size();
    for (size_t i = 0; i < nf; ++i) {
        double v = sol.x[2 * i] - sol.x[2 * i + 1];
        if (v != 0.0) out.R.add(faces.cells[i], v);
    }
    for (size_t j = 0; j < fillers.cells.size(); ++j) {
        double v = sol.x[2 * nf + 2 * j] - sol.x[2 * nf + 2 * j + 1];
        if (v != 0.0) out.V.add(fillers.cells[j], v);
    }
    Chain diff = T - out.R - boundary(out.V);
    out.residual = diff.coeff_inf_norm();
    return out;
}

}  // namespace

FlatDecomposition flat_norm(const Chain& T, double tol) {
    return flat_norm_impl(T, nullptr, nullptr, tol, std::nullopt);
}

FlatDecomposition weighted_flat_norm(const Chain& T, const Density& hD, const Density& gD,
                                     double tol,
                                     const std::optional<std::pair<IVec, IVec>>& region) {
    std::optional<std::pair<IVec, IVec>> box = region;
    if (!box) box = std::make_pair(T.domain().lo(), T.domain().hi());
    return flat_norm_impl(T, &hD, &gD, tol, box);
}

FillvolFlatReport fillvol_equals_flat_check(const Chain& T, double tol) {
    if (T.dim() >= 1) {
        Chain bd = boundary(T);
        if (bd.mass() > 1e-10 * (1.0 + T.mass()))
            throw std::invalid_argument("fillvol_equals_flat_check: input must be a cycle");
    }
    FillvolFlatReport rep;
    FillResult fv = fill_volume(T, tol);
    FlatDecomposition fn = flat_norm(T, tol);
    rep.fillvol = fv.value;
    rep.flatnorm = fn.value;
    rep.hypothesis_met = fv.feasible && fv.value <= T.mass() + tol;
    rep.difference = fv.feasible ? std::abs(fv.value - fn.value) : kInf;
    rep.equal_within_tol =
        rep.hypothesis_met && rep.difference <= tol * (1.0 + std::abs(fv.value));
    return rep;
}

}  // namespace cch
