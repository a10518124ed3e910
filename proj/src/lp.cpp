#include "cch/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cch {

void SparseMatrixCSC::add_column(const std::vector<std::pair<int, double>>& entries) {
    for (const auto& [r, v] : entries) {
        if (r < 0 || r >= rows) throw std::invalid_argument("SparseMatrixCSC: bad row");
        if (v != 0.0) {
            rowidx.push_back(r);
            val.push_back(v);
        }
    }
    colptr.push_back(static_cast<int>(rowidx.size()));
    ++cols;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sparse LU of the basis matrix, built column by column with partial
// pivoting.  Triangular-solve patterns come from a depth-first search over
// the pivot graph (Gilbert-Peierls), so refactorization costs O(nnz(LU)).
struct BasisLU {
    int m = 0;
    std::vector<int> pivot_row;  // pivot order j -> original row
    std::vector<int> row_pivot;  // original row -> pivot order (or -1)
    std::vector<std::vector<std::pair<int, double>>> L;     // j -> (row, mult)
    std::vector<std::vector<std::pair<int, double>>> Urow;  // j -> [(k>j, u_jk)]
    std::vector<std::vector<std::pair<int, double>>> Ucol;  // k -> [(j<k, u_jk)]
    std::vector<double> udiag;

    // scratch
    std::vector<double> work;
    std::vector<int> order, visit_mark;
    struct Frame {
        int row;
        size_t next;
    };
    std::vector<Frame> frames;
    int stamp = 0;

    // Post-order DFS from row r over assigned pivots; `order` reversed
    // gives a valid elimination order for the reach set.
    void dfs(int r) {
        if (visit_mark[r] >= stamp) return;
        visit_mark[r] = stamp;
        frames.clear();
        frames.push_back({r, 0});
        while (!frames.empty()) {
            Frame& f = frames.back();
            int j = row_pivot[f.row];
            if (j < 0 || f.next >= L[j].size()) {
                if (j >= 0) order.push_back(j);
                frames.pop_back();
                continue;
            }
            int rr = L[j][f.next].first;
            ++f.next;
            if (visit_mark[rr] < stamp) {
                visit_mark[rr] = stamp;
                frames.push_back({rr, 0});
            }
        }
    }

    bool factor(const SparseMatrixCSC& A, const std::vector<int>& basis) {
        m = static_cast<int>(basis.size());
        pivot_row.assign(m, -1);
        row_pivot.assign(m, -1);
        L.assign(m, {});
        Urow.assign(m, {});
        Ucol.assign(m, {});
        udiag.assign(m, 0.0);
        work.assign(m, 0.0);
        visit_mark.assign(m, -1);
        stamp = 0;
        std::vector<int> touched;
        for (int k = 0; k < m; ++k) {
            int col = basis[k];
            // Pattern by DFS, then eliminate in topological order.
            order.clear();
            stamp += 1;
            for (int t = A.colptr[col]; t < A.colptr[col + 1]; ++t) dfs(A.rowidx[t]);
            touched.clear();
            for (int t = A.colptr[col]; t < A.colptr[col + 1]; ++t) {
                work[A.rowidx[t]] = A.val[t];
                touched.push_back(A.rowidx[t]);
            }
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                int j = *it;
                double t = work[pivot_row[j]];
                if (t == 0.0) continue;
                Urow[j].emplace_back(k, t);
                Ucol[k].emplace_back(j, t);
                work[pivot_row[j]] = 0.0;
                for (const auto& [r, lv] : L[j]) {
                    if (work[r] == 0.0) touched.push_back(r);
                    work[r] -= t * lv;
                }
            }
            int prow = -1;
            double best = 0.0;
            for (int r : touched) {
                if (row_pivot[r] >= 0) continue;
                if (std::abs(work[r]) > best) {
                    best = std::abs(work[r]);
                    prow = r;
                }
            }
            if (prow < 0 || best < 1e-12) {
                for (int r : touched) work[r] = 0.0;
                return false;
            }
            pivot_row[k] = prow;
            row_pivot[prow] = k;
            udiag[k] = work[prow];
            work[prow] = 0.0;
            for (int r : touched) {
                if (work[r] != 0.0 && row_pivot[r] < 0) L[k].emplace_back(r, work[r] / udiag[k]);
                work[r] = 0.0;
            }
        }
        return true;
    }

    // Solve B z = v in place (v in row indexing, z by basis position).
    void ftran(std::vector<double>& v) const {
        for (int j = 0; j < m; ++j) {
            double t = v[pivot_row[j]];
            if (t != 0.0)
                for (const auto& [r, lv] : L[j]) v[r] -= t * lv;
        }
        std::vector<double>& w = const_cast<BasisLU*>(this)->work;
        for (int j = 0; j < m; ++j) w[j] = v[pivot_row[j]];
        for (int j = m - 1; j >= 0; --j) {
            double s = w[j];
            for (const auto& [k, u] : Urow[j]) s -= u * w[k];
            w[j] = s / udiag[j];
        }
        std::copy(w.begin(), w.end(), v.begin());
    }

    // Solve B^T y = c (c by basis position, y in row indexing).
    void btran(std::vector<double>& c, std::vector<double>& y) const {
        for (int j = 0; j < m; ++j) {
            double s = c[j];
            for (const auto& [i, u] : Ucol[j]) s -= u * c[i];
            c[j] = s / udiag[j];
        }
        y.assign(m, 0.0);
        for (int j = m - 1; j >= 0; --j) {
            double s = c[j];
            for (const auto& [r, lv] : L[j]) s -= lv * y[r];
            y[pivot_row[j]] = s;
        }
    }
};

struct Eta {
    int pos;
    std::vector<std::pair<int, double>> col;
    double wp;
};

struct Simplex {
    const SparseMatrixCSC& A;
    int m, n_total, n_struct;
    std::vector<double> b;
    std::vector<int> basis;
    std::vector<int> where;  // column -> basis position or -1
    std::vector<double> xB;
    BasisLU lu;
    std::vector<Eta> etas;
    const LpOptions& opts;
    long iterations = 0;
    std::vector<char> never_enter;  // artificials barred from re-entering

    Simplex(const SparseMatrixCSC& A_, std::vector<double> b_, int n_struct_,
            const LpOptions& o)
        : A(A_), m(A_.rows), n_total(A_.cols), n_struct(n_struct_), b(std::move(b_)),
          opts(o) {
        where.assign(n_total, -1);
        never_enter.assign(n_total, 0);
    }

    bool refactor() {
        etas.clear();
        if (!lu.factor(A, basis)) return false;
        std::vector<double> rhs = b;
        lu.ftran(rhs);
        xB = rhs;
        return true;
    }

    void ftran(std::vector<double>& v) const {
        lu.ftran(v);
        for (const auto& e : etas) {
            double t = v[e.pos] / e.wp;
            v[e.pos] = t;
            if (t != 0.0)
                for (const auto& [i, wi] : e.col) v[i] -= wi * t;
        }
    }

    void btran(std::vector<double>& c, std::vector<double>& y) const {
        for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
            double s = c[it->pos];
            for (const auto& [i, wi] : it->col) s -= wi * c[i];
            c[it->pos] = s / it->wp;
        }
        lu.btran(c, y);
    }

    std::vector<double> column(int j) const {
        std::vector<double> v(m, 0.0);
        for (int t = A.colptr[j]; t < A.colptr[j + 1]; ++t) v[A.rowidx[t]] = A.val[t];
        return v;
    }

    double col_dot(int j, const std::vector<double>& y) const {
        double s = 0;
        for (int t = A.colptr[j]; t < A.colptr[j + 1]; ++t) s += y[A.rowidx[t]] * A.val[t];
        return s;
    }

    // Dual-simplex reoptimization after the bound perturbation is removed:
    // the basis stays dual feasible, so we drive the (slightly) negative
    // basic values out while keeping reduced costs nonnegative.
    LpStatus dual_cleanup(const std::vector<double>& cost, long max_iters) {
        std::vector<double> cb(m), y, rho, w, er;
        int stall = 0;
        bool bland = false;
        while (true) {
            if (iterations >= max_iters) return LpStatus::iteration_limit;
            if (static_cast<int>(etas.size()) >= opts.refactor_every) {
                if (!refactor()) return LpStatus::iteration_limit;
            }
            int r = -1;
            double worst = -1e-10;
            for (int i = 0; i < m; ++i)
                if (xB[i] < worst) {
                    worst = xB[i];
                    r = i;
                }
            if (r < 0) return LpStatus::optimal;
            ++iterations;
            for (int i = 0; i < m; ++i) cb[i] = cost[basis[i]];
            btran(cb, y);
            er.assign(m, 0.0);
            er[r] = 1.0;
            btran(er, rho);
            int enter = -1;
            double best_ratio = kInf, best_alpha = 0;
            for (int j = 0; j < n_struct; ++j) {
                if (where[j] >= 0) continue;
                double alpha = col_dot(j, rho);
                if (alpha >= -1e-9) continue;
                double rj = std::max(cost[j] - col_dot(j, y), 0.0);
                double ratio = rj / (-alpha);
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 &&
                     (bland ? (enter < 0 || j < enter)
                            : std::abs(alpha) > std::abs(best_alpha)))) {
                    best_ratio = ratio;
                    best_alpha = alpha;
                    enter = j;
                }
            }
            if (enter < 0) return LpStatus::unbounded;  // should not happen here
            w = column(enter);
            ftran(w);
            if (std::abs(w[r]) < 1e-9 || std::abs(w[r] - best_alpha) > 1e-6 * std::abs(w[r])) {
                if (!etas.empty()) {
                    if (!refactor()) return LpStatus::iteration_limit;
                    continue;
                }
            }
            if (std::abs(w[r]) < 1e-11) return LpStatus::iteration_limit;
            double theta = xB[r] / w[r];  // both negative
            for (int i = 0; i < m; ++i)
                if (i != r) xB[i] -= theta * w[i];
            where[basis[r]] = -1;
            basis[r] = enter;
            where[enter] = r;
            xB[r] = theta;
            Eta e;
            e.pos = r;
            e.wp = w[r];
            for (int i = 0; i < m; ++i)
                if (i != r && w[i] != 0.0) e.col.emplace_back(i, w[i]);
            etas.push_back(std::move(e));
            if (best_ratio <= 1e-12) {
                if (++stall > 200) bland = true;
            } else {
                stall = 0;
                bland = false;
            }
        }
    }

    // Minimize `cost` from the current basis.  Devex pricing with Bland's
    // rule after degenerate stalls.  In phase 2 artificials may not enter
    // and are pushed out of the basis at zero level whenever they move.
    LpStatus phase(const std::vector<double>& cost, bool phase2, long max_iters) {
        int degenerate_streak = 0;
        bool bland = false;
        std::vector<char> banned(n_total, 0);
        std::vector<double> devex(n_total, 1.0);
        std::vector<double> cb(m), y, rho, w;
        while (true) {
            if (iterations >= max_iters) return LpStatus::iteration_limit;
            ++iterations;
            if (static_cast<int>(etas.size()) >= opts.refactor_every) {
                if (!refactor()) return LpStatus::iteration_limit;
                std::fill(banned.begin(), banned.end(), 0);
            }
            for (int i = 0; i < m; ++i) cb[i] = cost[basis[i]];
            btran(cb, y);
            // --- pricing ---
            int enter = -1;
            double best_score = 0;
            for (int j = 0; j < n_total; ++j) {
                if (where[j] >= 0 || banned[j] || never_enter[j]) continue;
                if (phase2 && j >= n_struct) continue;
                double rj = cost[j] - col_dot(j, y);
                if (rj >= -opts.tol) continue;
                if (bland) {
                    enter = j;
                    break;
                }
                double score = rj * rj / devex[j];
                if (score > best_score) {
                    best_score = score;
                    enter = j;
                }
            }
            if (enter < 0) return LpStatus::optimal;
            w = column(enter);
            ftran(w);
            double wmax = 0;
            for (double v : w) wmax = std::max(wmax, std::abs(v));
            if (wmax < 1e-11) {
                banned[enter] = 1;
                --iterations;
                continue;
            }
            // --- ratio test ---
            int leave = -1;
            double theta = kInf, leave_piv = 0;
            for (int i = 0; i < m; ++i) {
                bool art_kick = phase2 && basis[i] >= n_struct && std::abs(w[i]) > 1e-9;
                if (w[i] > 1e-9 || art_kick) {
                    double xi = std::max(xB[i], 0.0);
                    double ratio = art_kick ? 0.0 : xi / w[i];
                    if (ratio < theta - 1e-12 ||
                        (ratio < theta + 1e-12 &&
                         (bland ? (leave < 0 || basis[i] < basis[leave])
                                : std::abs(w[i]) > std::abs(leave_piv)))) {
                        theta = ratio;
                        leave = i;
                        leave_piv = w[i];
                    }
                }
            }
            if (leave < 0) return LpStatus::unbounded;
            theta = std::max(theta, 0.0);
            if (std::abs(w[leave]) < 1e-9 * wmax) {
                if (!etas.empty()) {
                    if (!refactor()) return LpStatus::iteration_limit;
                    std::fill(banned.begin(), banned.end(), 0);
                    --iterations;
                    continue;
                }
                banned[enter] = 1;
                --iterations;
                continue;
            }
            // --- devex update (needs the pivot row of B^-1 A) ---
            if (!bland) {
                std::vector<double> er(m, 0.0);
                er[leave] = 1.0;
                btran(er, rho);
                const double aq = w[leave];
                const double gq = std::max(devex[enter], 1.0);
                for (int j = 0; j < n_total; ++j) {
                    if (where[j] >= 0 || j == enter) continue;
                    double alpha = col_dot(j, rho);
                    if (alpha == 0.0) continue;
                    double cand = (alpha / aq) * (alpha / aq) * gq;
                    if (cand > devex[j]) devex[j] = cand;
                }
                devex[basis[leave]] = std::max(gq / (aq * aq), 1.0);
                devex[enter] = 1.0;
                double dmax = 0;
                for (double g : devex) dmax = std::max(dmax, g);
                if (dmax > 1e8) std::fill(devex.begin(), devex.end(), 1.0);
            }
            // --- pivot ---
            for (int i = 0; i < m; ++i)
                if (i != leave) xB[i] -= theta * w[i];
            int leaving_col = basis[leave];
            where[leaving_col] = -1;
            if (!phase2 && leaving_col >= n_struct) never_enter[leaving_col] = 1;
            basis[leave] = enter;
            where[enter] = leave;
            xB[leave] = theta;
            Eta e;
            e.pos = leave;
            e.wp = w[leave];
            for (int i = 0; i < m; ++i)
                if (i != leave && w[i] != 0.0) e.col.emplace_back(i, w[i]);
            etas.push_back(std::move(e));
            if (theta <= 1e-12) {
                if (++degenerate_streak > 200) bland = true;
            } else {
                degenerate_streak = 0;
                bland = false;
            }
        }
    }
};

}  // namespace

LpSolution solve_lp(const LpProblem& prob, const LpOptions& opts) {
    const int m = prob.A.rows;
    const int n = prob.A.cols;
    if (static_cast<int>(prob.b.size()) != m || static_cast<int>(prob.c.size()) != n)
        throw std::invalid_argument("solve_lp: inconsistent problem sizes");

    LpSolution sol;
    if (m == 0) {
        sol.status = LpStatus::optimal;
        sol.x.assign(n, 0.0);
        sol.reduced_costs = prob.c;
        for (double cj : prob.c)
            sol.dual_residual = std::max(sol.dual_residual, -cj);
        return sol;
    }

    double cscale = 0;
    for (double cj : prob.c) cscale = std::max(cscale, std::abs(cj));
    if (cscale == 0) cscale = 1;

    double bscale = 1;
    for (double bi : prob.b) bscale = std::max(bscale, std::abs(bi));

    // Anti-degeneracy: shift the lower bounds of the structural variables
    // by tiny deterministic amounts, which perturbs the right-hand side
    // inside the column space (so feasibility is unaffected) and collapses
    // degenerate plateaus.  The shift is removed before the final answer
    // and the basis is repaired by the dual-simplex cleanup.
    const double eps = 1e-7 * bscale;
    std::vector<double> delta(n);
    std::vector<double> b_pert = prob.b;
    for (int j = 0; j < n; ++j) {
        std::uint64_t hsh = (static_cast<std::uint64_t>(j) + 1) * 0x9e3779b97f4a7c15ull;
        delta[j] = eps * (0.5 + static_cast<double>(hsh >> 40) / 3.4e7);
        for (int t = prob.A.colptr[j]; t < prob.A.colptr[j + 1]; ++t)
            b_pert[prob.A.rowidx[t]] += prob.A.val[t] * delta[j];
    }

    // Flip rows with negative perturbed b, append artificial columns.
    SparseMatrixCSC A;
    A.rows = m;
    std::vector<double> flip(m, 1.0), b(m), b_true(m);
    for (int i = 0; i < m; ++i) {
        flip[i] = b_pert[i] < 0 ? -1.0 : 1.0;
        b[i] = b_pert[i] * flip[i];
        b_true[i] = prob.b[i] * flip[i];
    }
    std::vector<std::pair<int, double>> colbuf;
    for (int j = 0; j < n; ++j) {
        colbuf.clear();
        for (int t = prob.A.colptr[j]; t < prob.A.colptr[j + 1]; ++t)
            colbuf.emplace_back(prob.A.rowidx[t], prob.A.val[t] * flip[prob.A.rowidx[t]]);
        A.add_column(colbuf);
    }
    for (int i = 0; i < m; ++i) A.add_column({{i, 1.0}});

    Simplex sx(A, b, n, opts);
    sx.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        sx.basis[i] = n + i;
        sx.where[n + i] = i;
    }
    if (!sx.refactor()) throw std::runtime_error("solve_lp: initial basis singular");

    // Phase 1.
    std::vector<double> cost1(n + m, 0.0);
    for (int i = 0; i < m; ++i) cost1[n + i] = 1.0;
    LpStatus st1 = sx.phase(cost1, false, opts.max_iterations);
    sx.refactor();
    double art_sum = 0;
    for (int i = 0; i < m; ++i)
        if (sx.basis[i] >= n) art_sum += std::max(sx.xB[i], 0.0);
    sol.iterations = sx.iterations;
    if (st1 == LpStatus::iteration_limit) {
        sol.status = LpStatus::iteration_limit;
        sol.objective = kInf;
        return sol;
    }
    if (art_sum > opts.tol * bscale * 100) {
        sol.status = LpStatus::infeasible;
        std::vector<double> cb(m), y;
        for (int i = 0; i < m; ++i) cb[i] = cost1[sx.basis[i]];
        sx.btran(cb, y);
        sol.farkas.resize(m);
        for (int i = 0; i < m; ++i) sol.farkas[i] = y[i] * flip[i];
        sol.objective = kInf;
        return sol;
    }

    // Phase 2 (artificials barred from entering; basic ones leave at zero).
    std::vector<double> cost2(n + m, 0.0);
    for (int j = 0; j < n; ++j) cost2[j] = prob.c[j] / cscale;
    LpStatus st2 = sx.phase(cost2, true, opts.max_iterations);

    // Remove the perturbation and repair primal feasibility.
    sx.b = b_true;
    sx.refactor();
    if (st2 == LpStatus::optimal) {
        st2 = sx.dual_cleanup(cost2, opts.max_iterations + 20000);
        sx.refactor();
        if (st2 == LpStatus::unbounded) {
            // The relaxed bounds were feasible but the original ones are
            // not; report infeasibility (no certificate retained).
            sol.status = LpStatus::infeasible;
            sol.objective = kInf;
            sol.iterations = sx.iterations;
            return sol;
        }
    }
    sol.iterations = sx.iterations;

    sol.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (sx.basis[i] < n) sol.x[sx.basis[i]] = std::max(sx.xB[i], 0.0);
    double obj = 0;
    for (int j = 0; j < n; ++j) obj += prob.c[j] * sol.x[j];
    sol.objective = obj;
    std::vector<double> cb(m), y;
    for (int i = 0; i < m; ++i) cb[i] = cost2[sx.basis[i]];
    sx.btran(cb, y);
    sol.y.resize(m);
    for (int i = 0; i < m; ++i) sol.y[i] = y[i] * flip[i] * cscale;
    sol.reduced_costs.resize(n);
    double min_rc = 0;
    for (int j = 0; j < n; ++j) {
        double rj = prob.c[j];
        for (int t = prob.A.colptr[j]; t < prob.A.colptr[j + 1]; ++t)
            rj -= sol.y[prob.A.rowidx[t]] * prob.A.val[t];
        sol.reduced_costs[j] = rj;
        min_rc = std::min(min_rc, rj);
    }
    sol.dual_residual = std::max(0.0, -min_rc);
    std::vector<double> Ax(m, 0.0);
    for (int j = 0; j < n; ++j) {
        if (sol.x[j] == 0.0) continue;
        for (int t = prob.A.colptr[j]; t < prob.A.colptr[j + 1]; ++t)
            Ax[prob.A.rowidx[t]] += prob.A.val[t] * sol.x[j];
    }
    for (int i = 0; i < m; ++i)
        sol.primal_residual = std::max(sol.primal_residual, std::abs(Ax[i] - prob.b[i]));
    double by = 0;
    for (int i = 0; i < m; ++i) by += prob.b[i] * sol.y[i];
    sol.duality_gap = std::abs(obj - by) / (1.0 + std::abs(obj));
    sol.status = st2;
    return sol;
}

}  // namespace cch
