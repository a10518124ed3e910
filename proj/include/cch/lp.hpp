// Sparse linear programming in equality standard form
//
//     min c.x   s.t.  A x = b,  x >= 0
//
// solved by a two-phase revised simplex with a product-form basis inverse
// on top of a sparse LU refactorization.  Pricing is Dantzig with Bland's
// rule as an anti-cycling fallback, so runs are deterministic.  Solutions
// carry dual multipliers and residuals; infeasibility carries a Farkas
// certificate (y with y.A <= 0 and y.b > 0).

#pragma once

#include <stdexcept>
#include <vector>

namespace cch {

struct SparseMatrixCSC {
    int rows = 0;
    int cols = 0;
    std::vector<int> colptr{0};
    std::vector<int> rowidx;
    std::vector<double> val;

    void add_column(const std::vector<std::pair<int, double>>& entries);
    int nnz() const { return static_cast<int>(rowidx.size()); }
};

struct LpProblem {
    SparseMatrixCSC A;
    std::vector<double> b;
    std::vector<double> c;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
    LpStatus status = LpStatus::iteration_limit;
    double objective = 0;
    std::vector<double> x;              // primal, structural variables
    std::vector<double> y;              // row duals
    std::vector<double> reduced_costs;  // c - A^T y
    double primal_residual = 0;         // |Ax - b|_inf
    double dual_residual = 0;           // max(0, -min_j reduced cost)
    double duality_gap = 0;             // |c.x - b.y| / (1 + |c.x|)
    std::vector<double> farkas;         // infeasibility certificate
    long iterations = 0;
};

struct LpOptions {
    double tol = 1e-9;
    long max_iterations = 200000;
    int refactor_every = 100;
};

class SolverLimitError : public std::runtime_error {
public:
    SolverLimitError(const std::string& what, double bound)
        : std::runtime_error(what), best_bound(bound) {}
    double best_bound;
};

LpSolution solve_lp(const LpProblem& prob, const LpOptions& opts = {});

}  // namespace cch
