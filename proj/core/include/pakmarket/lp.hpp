#pragma once

#include <vector>

#include "pakmarket/errors.hpp"
#include "pakmarket/rational.hpp"

namespace pakmarket {

enum class RowRelation { LE, EQ };

/// max c.x  s.t.  A x (<=|=) b,  x >= 0. All data exact rationals.
struct LinearProgram {
    std::vector<Rat> c;
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> b;
    std::vector<RowRelation> rel;

    std::size_t vars() const { return c.size(); }
    std::size_t rows() const { return A.size(); }
    void add_row(std::vector<Rat> coeffs, RowRelation r, Rat rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<Rat> x;
    std::vector<Rat> y; // one multiplier per original row
    Rat value = Rat(0);
};

/// Two-phase primal simplex with Bland's rule. On Optimal the returned pair is
/// self-verified: primal feasible, dual feasible, equal objectives, exact
/// complementary slackness (AlgorithmError if any check fails).
LpSolution solve_lp(const LinearProgram& lp);

/// Exact 0/1 integer optimum by branch and bound on the rational relaxation.
/// Variables must be boxed (x_j <= 1 rows present or implied by constraints).
/// Deterministic: branch on the lowest-index fractional variable, 0 first.
LpSolution solve_ip(const LinearProgram& lp);

} // namespace pakmarket
