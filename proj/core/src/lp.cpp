#include "pakmarket/lp.hpp"

#include <algorithm>

namespace pakmarket {

void LinearProgram::add_row(std::vector<Rat> coeffs, RowRelation r, Rat rhs) {
    if (coeffs.size() != vars()) throw DomainError("add_row: coefficient count mismatch");
    A.push_back(std::move(coeffs));
    b.push_back(std::move(rhs));
    rel.push_back(r);
}

namespace {

// Dense tableau simplex over rationals. Columns: structurals, then one
// slack/surplus per inequality row, then one artificial per row. Rows are
// scaled up front so every right-hand side is nonnegative.
class Simplex {
public:
    explicit Simplex(const LinearProgram& lp) : lp_(lp) {
        m_ = lp.rows();
        ns_ = lp.vars();
        sigma_.assign(m_, 1);
        slack_col_.assign(m_, -1);
        std::size_t col = ns_;
        for (std::size_t i = 0; i < m_; ++i)
            if (lp.rel[i] == RowRelation::LE) slack_col_[i] = static_cast<int>(col++);
        art_base_ = col;
        total_ = col + m_;

        T_.assign(m_, std::vector<Rat>(total_, Rat(0)));
        rhs_.assign(m_, Rat(0));
        basis_.assign(m_, 0);
        for (std::size_t i = 0; i < m_; ++i) {
            int s = lp.b[i] < 0 ? -1 : 1;
            sigma_[i] = s;
            for (std::size_t j = 0; j < ns_; ++j) T_[i][j] = Rat(s) * lp.A[i][j];
            rhs_[i] = Rat(s) * lp.b[i];
            if (slack_col_[i] >= 0) T_[i][slack_col_[i]] = Rat(s);
            T_[i][art_base_ + i] = 1;
            basis_[i] = static_cast<int>(art_base_ + i);
        }
    }

    LpSolution run() {
        // phase 1: maximize -sum(artificials)
        std::vector<Rat> c1(total_, Rat(0));
        for (std::size_t i = 0; i < m_; ++i) c1[art_base_ + i] = -1;
        rebuild_zrow(c1);
        if (!optimize(c1, /*allow_art=*/true))
            throw AlgorithmError("simplex: phase 1 unbounded"); // cannot happen
        Rat art_sum(0);
        for (std::size_t i = 0; i < m_; ++i)
            if (static_cast<std::size_t>(basis_[i]) >= art_base_) art_sum += rhs_[i];
        if (art_sum != 0) return LpSolution{LpStatus::Infeasible, {}, {}, Rat(0)};
        pivot_out_artificials();

        // phase 2
        std::vector<Rat> c2(total_, Rat(0));
        for (std::size_t j = 0; j < ns_; ++j) c2[j] = lp_.c[j];
        rebuild_zrow(c2);
        if (!optimize(c2, /*allow_art=*/false))
            return LpSolution{LpStatus::Unbounded, {}, {}, Rat(0)};

        LpSolution sol;
        sol.status = LpStatus::Optimal;
        sol.x.assign(ns_, Rat(0));
        for (std::size_t i = 0; i < m_; ++i)
            if (static_cast<std::size_t>(basis_[i]) < ns_) sol.x[basis_[i]] = rhs_[i];
        sol.value = Rat(0);
        for (std::size_t j = 0; j < ns_; ++j) sol.value += lp_.c[j] * sol.x[j];
        // dual of scaled row i sits in the z-row under its artificial column
        sol.y.assign(m_, Rat(0));
        for (std::size_t i = 0; i < m_; ++i)
            sol.y[i] = Rat(sigma_[i]) * -zrow_[art_base_ + i];
        return sol;
    }

private:
    void rebuild_zrow(const std::vector<Rat>& c) {
        zrow_.assign(total_, Rat(0));
        zval_ = 0;
        for (std::size_t j = 0; j < total_; ++j) {
            Rat acc = c[j];
            for (std::size_t i = 0; i < m_; ++i)
                if (c[basis_[i]] != 0) acc -= c[basis_[i]] * T_[i][j];
            zrow_[j] = acc;
        }
        for (std::size_t i = 0; i < m_; ++i) zval_ += c[basis_[i]] * rhs_[i];
    }

    // Bland: entering = lowest-index column with positive reduced cost.
    // Returns false on unboundedness.
    bool optimize(const std::vector<Rat>& c, bool allow_art) {
        (void)c;
        for (;;) {
            std::size_t limit = allow_art ? total_ : art_base_;
            int enter = -1;
            for (std::size_t j = 0; j < limit; ++j)
                if (zrow_[j] > 0) {
                    enter = static_cast<int>(j);
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            Rat best_ratio(0);
            for (std::size_t i = 0; i < m_; ++i) {
                if (T_[i][enter] <= 0) continue;
                Rat ratio = rhs_[i] / T_[i][enter];
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = static_cast<int>(i);
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(static_cast<std::size_t>(leave), static_cast<std::size_t>(enter));
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        Rat piv = T_[row][col];
        for (std::size_t j = 0; j < total_; ++j) T_[row][j] /= piv;
        rhs_[row] /= piv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row || T_[i][col] == 0) continue;
            Rat f = T_[i][col];
            for (std::size_t j = 0; j < total_; ++j) T_[i][j] -= f * T_[row][j];
            rhs_[i] -= f * rhs_[row];
        }
        if (zrow_[col] != 0) {
            Rat f = zrow_[col];
            for (std::size_t j = 0; j < total_; ++j) zrow_[j] -= f * T_[row][j];
            zval_ += f * rhs_[row];
        }
        basis_[row] = static_cast<int>(col);
    }

    // After phase 1, swap any artificial still in the basis (at zero level)
    // for a non-artificial column, or drop the redundant row from play.
    void pivot_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (static_cast<std::size_t>(basis_[i]) < art_base_) continue;
            for (std::size_t j = 0; j < art_base_; ++j) {
                if (T_[i][j] != 0) {
                    pivot(i, j);
                    break;
                }
            }
            // if no pivot column exists the row is 0 = 0 and stays on its
            // artificial at level zero; it never re-enters phase 2 pricing
        }
    }

    const LinearProgram& lp_;
    std::size_t m_, ns_, art_base_, total_;
    std::vector<int> sigma_, slack_col_, basis_;
    std::vector<std::vector<Rat>> T_;
    std::vector<Rat> rhs_, zrow_;
    Rat zval_;
};

void verify_optimal(const LinearProgram& lp, const LpSolution& sol) {
    // primal feasibility
    for (std::size_t j = 0; j < lp.vars(); ++j)
        if (sol.x[j] < 0) throw AlgorithmError("simplex: negative primal variable");
    for (std::size_t i = 0; i < lp.rows(); ++i) {
        Rat lhs(0);
        for (std::size_t j = 0; j < lp.vars(); ++j) lhs += lp.A[i][j] * sol.x[j];
        if (lp.rel[i] == RowRelation::LE ? lhs > lp.b[i] : lhs != lp.b[i])
            throw AlgorithmError("simplex: primal infeasible at optimum");
        if (lp.rel[i] == RowRelation::LE && sol.y[i] != 0 && lhs != lp.b[i])
            throw AlgorithmError("simplex: complementary slackness violated (row)");
    }
    // dual feasibility: y_i >= 0 on inequality rows, A^T y >= c
    Rat dual_val(0);
    for (std::size_t i = 0; i < lp.rows(); ++i) {
        if (lp.rel[i] == RowRelation::LE && sol.y[i] < 0)
            throw AlgorithmError("simplex: negative dual on inequality row");
        dual_val += sol.y[i] * lp.b[i];
    }
    for (std::size_t j = 0; j < lp.vars(); ++j) {
        Rat red(0);
        for (std::size_t i = 0; i < lp.rows(); ++i) red += lp.A[i][j] * sol.y[i];
        if (red < lp.c[j]) throw AlgorithmError("simplex: dual infeasible at optimum");
        if (sol.x[j] != 0 && red != lp.c[j])
            throw AlgorithmError("simplex: complementary slackness violated (column)");
    }
    if (dual_val != sol.value) throw AlgorithmError("simplex: duality gap at optimum");
}

} // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    for (const auto& row : lp.A)
        if (row.size() != lp.vars()) throw DomainError("solve_lp: ragged matrix");
    if (lp.b.size() != lp.rows() || lp.rel.size() != lp.rows())
        throw DomainError("solve_lp: dimension mismatch");
    if (lp.rows() == 0) {
        for (const Rat& cj : lp.c)
            if (cj > 0) return LpSolution{LpStatus::Unbounded, {}, {}, Rat(0)};
        return LpSolution{LpStatus::Optimal, std::vector<Rat>(lp.vars(), Rat(0)), {},
                          Rat(0)};
    }
    LpSolution sol = Simplex(lp).run();
    if (sol.status == LpStatus::Optimal) verify_optimal(lp, sol);
    return sol;
}

namespace {

constexpr long long kBnbNodeLimit = 1'000'000;

struct BnbState {
    LpSolution best;
    bool have_best = false;
    long long nodes = 0;
};

void bnb(LinearProgram& lp, BnbState& st) {
    if (++st.nodes > kBnbNodeLimit)
        throw ResourceError("solve_ip: branch-and-bound node limit exceeded");
    LpSolution relax = solve_lp(lp);
    if (relax.status == LpStatus::Unbounded)
        throw DomainError("solve_ip: relaxation unbounded; variables must be boxed");
    if (relax.status == LpStatus::Infeasible) return;
    if (st.have_best && relax.value <= st.best.value) return;
    int frac = -1;
    for (std::size_t j = 0; j < lp.vars(); ++j)
        if (!rat_is_integer(relax.x[j])) {
            frac = static_cast<int>(j);
            break;
        }
    if (frac < 0) {
        if (!st.have_best || relax.value > st.best.value) {
            st.best = relax;
            st.have_best = true;
        }
        return;
    }
    std::vector<Rat> fix_row(lp.vars(), Rat(0));
    fix_row[frac] = 1;
    for (int branch = 0; branch <= 1; ++branch) {
        lp.add_row(fix_row, RowRelation::EQ, Rat(branch));
        bnb(lp, st);
        lp.A.pop_back();
        lp.b.pop_back();
        lp.rel.pop_back();
    }
}

} // namespace

LpSolution solve_ip(const LinearProgram& lp) {
    LinearProgram work = lp;
    BnbState st;
    bnb(work, st);
    if (!st.have_best) return LpSolution{LpStatus::Infeasible, {}, {}, Rat(0)};
    st.best.y.clear(); // duals of a branching subproblem are not the IP's duals
    return st.best;
}

} // namespace pakmarket
