#pragma once

// Small dense two-phase simplex over exact rationals, Bland's rule, for the
// nonnegative linear programs the geometry module needs. Doubles convert to
// cpp_rational exactly, so on instances whose data are binary floats the
// optimum is exact, not approximate.

#include <cstddef>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rpmem/error.hpp"

namespace rpmem::lp {

using Rational = boost::multiprecision::cpp_rational;
using Matrix = std::vector<std::vector<Rational>>;

struct Result {
    enum class Status { Optimal, Infeasible };
    Status status = Status::Infeasible;
    Rational value = 0;               // objective at the optimum
    std::vector<Rational> solution;   // structural variables
    Rational phase1_residual = 0;     // l1 distance to the attainable RHS
};

namespace detail {

class Tableau {
public:
    Tableau(const Matrix& m, const std::vector<Rational>& q)
        : rows_(m.size()), structurals_(m.empty() ? 0 : m[0].size()) {
        cols_ = structurals_ + rows_;
        tab_.assign(rows_, std::vector<Rational>(cols_, 0));
        rhs_.assign(rows_, 0);
        basis_.assign(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            const bool flip = q[i] < 0;
            for (std::size_t j = 0; j < structurals_; ++j)
                tab_[i][j] = flip ? -m[i][j] : m[i][j];
            tab_[i][structurals_ + i] = 1;
            rhs_[i] = flip ? -q[i] : q[i];
            basis_[i] = structurals_ + i;
        }
    }

    // Minimizes cost over columns [0, enter_limit). Bland's rule, so it
    // terminates without cycling. cost has one entry per column.
    void run(const std::vector<Rational>& cost, std::size_t enter_limit) {
        for (;;) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < enter_limit && enter == cols_; ++j) {
                if (is_basic(j)) continue;
                Rational d = cost[j];
                for (std::size_t i = 0; i < rows_; ++i)
                    if (tab_[i][j] != 0) d -= cost[basis_[i]] * tab_[i][j];
                if (d < 0) enter = j;
            }
            if (enter == cols_) return;
            std::size_t leave = rows_;
            Rational best_ratio = 0;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (tab_[i][enter] <= 0) continue;
                const Rational ratio = rhs_[i] / tab_[i][enter];
                if (leave == rows_ || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == rows_) throw Error("lp: unbounded direction");
            pivot(leave, enter);
        }
    }

    Rational objective(const std::vector<Rational>& cost) const {
        Rational v = 0;
        for (std::size_t i = 0; i < rows_; ++i) v += cost[basis_[i]] * rhs_[i];
        return v;
    }

    // Pivots zero-level artificials out of the basis; rows whose structural
    // part vanished are redundant and get dropped.
    void purge_artificials() {
        for (std::size_t i = 0; i < rows_;) {
            if (basis_[i] < structurals_) {
                ++i;
                continue;
            }
            std::size_t j = 0;
            while (j < structurals_ && tab_[i][j] == 0) ++j;
            if (j < structurals_) {
                pivot(i, j);
                ++i;
            } else {
                drop_row(i);
            }
        }
    }

    std::vector<Rational> structural_solution() const {
        std::vector<Rational> x(structurals_, 0);
        for (std::size_t i = 0; i < rows_; ++i)
            if (basis_[i] < structurals_) x[basis_[i]] = rhs_[i];
        return x;
    }

    std::size_t structurals() const { return structurals_; }
    std::size_t cols() const { return cols_; }

private:
    bool is_basic(std::size_t j) const {
        for (std::size_t i = 0; i < rows_; ++i)
            if (basis_[i] == j) return true;
        return false;
    }

    void pivot(std::size_t r, std::size_t e) {
        const Rational p = tab_[r][e];
        for (auto& v : tab_[r]) v /= p;
        rhs_[r] /= p;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r || tab_[i][e] == 0) continue;
            const Rational f = tab_[i][e];
            for (std::size_t j = 0; j < cols_; ++j) tab_[i][j] -= f * tab_[r][j];
            rhs_[i] -= f * rhs_[r];
        }
        basis_[r] = e;
    }

    void drop_row(std::size_t r) {
        tab_.erase(tab_.begin() + static_cast<std::ptrdiff_t>(r));
        rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
        --rows_;
    }

    std::size_t rows_, structurals_, cols_;
    Matrix tab_;
    std::vector<Rational> rhs_;
    std::vector<std::size_t> basis_;
};

}  // namespace detail

// Solves min c.y subject to M y = q, y >= 0, exactly. When the system is
// unattainable the result is Infeasible with the phase-1 l1 residual and the
// residual-minimizing y attached.
inline Result solve_min(const Matrix& m, const std::vector<Rational>& q,
                        const std::vector<Rational>& c) {
    if (m.empty() || m.size() != q.size())
        throw DimensionError("lp::solve_min: shape mismatch");
    const std::size_t n = m[0].size();
    for (const auto& row : m)
        if (row.size() != n) throw DimensionError("lp::solve_min: ragged matrix");
    if (c.size() != n) throw DimensionError("lp::solve_min: cost length");

    detail::Tableau tab(m, q);
    std::vector<Rational> phase1_cost(tab.cols(), 0);
    for (std::size_t j = n; j < tab.cols(); ++j) phase1_cost[j] = 1;
    tab.run(phase1_cost, tab.cols());
    const Rational residual = tab.objective(phase1_cost);

    Result out;
    if (residual != 0) {
        out.status = Result::Status::Infeasible;
        out.phase1_residual = residual;
        out.solution = tab.structural_solution();
        return out;
    }

    // Phase 2: artificials are out of the basis (or their rows dropped) and
    // barred from re-entering via the enter_limit.
    tab.purge_artificials();
    std::vector<Rational> phase2_cost(tab.cols(), 0);
    for (std::size_t j = 0; j < n; ++j) phase2_cost[j] = c[j];
    tab.run(phase2_cost, n);

    out.status = Result::Status::Optimal;
    out.solution = tab.structural_solution();
    Rational v = 0;
    for (std::size_t j = 0; j < n; ++j) v += c[j] * out.solution[j];
    out.value = v;
    return out;
}

}  // namespace rpmem::lp
