#include "concord/error.hpp"
#include "concord/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace concord {

void LpFeasibilityProblem::validate() const {
    if (rows < 1) throw DomainError("LpFeasibilityProblem: need at least one constraint row");
    if (cols < 1) throw DomainError("LpFeasibilityProblem: need at least one column");
    if (columns.size() != rows * cols)
        throw DomainError("LpFeasibilityProblem: columns must hold rows * cols entries");
    if (rhs.size() != rows) throw DomainError("LpFeasibilityProblem: rhs must hold one entry per row");
    for (double v : rhs)
        if (!std::isfinite(v)) throw DomainError("LpFeasibilityProblem: rhs must be finite");
    for (double v : columns)
        if (!std::isfinite(v)) throw DomainError("LpFeasibilityProblem: columns must be finite");
}

namespace {

constexpr double kPivotEps = 1e-11;

class Tableau {
public:
    Tableau(const LpFeasibilityProblem& p)
        : rows_(p.rows + 1), structural_(p.cols), width_(p.cols + rows_ + 1), data_(rows_ * width_, 0.0),
          cost_(width_, 0.0), basis_(rows_) {
        // Row i < m: columns * w = rhs; last row: sum(w) = 1. Artificial i sits in column k + i.
        for (std::size_t i = 0; i < rows_; ++i) {
            const bool simplex_row = i == p.rows;
            const double b = simplex_row ? 1.0 : p.rhs[i];
            const double sign = b < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < structural_; ++j)
                at(i, j) = sign * (simplex_row ? 1.0 : p.columns[j * p.rows + i]);
            at(i, structural_ + i) = 1.0;
            at(i, width_ - 1) = sign * b;
            basis_[i] = structural_ + i;
        }
        // Phase-one reduced costs: artificials cost 1, so r_j = -sum_i a_ij for structural j.
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < structural_; ++j) cost_[j] -= at(i, j);
            cost_[width_ - 1] -= at(i, width_ - 1);
        }
    }

    void run_phase_one() {
        const std::size_t rhs = width_ - 1;
        for (;;) {
            // Bland: lowest-index improving column.
            std::size_t enter = width_;
            for (std::size_t j = 0; j < rhs; ++j) {
                if (cost_[j] < -kPivotEps) {
                    enter = j;
                    break;
                }
            }
            if (enter == width_) return;
            std::size_t leave = rows_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rows_; ++i) {
                const double a = at(i, enter);
                if (a <= kPivotEps) continue;
                const double ratio = at(i, rhs) / a;
                if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis_[i] < basis_[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == rows_) return;  // cannot happen: phase one is bounded below
            pivot(leave, enter);
        }
    }

    // Degenerate pivots that move zero-level artificials out of the basis.
    void drive_out_artificials() {
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < structural_) continue;
            if (std::abs(at(i, width_ - 1)) > kPivotEps) continue;
            for (std::size_t j = 0; j < structural_; ++j) {
                if (std::abs(at(i, j)) > kPivotEps) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    double artificial_total() const {
        double total = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            if (basis_[i] >= structural_) total += std::abs(at(i, width_ - 1));
        return total;
    }

    std::vector<double> weights() const {
        std::vector<double> w(structural_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i)
            if (basis_[i] < structural_) w[basis_[i]] = at(i, width_ - 1);
        return w;
    }

private:
    double& at(std::size_t i, std::size_t j) { return data_[i * width_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * width_ + j]; }

    void pivot(std::size_t row, std::size_t col) {
        double* pr = &data_[row * width_];
        const double inv = 1.0 / pr[col];
        for (std::size_t j = 0; j < width_; ++j) pr[j] *= inv;
        pr[col] = 1.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == row) continue;
            double* r = &data_[i * width_];
            const double f = r[col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) r[j] -= f * pr[j];
            r[col] = 0.0;
        }
        const double f = cost_[col];
        if (f != 0.0) {
            for (std::size_t j = 0; j < width_; ++j) cost_[j] -= f * pr[j];
            cost_[col] = 0.0;
        }
        basis_[row] = col;
    }

    std::size_t rows_;
    std::size_t structural_;
    std::size_t width_;
    std::vector<double> data_;
    std::vector<double> cost_;
    std::vector<std::size_t> basis_;
};

}  // namespace

LpSolution solve_feasibility(const LpFeasibilityProblem& problem, double tol) {
    if (!(tol > 0.0)) throw DomainError("solve_feasibility: tol must be positive");
    problem.validate();

    Tableau tableau(problem);
    tableau.run_phase_one();
    tableau.drive_out_artificials();

    LpSolution out;
    out.residual = tableau.artificial_total();
    auto w = tableau.weights();

    double violation = 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < problem.cols; ++j) {
        violation = std::max(violation, -w[j]);
        sum += w[j];
    }
    violation = std::max(violation, std::abs(sum - 1.0));
    for (std::size_t i = 0; i < problem.rows; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < problem.cols; ++j) row += problem.columns[j * problem.rows + i] * w[j];
        violation = std::max(violation, std::abs(row - problem.rhs[i]));
    }
    out.max_violation = violation;
    out.feasible = out.residual <= tol && violation <= tol;
    if (out.feasible) out.weights = std::move(w);
    return out;
}

}  // namespace concord
