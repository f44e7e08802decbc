#include "riga/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace riga {

double LinearConstraint::violation(const std::vector<double>& x) const {
    double lhs = 0;
    for (std::size_t i = 0; i < a.size(); ++i) lhs += a[i] * x[i];
    switch (relation) {
        case Relation::LE: return lhs - b;
        case Relation::GE: return b - lhs;
        case Relation::EQ: return std::abs(lhs - b);
    }
    return 0;
}

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "?";
}

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kFeasEps = 1e-9;

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

    double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double rhs(std::size_t r) const { return at(r, cols_); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::vector<std::size_t>& basis() { return basis_; }

    void pivot(std::size_t pr, std::size_t pc) {
        double inv = 1.0 / at(pr, pc);
        double* prow = &data_[pr * (cols_ + 1)];
        for (std::size_t c = 0; c <= cols_; ++c) prow[c] *= inv;
        prow[pc] = 1.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            double* row = &data_[r * (cols_ + 1)];
            double f = row[pc];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= cols_; ++c) row[c] -= f * prow[c];
            row[pc] = 0.0;
        }
        basis_[pr] = pc;
    }

    void drop_row(std::size_t r) {
        data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * (cols_ + 1)),
                    data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * (cols_ + 1)));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
        --rows_;
    }

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
    std::vector<std::size_t> basis_;
};

enum class PhaseOutcome { Optimal, Unbounded };

// Maximizes cost · x over the tableau's current basic feasible solution.
// Columns with `allowed[c] == false` never enter the basis.
PhaseOutcome run_simplex(Tableau& t, const std::vector<double>& cost, const std::vector<bool>& allowed) {
    const std::size_t n = t.cols();
    double scale = 1.0;
    for (double c : cost) scale = std::max(scale, std::abs(c));
    const double eps = 1e-10 * scale;
    std::vector<double> reduced(n);
    for (std::size_t iter = 0;; ++iter) {
        if (iter > 100000) throw std::runtime_error("simplex iteration limit exceeded");
        // reduced_j = c_j - c_B B^-1 A_j; Bland: lowest improving index enters.
        std::size_t enter = n;
        for (std::size_t c = 0; c < n && enter == n; ++c) {
            if (!allowed[c]) continue;
            double z = cost[c];
            for (std::size_t r = 0; r < t.rows(); ++r) z -= cost[t.basis()[r]] * t.at(r, c);
            if (z > eps) enter = c;
        }
        if (enter == n) return PhaseOutcome::Optimal;
        std::size_t leave = t.rows();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < t.rows(); ++r) {
            double a = t.at(r, enter);
            if (a <= kPivotEps) continue;
            double ratio = t.rhs(r) / a;
            if (ratio < best - 1e-12 ||
                (std::abs(ratio - best) <= 1e-12 && t.basis()[r] < t.basis()[leave])) {
                best = ratio;
                leave = r;
            }
        }
        if (leave == t.rows()) return PhaseOutcome::Unbounded;
        t.pivot(leave, enter);
    }
}

}  // namespace

LpResult lp_solve(const LpProblem& problem) {
    const std::size_t d = problem.objective.size();
    for (const auto& row : problem.constraints) {
        if (row.a.size() != d) throw std::invalid_argument("lp_solve: constraint dimension mismatch");
    }
    const std::size_t ns = problem.nonnegative ? d : 2 * d;  // structural columns
    const std::size_t m = problem.constraints.size();

    // Column layout: structural | slack/surplus (one per inequality) | artificial.
    std::size_t n_slack = 0, n_art = 0;
    struct Row {
        std::vector<double> a;
        double b;
        Relation rel;
    };
    std::vector<Row> rows;
    rows.reserve(m);
    for (const auto& c : problem.constraints) {
        double scale = 0;
        for (double v : c.a) scale = std::max(scale, std::abs(v));
        if (scale == 0) {
            // Constant row: either trivially satisfied or infeasible.
            bool ok = (c.relation == Relation::LE && 0 <= c.b + kFeasEps) ||
                      (c.relation == Relation::GE && 0 >= c.b - kFeasEps) ||
                      (c.relation == Relation::EQ && std::abs(c.b) <= kFeasEps);
            if (!ok) return {LpStatus::Infeasible, 0, {}};
            continue;
        }
        Row r{std::vector<double>(ns, 0.0), c.b / scale, c.relation};
        for (std::size_t i = 0; i < d; ++i) {
            r.a[i] = c.a[i] / scale;
            if (!problem.nonnegative) r.a[d + i] = -c.a[i] / scale;
        }
        if (r.b < 0) {
            for (double& v : r.a) v = -v;
            r.b = -r.b;
            if (r.rel == Relation::LE) r.rel = Relation::GE;
            else if (r.rel == Relation::GE) r.rel = Relation::LE;
        }
        if (r.rel != Relation::EQ) ++n_slack;
        if (r.rel != Relation::LE) ++n_art;
        rows.push_back(std::move(r));
    }

    const std::size_t n = ns + n_slack + n_art;
    Tableau t(rows.size(), n);
    std::size_t slack = ns, art = ns + n_slack;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < ns; ++c) t.at(r, c) = rows[r].a[c];
        t.rhs(r) = rows[r].b;
        switch (rows[r].rel) {
            case Relation::LE:
                t.at(r, slack) = 1;
                t.basis()[r] = slack++;
                break;
            case Relation::GE:
                t.at(r, slack++) = -1;
                t.at(r, art) = 1;
                t.basis()[r] = art++;
                break;
            case Relation::EQ:
                t.at(r, art) = 1;
                t.basis()[r] = art++;
                break;
        }
    }

    auto is_art = [&](std::size_t c) { return c >= ns + n_slack; };

    if (n_art > 0) {
        std::vector<double> cost(n, 0.0);
        for (std::size_t c = ns + n_slack; c < n; ++c) cost[c] = -1;
        std::vector<bool> allowed(n, true);
        run_simplex(t, cost, allowed);
        double infeas = 0;
        for (std::size_t r = 0; r < t.rows(); ++r)
            if (is_art(t.basis()[r])) infeas += t.rhs(r);
        if (infeas > kFeasEps) return {LpStatus::Infeasible, 0, {}};
        // Pivot remaining zero-level artificials out; drop redundant rows.
        for (std::size_t r = 0; r < t.rows();) {
            if (!is_art(t.basis()[r])) {
                ++r;
                continue;
            }
            std::size_t pc = n;
            for (std::size_t c = 0; c < ns + n_slack; ++c) {
                if (std::abs(t.at(r, c)) > 1e-9) {
                    pc = c;
                    break;
                }
            }
            if (pc == n) {
                t.drop_row(r);
            } else {
                t.pivot(r, pc);
                ++r;
            }
        }
    }

    std::vector<double> cost(n, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        cost[i] = problem.objective[i];
        if (!problem.nonnegative) cost[d + i] = -problem.objective[i];
    }
    std::vector<bool> allowed(n, true);
    for (std::size_t c = ns + n_slack; c < n; ++c) allowed[c] = false;
    if (run_simplex(t, cost, allowed) == PhaseOutcome::Unbounded) return {LpStatus::Unbounded, 0, {}};

    std::vector<double> z(ns, 0.0);
    for (std::size_t r = 0; r < t.rows(); ++r) {
        if (t.basis()[r] < ns) z[t.basis()[r]] = std::max(0.0, t.rhs(r));
    }
    LpResult res{LpStatus::Optimal, 0, std::vector<double>(d)};
    for (std::size_t i = 0; i < d; ++i) {
        res.point[i] = problem.nonnegative ? z[i] : z[i] - z[d + i];
        res.objective += problem.objective[i] * res.point[i];
    }
    return res;
}

void dump_lp(std::ostream& os, const LpProblem& problem) {
    os << "maximize";
    for (double c : problem.objective) os << ' ' << c;
    os << '\n';
    for (const auto& row : problem.constraints) {
        for (double v : row.a) os << v << ' ';
        os << (row.relation == Relation::LE ? "<=" : row.relation == Relation::GE ? ">=" : "=") << ' '
           << row.b << '\n';
    }
    os << (problem.nonnegative ? "bounds x>=0\n" : "bounds free\n");
}

}  // namespace riga
