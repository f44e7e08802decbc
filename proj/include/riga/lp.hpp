// Dense two-phase simplex with Bland's anti-cycling rule. Problems here are
// tiny (tens of variables, a few hundred rows), so a textbook tableau is
// both fast enough and fully deterministic.

#ifndef RIGA_LP_HPP
#define RIGA_LP_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace riga {

enum class Relation { LE, GE, EQ };

/// a · x {<=, >=, =} b
struct LinearConstraint {
    std::vector<double> a;
    double b = 0;
    Relation relation = Relation::LE;

    /// Signed violation: positive when `x` breaks the constraint.
    double violation(const std::vector<double>& x) const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0;
    std::vector<double> point;
};

struct LpProblem {
    std::vector<double> objective;  // maximized
    std::vector<LinearConstraint> constraints;
    bool nonnegative = true;  // x >= 0 implied; otherwise variables are free
};

LpResult lp_solve(const LpProblem& problem);

/// Plain-text dump of the problem rows, one constraint per line.
void dump_lp(std::ostream& os, const LpProblem& problem);

std::string to_string(LpStatus s);

}  // namespace riga

#endif  // RIGA_LP_HPP
