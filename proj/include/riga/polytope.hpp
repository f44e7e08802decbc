// The admissible-parameter polytope: base constraints of a model family plus
// one learned half-space per preference statement.

#ifndef RIGA_POLYTOPE_HPP
#define RIGA_POLYTOPE_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "riga/lp.hpp"
#include "riga/preference.hpp"

namespace riga {

struct PreferenceStatement {
    CostVector preferred;
    CostVector other;
};

/// Thrown by enumerate_vertices when exhaustive active-set enumeration is
/// out of reach; callers should fall back to sample_points.
class EnumerationTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParameterPolytope {
public:
    /// Simplex (WS), ordered simplex (OWA, order by sense) or nonnegative
    /// Möbius masses summing to one (Choquet2 belief functions).
    static ParameterPolytope initial(Family family, Sense sense, std::size_t objectives);

    std::size_t dim() const { return dim_; }
    std::size_t objectives() const { return objectives_; }
    Family family() const { return family_; }
    Sense sense() const { return sense_; }
    const std::vector<LinearConstraint>& base() const { return base_; }
    const std::vector<LinearConstraint>& learned() const { return learned_; }
    std::vector<LinearConstraint> constraints() const;

    double max_violation(const ParamPoint& w) const;
    bool contains(const ParamPoint& w, double tol = 1e-7) const;

    /// New polytope with `c` appended to the learned constraints, or nullopt
    /// when the intersection is empty.
    std::optional<ParameterPolytope> with(const LinearConstraint& c) const;

    LpResult maximize(const std::vector<double>& objective) const;

    /// Recomputed from scratch by LP.
    bool feasible() const;

private:
    ParameterPolytope(Family f, Sense s, std::size_t n, std::size_t dim)
        : family_(f), sense_(s), objectives_(n), dim_(dim) {}
    LpProblem as_lp(const std::vector<double>& objective) const;

    Family family_;
    Sense sense_;
    std::size_t objectives_;
    std::size_t dim_;
    std::vector<LinearConstraint> base_;
    std::vector<LinearConstraint> learned_;
};

/// sign * (phi(preferred) - phi(other)) · w <= 0
LinearConstraint statement_to_constraint(const PreferenceStatement& s, Family family, Sense sense);

inline constexpr std::size_t kMaxEnumerationDim = 25;

/// All extreme points, deduplicated within 1e-7, sorted lexicographically.
/// Throws EnumerationTooLarge when dim > 25 or the active-set search space is
/// too big.
std::vector<ParamPoint> enumerate_vertices(const ParameterPolytope& p);

/// Approximately uniform points from a hit-and-run walk.
std::vector<ParamPoint> sample_points(const ParameterPolytope& p, std::size_t count, Rng& rng,
                                      std::size_t burn_in = 1000);

}  // namespace riga

#endif  // RIGA_POLYTOPE_HPP
