// Pairwise max regret, max regret and minimax regret over the admissible
// polytope, plus the current-solution query strategy (CSS).
//
// Regrets use the minimization convention: PMR(x, x') is the worst-case amount
// by which choosing x is worse than x' for some admissible parameter.

#ifndef RIGA_REGRET_HPP
#define RIGA_REGRET_HPP

#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "riga/polytope.hpp"

namespace riga {

/// Throws std::logic_error if the polytope is empty.
double pmr(const CostVector& x, const CostVector& other, const ParameterPolytope& p);

struct MaxRegret {
    double value = 0;
    std::size_t adversary = 0;
};

/// max over X of PMR(x, X[j]); ties favour the first index. X must be nonempty.
MaxRegret mr(const CostVector& x, std::span<const CostVector> pool, const ParameterPolytope& p);

struct MinimaxRegret {
    double value = 0;
    std::size_t argmin = 0;
    /// PMR(X[argmin], X[j]) for every j, clamped below at zero.
    std::vector<double> regrets;
    std::size_t lps = 0;  // LPs actually solved
};

/// min over x of MR(x, X); ties favour the first index. Pairs are pruned with
/// lower bounds from previously found optimal parameters, so the value and
/// the argmin row are exact while losing rows are cut short.
MinimaxRegret mmr(std::span<const CostVector> pool, const ParameterPolytope& p);

/// Unordered pair of cost vectors already put to the DM in the current phase.
using AskedPairs = std::set<std::pair<CostVector, CostVector>>;

void record_asked(AskedPairs& asked, const CostVector& a, const CostVector& b);
bool was_asked(const AskedPairs& asked, const CostVector& a, const CostVector& b);

/// (MMR argmin, its worst adversary). Adversaries with identical cost or an
/// already asked pair are skipped in favour of the next-best one; nullopt
/// means no informative pair is left.
std::optional<std::pair<std::size_t, std::size_t>> css_query(std::span<const CostVector> pool,
                                                             const MinimaxRegret& current,
                                                             const AskedPairs& asked);
std::optional<std::pair<std::size_t, std::size_t>> css_query(std::span<const CostVector> pool,
                                                             const ParameterPolytope& p,
                                                             const AskedPairs& asked = {});

}  // namespace riga

#endif  // RIGA_REGRET_HPP
