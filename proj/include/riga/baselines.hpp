// Hidden-preference generation for simulated decision makers, and the two
// comparison methods: iterated local search with regret-based moves, and
// Pareto-set-then-elicit.

#ifndef RIGA_BASELINES_HPP
#define RIGA_BASELINES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "riga/riga.hpp"

namespace riga {

/// WS: uniform simplex; OWA: uniform simplex ordered for `sense`; Choquet2:
/// uniform simplex over the nonnegative Möbius masses (a belief function).
PreferenceModel gen_hidden(Family family, std::size_t objectives, Sense sense, std::uint64_t seed);

struct IlsConfig {
    double delta_start = 0.1;
    double delta_move = 0.4;
    std::size_t starts = 100;
    std::size_t max_moves = 1000;
    std::uint64_t seed = 1;
    SolverBudget budget;
};

RunResult ils_run(const Instance& inst, Family family, DmOracle& dm, const IlsConfig& cfg = {});

struct TwoPhaseConfig {
    double delta = 0.0;
    /// Caller-supplied (approximate) Pareto set; enumerated exactly otherwise.
    std::optional<std::vector<Solution>> pareto;
    /// Keep at most this many Pareto points (0: all), chosen uniformly.
    std::size_t subsample = 0;
    std::uint64_t seed = 1;
};

RunResult two_phase_run(const Instance& inst, Family family, DmOracle& dm, const TwoPhaseConfig& cfg = {});

}  // namespace riga

#endif  // RIGA_BASELINES_HPP
