// Regret-based interactive genetic algorithm. Individuals are (parameter,
// solution) pairs: genetic operators act on preference parameters, a
// single-objective solver turns each parameter into a solution, and minimax
// regret elicitation picks the generation's best solution.

#ifndef RIGA_RIGA_HPP
#define RIGA_RIGA_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "riga/dm.hpp"
#include "riga/polytope.hpp"
#include "riga/problems.hpp"
#include "riga/regret.hpp"
#include "riga/trace.hpp"

namespace riga {

struct RigaConfig {
    std::size_t generations = 10;  // M
    std::size_t population = 20;   // S
    std::size_t survivors = 5;     // K
    double mutation_rate = 0.5;    // mu
    double sigma = 0.1;
    /// Stop level on MMR as a fraction of the phase-start MMR; 0 means exact.
    double delta = 0.0;
    Family family = Family::OWA;
    std::uint64_t seed = 1;
    SolverBudget budget;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    static RigaConfig knapsack_defaults();
    static RigaConfig tsp_defaults();
};

enum class Origin { Vertex, Sampled, Offspring, Genetic };

struct Pair {
    ParamPoint omega;  // empty for RIGA_S offspring
    Solution solution;
    Origin origin = Origin::Offspring;
};

PreferenceModel model_for(const ParameterPolytope& p, const ParamPoint& omega);

/// One pair per extreme point of `p` (solutions may repeat). Falls back to
/// dim+5 hit-and-run samples, with a warning, when enumeration is too large.
std::vector<Pair> initial_population(const Instance& inst, const ParameterPolytope& p, Rng& rng,
                                     std::vector<std::string>* warnings = nullptr, SolverBudget budget = {});

/// lambda * a + (1 - lambda) * b.
ParamPoint crossover(const ParamPoint& a, const ParamPoint& b, double lambda);
ParamPoint crossover(const ParamPoint& a, const ParamPoint& b, Rng& rng);

/// Gaussian mutation of one coordinate with probability `mu`, followed by
/// clamping, renormalization, family repair (OWA order) and, if a learned
/// constraint is still violated, bisection back towards `omega`.
ParamPoint mutate(const ParamPoint& omega, double mu, double sigma, Rng& rng, const ParameterPolytope& p);

struct PhaseResult {
    ParameterPolytope polytope;
    std::size_t x_star = 0;
    std::size_t queries = 0;
    double mmr_start = 0;
    double mmr_end = 0;
    bool exhausted = false;
    bool inconsistent = false;
};

/// Absolute tolerance standing in for "MMR is zero".
inline constexpr double kZeroRegret = 1e-6;

/// CSS elicitation over `pool` until normalized MMR <= delta. Queries and
/// the phase summary are appended to `trace`.
PhaseResult elicitation_phase(std::span<const CostVector> pool, const ParameterPolytope& p, DmOracle& dm,
                              double delta, RunTrace& trace, std::size_t generation = 0, std::size_t round = 0);

/// The k pairs whose costs are closest (Euclidean) to population[x_star]'s,
/// ties by position.
std::vector<Pair> select_k(const std::vector<Pair>& population, std::size_t x_star, std::size_t k);

struct RunResult {
    Solution recommendation;
    RunTrace trace;
    ParameterPolytope polytope;
};

RunResult riga_run(const Instance& inst, const RigaConfig& cfg, DmOracle& dm);
/// Selection by K successive elicitation phases, removing each winner.
RunResult riga_kcss_run(const Instance& inst, const RigaConfig& cfg, DmOracle& dm);
/// Genetic operators on solutions (one-point crossover, swap mutation).
RunResult riga_s_run(const Instance& inst, const RigaConfig& cfg, DmOracle& dm);

}  // namespace riga

#endif  // RIGA_RIGA_HPP
