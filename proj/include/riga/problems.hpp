// Multi-objective combinatorial problem instances, their single-objective
// solvers under a fixed preference model, and exhaustive oracles for small
// sizes.

#ifndef RIGA_PROBLEMS_HPP
#define RIGA_PROBLEMS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "riga/preference.hpp"

namespace riga {

/// Multi-objective knapsack with unit item weights: choose at most
/// `capacity` items, maximize each summed value coordinate.
struct KnapsackInstance {
    std::vector<std::vector<int>> items;  // items[i][j]: value of item i on objective j
    int capacity = 0;
    std::uint64_t seed = 0;

    std::size_t size() const { return items.size(); }
    std::size_t objectives() const { return items.empty() ? 0 : items.front().size(); }
    friend bool operator==(const KnapsackInstance&, const KnapsackInstance&) = default;
};

/// Symmetric multi-objective TSP, one integer cost matrix per objective.
struct TspInstance {
    std::size_t cities = 0;
    std::vector<std::vector<int>> layers;  // layers[j][a * cities + b]
    std::uint64_t seed = 0;

    std::size_t size() const { return cities; }
    std::size_t objectives() const { return layers.size(); }
    int cost(std::size_t layer, std::size_t a, std::size_t b) const { return layers[layer][a * cities + b]; }
    friend bool operator==(const TspInstance&, const TspInstance&) = default;
};

/// A finite feasible set given directly by its cost vectors.
struct ExplicitInstance {
    std::vector<CostVector> points;
    Sense sense = Sense::Minimize;

    std::size_t size() const { return points.size(); }
    std::size_t objectives() const { return points.empty() ? 0 : points.front().size(); }
    friend bool operator==(const ExplicitInstance&, const ExplicitInstance&) = default;
};

using Instance = std::variant<KnapsackInstance, TspInstance, ExplicitInstance>;

Sense sense_of(const Instance& inst);
std::size_t objectives_of(const Instance& inst);
std::size_t size_of(const Instance& inst);
std::string problem_name(const Instance& inst);

/// Encoding: sorted item indices (knapsack), city permutation (TSP) or a
/// single point index (explicit).
struct Solution {
    std::vector<int> encoding;
    CostVector cost;
    bool budget_exhausted = false;
};

CostVector evaluate(const Instance& inst, const std::vector<int>& encoding);
bool is_feasible(const Instance& inst, const Solution& s);

KnapsackInstance gen_knapsack(std::size_t items, std::size_t objectives, std::uint64_t seed);
TspInstance gen_tsp(std::size_t cities, std::size_t objectives, std::uint64_t seed);

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line(line) {}
    std::size_t line;
};

/// Plain-text format: header `problem n size seed`, then one line of n
/// integers per knapsack item, or n blocks of size x size symmetric integer
/// matrices for TSP. `explicit` / `explicit_max` carry one cost vector per line.
void save_instance(std::ostream& os, const Instance& inst);
Instance load_instance(std::istream& is);

struct SolverBudget {
    std::size_t swap_evaluations = 0;  // 0: 50 * items
    std::size_t two_opt_sweeps = 30;
};

/// (Near-)optimal solution for the scalarized problem f_model.
Solution solve_fixed(const Instance& inst, const PreferenceModel& model, SolverBudget budget = {});

/// The construction heuristic solve_fixed starts its local search from.
Solution greedy_seed(const Instance& inst, const PreferenceModel& model);

class SizeGuardExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Calls `fn(encoding, cost)` for every candidate solution (full-capacity
/// subsets for knapsack, distinct undirected tours for TSP). Throws
/// SizeGuardExceeded beyond C(items, capacity) > 1e7 or 10 cities.
void for_each_solution(const Instance& inst,
                       const std::function<void(const std::vector<int>&, const CostVector&)>& fn);

/// Exact f_model-optimum by exhaustive enumeration; ties keep the first found.
Solution solve_exact_small(const Instance& inst, const PreferenceModel& model);

/// Non-dominated subset in input order; duplicates kept once (first).
std::vector<CostVector> pareto_filter(std::span<const CostVector> points, Sense sense);
/// Indices (ascending) of the points pareto_filter keeps.
std::vector<std::size_t> pareto_indices(std::span<const CostVector> points, Sense sense);

std::vector<Solution> enumerate_pareto_small(const Instance& inst);

/// Single-swap (knapsack), 2-opt (TSP) or all-other-points (explicit) moves.
std::vector<Solution> neighborhood(const Instance& inst, const Solution& s);

/// Solution-space operators used by the RIGA_S ablation.
Solution one_point_crossover(const Instance& inst, const Solution& a, const Solution& b, Rng& rng);
Solution swap_mutation(const Instance& inst, const Solution& s, Rng& rng);

}  // namespace riga

#endif  // RIGA_PROBLEMS_HPP
