#include "riga/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace riga {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

PreferenceModel gen_hidden(Family family, std::size_t objectives, Sense sense, std::uint64_t seed) {
    Rng rng(seed);
    Monotone order = family == Family::OWA ? default_owa_monotone(sense) : Monotone::None;
    ParamPoint w = sample_simplex(parameter_dim(family, objectives), rng, order);
    return PreferenceModel::from_coords(family, sense, w);
}

RunResult ils_run(const Instance& inst, Family family, DmOracle& dm, const IlsConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const Sense sense = sense_of(inst);
    const std::size_t n = objectives_of(inst);
    ParameterPolytope polytope = ParameterPolytope::initial(family, sense, n);
    RunTrace trace;
    trace.method = "ils";
    Rng rng(cfg.seed);

    // Starting candidates.
    std::vector<Solution> starts;
    if (std::holds_alternative<KnapsackInstance>(inst)) {
        OwaWeights mean{std::vector<double>(n, 1.0 / static_cast<double>(n)), Monotone::None};
        starts.push_back(solve_fixed(inst, PreferenceModel(Family::WS, mean, sense), cfg.budget));
    } else {
        std::set<CostVector> seen;
        for (std::size_t i = 0; i < std::max<std::size_t>(1, cfg.starts); ++i) {
            Monotone order = family == Family::OWA ? default_owa_monotone(sense) : Monotone::None;
            ParamPoint w = sample_simplex(polytope.dim(), rng, order);
            Solution s = solve_fixed(inst, PreferenceModel::from_coords(family, sense, w), cfg.budget);
            if (seen.insert(s.cost).second) starts.push_back(std::move(s));
        }
    }
    std::vector<CostVector> pool;
    for (const auto& s : starts) pool.push_back(s.cost);
    auto first = elicitation_phase(pool, polytope, dm, cfg.delta_start, trace, 0, 0);
    polytope = first.polytope;
    Solution current = starts[first.x_star];
    trace.inconsistent = first.inconsistent;

    for (std::size_t move = 1; move <= cfg.max_moves && !trace.inconsistent; ++move) {
        auto neigh = neighborhood(inst, current);
        std::vector<CostVector> costs{current.cost};
        for (const auto& s : neigh) costs.push_back(s.cost);
        // Current solution first, then the non-dominated neighbours.
        std::vector<const Solution*> cand{&current};
        std::vector<CostVector> cand_costs{current.cost};
        for (std::size_t i : pareto_indices(costs, sense)) {
            if (i == 0 || costs[i] == current.cost) continue;
            cand.push_back(&neigh[i - 1]);
            cand_costs.push_back(costs[i]);
        }
        if (cand.size() == 1) break;
        auto phase = elicitation_phase(cand_costs, polytope, dm, cfg.delta_move, trace, move, 0);
        polytope = phase.polytope;
        if (phase.inconsistent) trace.inconsistent = true;
        if (phase.x_star == 0) break;  // local optimum: no neighbour beats the incumbent's regret
        current = *cand[phase.x_star];
    }
    trace.recommendation = current;
    trace.wall_time_s = seconds_since(t0);
    return {current, std::move(trace), std::move(polytope)};
}

RunResult two_phase_run(const Instance& inst, Family family, DmOracle& dm, const TwoPhaseConfig& cfg) {
    std::vector<Solution> pareto = cfg.pareto ? *cfg.pareto : enumerate_pareto_small(inst);
    if (pareto.empty()) throw std::invalid_argument("two_phase_run: empty Pareto set");
    if (cfg.subsample > 0 && pareto.size() > cfg.subsample) {
        Rng rng(cfg.seed);
        std::vector<std::size_t> idx(pareto.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(cfg.subsample);
        std::sort(idx.begin(), idx.end());
        std::vector<Solution> kept;
        for (std::size_t i : idx) kept.push_back(std::move(pareto[i]));
        pareto = std::move(kept);
    }
    // Timing starts after the Pareto set is available.
    const auto t0 = std::chrono::steady_clock::now();
    ParameterPolytope polytope = ParameterPolytope::initial(family, sense_of(inst), objectives_of(inst));
    RunTrace trace;
    trace.method = "two_phase";
    trace.warnings.push_back("pareto set size " + std::to_string(pareto.size()));
    std::vector<CostVector> pool;
    for (const auto& s : pareto) pool.push_back(s.cost);
    auto phase = elicitation_phase(pool, polytope, dm, cfg.delta, trace, 0, 0);
    trace.inconsistent = phase.inconsistent;
    trace.recommendation = pareto[phase.x_star];
    trace.wall_time_s = seconds_since(t0);
    return {pareto[phase.x_star], std::move(trace), std::move(phase.polytope)};
}

}  // namespace riga
