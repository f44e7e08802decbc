#include "riga/riga.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace riga {

namespace {

enum class Variant { Standard, Kcss, SolutionSpace };

std::vector<CostVector> costs_of(const std::vector<Pair>& pop) {
    std::vector<CostVector> out;
    out.reserve(pop.size());
    for (const auto& p : pop) out.push_back(p.solution.cost);
    return out;
}

std::size_t distinct_count(std::span<const CostVector> pool) {
    return std::set<CostVector>(pool.begin(), pool.end()).size();
}

void require(bool ok, const char* what) {
    if (!ok) throw std::logic_error(what);
}

// Feasible interior-ish anchor: centroid of coordinate-extreme LP optima.
ParamPoint polytope_anchor(const ParameterPolytope& p) {
    const std::size_t d = p.dim();
    ParamPoint c(d, 0.0);
    std::size_t got = 0;
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> obj(d, 0.0);
        obj[i] = 1;
        auto r = p.maximize(obj);
        if (r.status != LpStatus::Optimal) continue;
        for (std::size_t j = 0; j < d; ++j) c[j] += r.point[j];
        ++got;
    }
    require(got > 0, "anchor requested for an empty polytope");
    for (double& v : c) v /= static_cast<double>(got);
    return c;
}

// Moves `omega` back into `p` along the segment towards `anchor`.
ParamPoint pull_inside(const ParamPoint& omega, const ParamPoint& anchor, const ParameterPolytope& p) {
    if (p.contains(omega, 1e-9)) return omega;
    double lo = 0, hi = 1;  // fraction of the way from anchor to omega
    for (int step = 0; step < 60; ++step) {
        double mid = 0.5 * (lo + hi);
        ParamPoint x(omega.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = anchor[i] + mid * (omega[i] - anchor[i]);
        (p.contains(x, 1e-9) ? lo : hi) = mid;
    }
    ParamPoint x(omega.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = anchor[i] + lo * (omega[i] - anchor[i]);
    return x;
}

RunResult run_variant(const Instance& inst, const RigaConfig& cfg, DmOracle& dm, Variant variant) {
    cfg.validate();
    const auto started = std::chrono::steady_clock::now();
    Rng rng(cfg.seed);
    ParameterPolytope polytope = ParameterPolytope::initial(cfg.family, sense_of(inst), objectives_of(inst));
    RunTrace trace;
    trace.method = variant == Variant::Standard ? "riga" : variant == Variant::Kcss ? "riga_kcss" : "riga_s";

    std::vector<Pair> pop = initial_population(inst, polytope, rng, &trace.warnings, cfg.budget);
    const std::size_t widest = std::max(cfg.population, pop.size());
    std::size_t x_star = 0;

    for (std::size_t gen = 1; gen <= cfg.generations; ++gen) {
        // Offspring fill the population up to S.
        const std::size_t parents = pop.size();
        while (pop.size() < cfg.population) {
            std::uniform_int_distribution<std::size_t> pick(0, parents - 1);
            std::size_t i = pick(rng), j = i;
            if (parents > 1)
                while (j == i) j = pick(rng);
            if (variant == Variant::SolutionSpace) {
                Solution child = one_point_crossover(inst, pop[i].solution, pop[j].solution, rng);
                if (std::uniform_real_distribution<double>(0, 1)(rng) < cfg.mutation_rate)
                    child = swap_mutation(inst, child, rng);
                pop.push_back({{}, std::move(child), Origin::Genetic});
            } else {
                ParamPoint omega = crossover(pop[i].omega, pop[j].omega, rng);
                require(polytope.contains(omega, 1e-7), "crossover left the admissible polytope");
                omega = mutate(omega, cfg.mutation_rate, cfg.sigma, rng, polytope);
                Solution s = solve_fixed(inst, model_for(polytope, omega), cfg.budget);
                pop.push_back({std::move(omega), std::move(s), Origin::Offspring});
            }
        }
        for (const auto& p : pop) require(is_feasible(inst, p.solution), "infeasible solution in population");
        if (variant != Variant::SolutionSpace) {
            for (const auto& p : pop)
                require(polytope.contains(p.omega, 1e-7), "population parameter outside the admissible polytope");
        }

        auto pool = costs_of(pop);
        auto phase = elicitation_phase(pool, polytope, dm, cfg.delta, trace, gen, 0);
        polytope = phase.polytope;
        x_star = phase.x_star;
        require(phase.queries <= pool.size() * (pool.size() - 1) / 2, "phase exceeded the pairwise query bound");
        if (phase.inconsistent) {
            trace.inconsistent = true;
            break;
        }

        if (gen == cfg.generations) break;

        std::vector<Pair> next;
        if (variant == Variant::Kcss) {
            // K successive CSS selections; each winner (and its duplicates) leaves the pool.
            std::vector<std::size_t> remaining;
            std::set<CostVector> seen;
            for (std::size_t i = 0; i < pop.size(); ++i)
                if (seen.insert(pop[i].solution.cost).second) remaining.push_back(i);
            // The first winner is the phase above's x*.
            std::size_t winner = x_star;
            for (std::size_t round = 1;; ++round) {
                next.push_back(pop[winner]);
                remaining.erase(std::remove_if(remaining.begin(), remaining.end(),
                                               [&](std::size_t i) { return pop[i].solution.cost == pop[winner].solution.cost; }),
                                remaining.end());
                if (next.size() >= cfg.survivors || remaining.empty()) break;
                std::vector<CostVector> rest;
                for (std::size_t i : remaining) rest.push_back(pop[i].solution.cost);
                auto sub = elicitation_phase(rest, polytope, dm, cfg.delta, trace, gen, round);
                polytope = sub.polytope;
                if (sub.inconsistent) {
                    trace.inconsistent = true;
                    break;
                }
                winner = remaining[sub.x_star];
            }
            if (trace.inconsistent) break;
            // x* stays addressable as next[0].
        } else {
            next = select_k(pop, x_star, cfg.survivors);
        }

        if (variant != Variant::SolutionSpace) {
            // Survivors bred under an older polytope are pulled back inside it
            // so crossover keeps producing admissible parameters.
            std::optional<ParamPoint> anchor;
            for (auto& p : next) {
                if (polytope.contains(p.omega, 1e-9)) continue;
                if (!anchor) anchor = polytope_anchor(polytope);
                p.omega = pull_inside(p.omega, *anchor, polytope);
            }
        }
        pop = std::move(next);
    }

    std::size_t total = trace.accepted_queries();
    require(total <= cfg.generations * widest * widest, "run exceeded the M*S^2 query bound");
    trace.recommendation = pop[x_star].solution;
    trace.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return {pop[x_star].solution, std::move(trace), std::move(polytope)};
}

}  // namespace

void RigaConfig::validate() const {
    if (generations < 1) throw std::invalid_argument("generations (M) must be >= 1");
    if (population < 2) throw std::invalid_argument("population (S) must be >= 2");
    if (survivors < 1 || survivors >= population)
        throw std::invalid_argument("survivors (K) must satisfy 1 <= K < S");
    if (!(mutation_rate >= 0 && mutation_rate <= 1)) throw std::invalid_argument("mutation_rate (mu) must be in [0,1]");
    if (!(sigma >= 0)) throw std::invalid_argument("sigma must be >= 0");
    if (!(delta >= 0)) throw std::invalid_argument("delta must be >= 0");
}

RigaConfig RigaConfig::knapsack_defaults() {
    RigaConfig c;
    c.generations = 10;
    c.population = 20;
    c.survivors = 5;
    c.mutation_rate = 0.5;
    return c;
}

RigaConfig RigaConfig::tsp_defaults() {
    RigaConfig c;
    c.generations = 20;
    c.population = 40;
    c.survivors = 5;
    c.mutation_rate = 0.5;
    return c;
}

std::size_t RunTrace::accepted_queries() const {
    return static_cast<std::size_t>(
        std::count_if(queries.begin(), queries.end(), [](const QueryRecord& q) { return !q.rejected; }));
}

PreferenceModel model_for(const ParameterPolytope& p, const ParamPoint& omega) {
    ParamPoint w = omega;
    for (double& v : w) v = std::max(0.0, v);
    double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= sum;
    return PreferenceModel::from_coords(p.family(), p.sense(), w);
}

std::vector<Pair> initial_population(const Instance& inst, const ParameterPolytope& p, Rng& rng,
                                     std::vector<std::string>* warnings, SolverBudget budget) {
    std::vector<ParamPoint> points;
    Origin origin = Origin::Vertex;
    try {
        points = enumerate_vertices(p);
    } catch (const EnumerationTooLarge& e) {
        points = sample_points(p, p.dim() + 5, rng);
        origin = Origin::Sampled;
        if (warnings) warnings->push_back(std::string("initial population sampled: ") + e.what());
    }
    std::vector<Pair> pop;
    for (auto& w : points) {
        Solution s = solve_fixed(inst, model_for(p, w), budget);
        pop.push_back({std::move(w), std::move(s), origin});
    }
    return pop;
}

ParamPoint crossover(const ParamPoint& a, const ParamPoint& b, double lambda) {
    if (a.size() != b.size()) throw std::invalid_argument("crossover: dimension mismatch");
    ParamPoint out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = lambda * a[i] + (1 - lambda) * b[i];
    return out;
}

ParamPoint crossover(const ParamPoint& a, const ParamPoint& b, Rng& rng) {
    return crossover(a, b, std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

ParamPoint mutate(const ParamPoint& omega, double mu, double sigma, Rng& rng, const ParameterPolytope& p) {
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) >= mu) return omega;
    ParamPoint m = omega;
    std::size_t j = std::uniform_int_distribution<std::size_t>(0, m.size() - 1)(rng);
    m[j] += std::normal_distribution<double>(0.0, sigma)(rng);
    for (double& v : m) v = std::max(0.0, v);
    double sum = std::accumulate(m.begin(), m.end(), 0.0);
    if (sum <= 0) return omega;
    for (double& v : m) v /= sum;
    if (p.family() == Family::OWA) {
        if (default_owa_monotone(p.sense()) == Monotone::NonDecreasing) std::sort(m.begin(), m.end());
        else std::sort(m.begin(), m.end(), std::greater<>());
    }
    if (p.contains(m, 1e-9)) return m;
    // Bisection towards the (feasible) parent.
    double lo = 0, hi = 1;
    for (int step = 0; step < 30; ++step) {
        double mid = 0.5 * (lo + hi);
        (p.contains(crossover(m, omega, mid), 1e-9) ? lo : hi) = mid;
    }
    return crossover(m, omega, lo);
}

PhaseResult elicitation_phase(std::span<const CostVector> pool, const ParameterPolytope& p, DmOracle& dm,
                              double delta, RunTrace& trace, std::size_t generation, std::size_t round) {
    if (pool.empty()) throw std::invalid_argument("elicitation_phase: empty pool");
    PhaseResult res{p};
    PhaseRecord rec;
    rec.generation = generation;
    rec.round = round;
    rec.population.assign(pool.begin(), pool.end());
    const std::size_t bound = [&] {
        std::size_t u = distinct_count(pool);
        return u * (u - 1) / 2;
    }();

    AskedPairs asked;
    bool first = true;
    for (;;) {
        auto current = mmr(pool, res.polytope);
        res.x_star = current.argmin;
        res.mmr_end = current.value;
        if (first) {
            res.mmr_start = current.value;
            first = false;
        }
        const double start = res.mmr_start;
        if (start <= kZeroRegret) break;
        if (delta == 0 ? current.value <= kZeroRegret : current.value <= delta * start) break;

        auto q = css_query(pool, current, asked);
        if (!q) {
            res.exhausted = true;
            break;
        }
        const CostVector& a = pool[q->first];
        const CostVector& b = pool[q->second];
        QueryContext ctx{generation, trace.queries.size(), current.value, current.value / start};
        Answer ans = dm.answer(a, b, ctx);
        record_asked(asked, a, b);
        PreferenceStatement st = ans == Answer::PrefersA ? PreferenceStatement{a, b} : PreferenceStatement{b, a};
        auto next = res.polytope.with(statement_to_constraint(st, res.polytope.family(), res.polytope.sense()));
        trace.queries.push_back({generation, a, b, ans, current.value, !next.has_value()});
        if (!next) {
            res.inconsistent = true;
            trace.warnings.push_back("answer rejected: it contradicts earlier answers");
            break;
        }
        res.polytope = std::move(*next);
        ++res.queries;
        require(res.queries <= bound, "phase exceeded the pairwise query bound");
    }
    rec.mmr_start = res.mmr_start;
    rec.mmr_end = res.mmr_end;
    rec.queries = res.queries;
    rec.x_star = pool[res.x_star];
    rec.exhausted = res.exhausted;
    rec.inconsistent = res.inconsistent;
    trace.phases.push_back(std::move(rec));
    return res;
}

std::vector<Pair> select_k(const std::vector<Pair>& population, std::size_t x_star, std::size_t k) {
    if (x_star >= population.size()) throw std::invalid_argument("select_k: x* out of range");
    const CostVector& ref = population[x_star].solution.cost;
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t i = 0; i < population.size(); ++i) {
        double s = 0;
        for (std::size_t j = 0; j < ref.size(); ++j) {
            double d = population[i].solution.cost[j] - ref[j];
            s += d * d;
        }
        // x* itself sorts first among the zero-distance pairs.
        dist.push_back({std::sqrt(s), i == x_star ? 0 : i + 1});
    }
    std::sort(dist.begin(), dist.end());
    std::vector<Pair> out;
    for (std::size_t i = 0; i < std::min(k, dist.size()); ++i) {
        std::size_t idx = dist[i].second == 0 ? x_star : dist[i].second - 1;
        out.push_back(population[idx]);
    }
    return out;
}

RunResult riga_run(const Instance& inst, const RigaConfig& cfg, DmOracle& dm) {
    return run_variant(inst, cfg, dm, Variant::Standard);
}

RunResult riga_kcss_run(const Instance& inst, const RigaConfig& cfg, DmOracle& dm) {
    return run_variant(inst, cfg, dm, Variant::Kcss);
}

RunResult riga_s_run(const Instance& inst, const RigaConfig& cfg, DmOracle& dm) {
    return run_variant(inst, cfg, dm, Variant::SolutionSpace);
}

}  // namespace riga
