#include "riga/regret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace riga {

namespace {

constexpr std::size_t kMaxWitnesses = 64;

double tie_tolerance(double v) { return 1e-9 * (1.0 + std::abs(v)); }

// Values must drop strictly below this to beat `best` (ties keep the earlier).
double improvement_bar(double best) {
    return std::isfinite(best) ? best - tie_tolerance(best) : best;
}

std::vector<double> loss_direction(const std::vector<double>& phi_x, const std::vector<double>& phi_o,
                                   Sense sense) {
    double s = loss_sign(sense);
    std::vector<double> dir(phi_x.size());
    for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = s * (phi_x[i] - phi_o[i]);
    return dir;
}

double solve_pmr(const std::vector<double>& dir, const ParameterPolytope& p, ParamPoint* argmax = nullptr) {
    auto res = p.maximize(dir);
    if (res.status != LpStatus::Optimal)
        throw std::logic_error("regret computed over an empty parameter polytope");
    if (argmax) *argmax = std::move(res.point);
    return res.objective;
}

// x is at least as good as y on every objective.
bool weakly_better(const CostVector& x, const CostVector& y, Sense sense) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (sense == Sense::Minimize ? x[j] > y[j] : x[j] < y[j]) return false;
    }
    return true;
}

}  // namespace

double pmr(const CostVector& x, const CostVector& other, const ParameterPolytope& p) {
    if (x.size() != other.size() || x.size() != p.objectives())
        throw std::invalid_argument("pmr: dimension mismatch");
    if (x == other) return 0.0;
    auto dir = loss_direction(featurize(p.family(), x), featurize(p.family(), other), p.sense());
    return solve_pmr(dir, p);
}

MaxRegret mr(const CostVector& x, std::span<const CostVector> pool, const ParameterPolytope& p) {
    if (pool.empty()) throw std::invalid_argument("mr: empty solution set");
    std::vector<double> values(pool.size());
    for (std::size_t j = 0; j < pool.size(); ++j) values[j] = pmr(x, pool[j], p);
    double best = *std::max_element(values.begin(), values.end());
    MaxRegret out{best, 0};
    for (std::size_t j = 0; j < pool.size(); ++j) {
        if (values[j] >= best - tie_tolerance(best)) {
            out.adversary = j;
            break;
        }
    }
    return out;
}

MinimaxRegret mmr(std::span<const CostVector> pool, const ParameterPolytope& p) {
    if (pool.empty()) throw std::invalid_argument("mmr: empty solution set");
    // Collapse duplicates: regret between equal vectors is zero.
    std::vector<CostVector> uniq;
    std::vector<std::size_t> uidx(pool.size());
    std::map<CostVector, std::size_t> seen;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        auto [it, inserted] = seen.emplace(pool[i], uniq.size());
        if (inserted) uniq.push_back(pool[i]);
        uidx[i] = it->second;
    }
    const std::size_t u = uniq.size();
    std::vector<std::vector<double>> phi(u);
    for (std::size_t i = 0; i < u; ++i) phi[i] = featurize(p.family(), uniq[i]);

    std::vector<ParamPoint> witnesses;
    std::size_t next_witness = 0;
    MinimaxRegret out;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_u = 0;
    std::vector<double> best_row;

    for (std::size_t a = 0; a < u; ++a) {
        std::vector<double> row(u, 0.0);
        bool cut = false;
        for (std::size_t b = 0; b < u && !cut; ++b) {
            if (a == b || weakly_better(uniq[a], uniq[b], p.sense())) continue;
            auto dir = loss_direction(phi[a], phi[b], p.sense());
            const double bar = improvement_bar(best);
            double lower = -std::numeric_limits<double>::infinity();
            for (const auto& w : witnesses) {
                double v = 0;
                for (std::size_t i = 0; i < w.size(); ++i) v += dir[i] * w[i];
                lower = std::max(lower, v);
            }
            if (lower >= bar) {
                cut = true;
                break;
            }
            ParamPoint argmax;
            double v = solve_pmr(dir, p, &argmax);
            ++out.lps;
            if (witnesses.size() < kMaxWitnesses) {
                witnesses.push_back(std::move(argmax));
            } else {
                witnesses[next_witness] = std::move(argmax);
                next_witness = (next_witness + 1) % kMaxWitnesses;
            }
            row[b] = std::max(0.0, v);
            if (v >= bar) cut = true;
        }
        if (cut) continue;
        double value = *std::max_element(row.begin(), row.end());
        if (value < improvement_bar(best)) {
            best = value;
            best_u = a;
            best_row = std::move(row);
        }
    }

    out.value = best;
    out.regrets.resize(pool.size());
    bool argmin_set = false;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        out.regrets[i] = best_row[uidx[i]];
        if (!argmin_set && uidx[i] == best_u) {
            out.argmin = i;
            argmin_set = true;
        }
    }
    return out;
}

void record_asked(AskedPairs& asked, const CostVector& a, const CostVector& b) {
    asked.insert(a < b ? std::pair{a, b} : std::pair{b, a});
}

bool was_asked(const AskedPairs& asked, const CostVector& a, const CostVector& b) {
    return asked.count(a < b ? std::pair{a, b} : std::pair{b, a}) > 0;
}

std::optional<std::pair<std::size_t, std::size_t>> css_query(std::span<const CostVector> pool,
                                                             const MinimaxRegret& current,
                                                             const AskedPairs& asked) {
    const std::size_t x = current.argmin;
    std::vector<bool> open(pool.size(), true);
    for (;;) {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pool.size(); ++j)
            if (open[j]) top = std::max(top, current.regrets[j]);
        if (!(top > 1e-9)) return std::nullopt;
        // Among the (tolerance-)tied best adversaries take the first usable one.
        for (std::size_t j = 0; j < pool.size(); ++j) {
            if (!open[j] || current.regrets[j] < top - tie_tolerance(top)) continue;
            open[j] = false;
            if (pool[j] == pool[x] || was_asked(asked, pool[x], pool[j])) continue;
            return std::pair{x, j};
        }
    }
}

std::optional<std::pair<std::size_t, std::size_t>> css_query(std::span<const CostVector> pool,
                                                             const ParameterPolytope& p,
                                                             const AskedPairs& asked) {
    if (pool.size() < 2) return std::nullopt;
    return css_query(pool, mmr(pool, p), asked);
}

}  // namespace riga
