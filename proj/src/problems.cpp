#include "riga/problems.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace riga {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

// True when `candidate` is a strictly better scalarized value than `incumbent`.
bool improves(double candidate, double incumbent, Sense sense) {
    return loss_sign(sense) * (candidate - incumbent) < -1e-12 * (1.0 + std::abs(incumbent));
}

CostVector knapsack_cost(const KnapsackInstance& k, const std::vector<int>& chosen) {
    std::vector<double> sum(k.objectives(), 0.0);
    for (int i : chosen)
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += k.items[i][j];
    return CostVector(std::move(sum));
}

CostVector tour_cost(const TspInstance& t, const std::vector<int>& tour) {
    std::vector<double> sum(t.objectives(), 0.0);
    for (std::size_t p = 0; p < tour.size(); ++p) {
        std::size_t a = tour[p], b = tour[(p + 1) % tour.size()];
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += t.cost(j, a, b);
    }
    return CostVector(std::move(sum));
}

double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    double r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

Solution solve_knapsack(const KnapsackInstance& k, const PreferenceModel& model, const SolverBudget& budget,
                        bool local_search) {
    const std::size_t items = k.size(), n = k.objectives();
    const std::size_t cap = static_cast<std::size_t>(k.capacity);
    std::vector<bool> in(items, false);
    std::vector<double> sum(n, 0.0);
    auto with_delta = [&](int add, int drop) {
        std::vector<double> v = sum;
        for (std::size_t j = 0; j < n; ++j) {
            if (add >= 0) v[j] += k.items[add][j];
            if (drop >= 0) v[j] -= k.items[drop][j];
        }
        return v;
    };

    if (model.family() == Family::WS) {
        // Linear objective with unit weights: the top-capacity items are optimal.
        const auto& w = std::get<OwaWeights>(model.params()).w;
        std::vector<std::pair<double, int>> score(items);
        for (std::size_t i = 0; i < items; ++i) {
            double s = 0;
            for (std::size_t j = 0; j < n; ++j) s += w[j] * k.items[i][j];
            score[i] = {s, static_cast<int>(i)};
        }
        std::stable_sort(score.begin(), score.end(), [](auto& a, auto& b) { return a.first > b.first; });
        std::vector<int> chosen;
        for (std::size_t i = 0; i < cap; ++i) chosen.push_back(score[i].second);
        std::sort(chosen.begin(), chosen.end());
        return {chosen, knapsack_cost(k, chosen)};
    }

    // Greedy: repeatedly add the item that maximizes the aggregated value.
    for (std::size_t step = 0; step < cap; ++step) {
        int best = -1;
        double best_val = 0;
        for (std::size_t i = 0; i < items; ++i) {
            if (in[i]) continue;
            double v = model.evaluate(CostVector(with_delta(static_cast<int>(i), -1)));
            if (best < 0 || v > best_val + 1e-12 * (1.0 + std::abs(best_val))) {
                best = static_cast<int>(i);
                best_val = v;
            }
        }
        in[best] = true;
        sum = with_delta(best, -1);
    }

    bool exhausted = false;
    if (local_search) {
        const std::size_t limit = budget.swap_evaluations ? budget.swap_evaluations : 50 * items;
        std::size_t evals = 0;
        double current = model.evaluate(CostVector(sum));
        bool improved = true;
        while (improved && !exhausted) {
            improved = false;
            for (std::size_t out = 0; out < items && !improved && !exhausted; ++out) {
                if (!in[out]) continue;
                for (std::size_t add = 0; add < items; ++add) {
                    if (in[add]) continue;
                    if (evals++ >= limit) {
                        exhausted = true;
                        break;
                    }
                    auto v = with_delta(static_cast<int>(add), static_cast<int>(out));
                    double val = model.evaluate(CostVector(v));
                    if (improves(val, current, Sense::Maximize)) {
                        in[out] = false;
                        in[add] = true;
                        sum = std::move(v);
                        current = val;
                        improved = true;
                        break;
                    }
                }
            }
        }
    }
    std::vector<int> chosen;
    for (std::size_t i = 0; i < items; ++i)
        if (in[i]) chosen.push_back(static_cast<int>(i));
    return {chosen, knapsack_cost(k, chosen), exhausted};
}

std::vector<int> nearest_neighbor_tour(const TspInstance& t) {
    const std::size_t c = t.cities;
    std::vector<bool> seen(c, false);
    std::vector<int> tour{0};
    seen[0] = true;
    while (tour.size() < c) {
        std::size_t from = tour.back(), best = c;
        long best_cost = 0;
        for (std::size_t to = 0; to < c; ++to) {
            if (seen[to]) continue;
            long s = 0;
            for (std::size_t j = 0; j < t.objectives(); ++j) s += t.cost(j, from, to);
            if (best == c || s < best_cost) {
                best = to;
                best_cost = s;
            }
        }
        seen[best] = true;
        tour.push_back(static_cast<int>(best));
    }
    return tour;
}

Solution solve_tsp(const TspInstance& t, const PreferenceModel& model, const SolverBudget& budget,
                   bool local_search) {
    auto tour = nearest_neighbor_tour(t);
    auto cost = tour_cost(t, tour).values();
    bool exhausted = false;
    if (local_search) {
        const std::size_t c = t.cities, n = t.objectives();
        double current = model.evaluate(CostVector(cost));
        std::vector<double> cand(n);
        bool improved = true;
        std::size_t sweeps = 0;
        while (improved) {
            if (sweeps++ >= budget.two_opt_sweeps) {
                exhausted = true;
                break;
            }
            improved = false;
            for (std::size_t i = 0; i + 2 < c; ++i) {
                for (std::size_t k = i + 2; k < c; ++k) {
                    if (i == 0 && k == c - 1) continue;  // the two edges share a city
                    std::size_t a = tour[i], b = tour[i + 1], x = tour[k], y = tour[(k + 1) % c];
                    for (std::size_t j = 0; j < n; ++j)
                        cand[j] = cost[j] + t.cost(j, a, x) + t.cost(j, b, y) - t.cost(j, a, b) - t.cost(j, x, y);
                    double val = model.evaluate(CostVector(cand));
                    if (improves(val, current, Sense::Minimize)) {
                        std::reverse(tour.begin() + static_cast<std::ptrdiff_t>(i + 1),
                                     tour.begin() + static_cast<std::ptrdiff_t>(k + 1));
                        cost = cand;
                        current = val;
                        improved = true;
                    }
                }
            }
        }
    }
    return {tour, tour_cost(t, tour), exhausted};
}

Solution best_explicit(const ExplicitInstance& e, const PreferenceModel& model) {
    std::size_t best = 0;
    double best_val = model.evaluate(e.points[0]);
    for (std::size_t i = 1; i < e.points.size(); ++i) {
        double v = model.evaluate(e.points[i]);
        if (improves(v, best_val, e.sense)) {
            best = i;
            best_val = v;
        }
    }
    return {{static_cast<int>(best)}, e.points[best]};
}

void check_model(const Instance& inst, const PreferenceModel& model) {
    if (model.objectives() != objectives_of(inst))
        throw std::invalid_argument("model and instance differ in objective count");
}

std::vector<int> bits_to_items(const std::vector<bool>& bits) {
    std::vector<int> items;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) items.push_back(static_cast<int>(i));
    return items;
}

}  // namespace

Sense sense_of(const Instance& inst) {
    return std::visit(Overloaded{[](const KnapsackInstance&) { return Sense::Maximize; },
                                 [](const TspInstance&) { return Sense::Minimize; },
                                 [](const ExplicitInstance& e) { return e.sense; }},
                      inst);
}

std::size_t objectives_of(const Instance& inst) {
    return std::visit([](const auto& i) { return i.objectives(); }, inst);
}

std::size_t size_of(const Instance& inst) {
    return std::visit([](const auto& i) { return i.size(); }, inst);
}

std::string problem_name(const Instance& inst) {
    return std::visit(Overloaded{[](const KnapsackInstance&) { return std::string("knapsack"); },
                                 [](const TspInstance&) { return std::string("tsp"); },
                                 [](const ExplicitInstance& e) {
                                     return std::string(e.sense == Sense::Minimize ? "explicit" : "explicit_max");
                                 }},
                      inst);
}

CostVector evaluate(const Instance& inst, const std::vector<int>& encoding) {
    return std::visit(Overloaded{[&](const KnapsackInstance& k) { return knapsack_cost(k, encoding); },
                                 [&](const TspInstance& t) { return tour_cost(t, encoding); },
                                 [&](const ExplicitInstance& e) { return e.points.at(encoding.at(0)); }},
                      inst);
}

bool is_feasible(const Instance& inst, const Solution& s) {
    bool shape = std::visit(
        Overloaded{[&](const KnapsackInstance& k) {
                       if (s.encoding.size() > static_cast<std::size_t>(k.capacity)) return false;
                       for (std::size_t i = 0; i < s.encoding.size(); ++i) {
                           if (s.encoding[i] < 0 || static_cast<std::size_t>(s.encoding[i]) >= k.size()) return false;
                           if (i > 0 && s.encoding[i] <= s.encoding[i - 1]) return false;
                       }
                       return true;
                   },
                   [&](const TspInstance& t) {
                       if (s.encoding.size() != t.cities) return false;
                       std::vector<bool> seen(t.cities, false);
                       for (int c : s.encoding) {
                           if (c < 0 || static_cast<std::size_t>(c) >= t.cities || seen[c]) return false;
                           seen[c] = true;
                       }
                       return true;
                   },
                   [&](const ExplicitInstance& e) {
                       return s.encoding.size() == 1 && s.encoding[0] >= 0 &&
                              static_cast<std::size_t>(s.encoding[0]) < e.points.size();
                   }},
        inst);
    return shape && evaluate(inst, s.encoding) == s.cost;
}

KnapsackInstance gen_knapsack(std::size_t items, std::size_t objectives, std::uint64_t seed) {
    if (items < 2) throw std::invalid_argument("gen_knapsack: need at least 2 items");
    if (objectives < 2) throw std::invalid_argument("gen_knapsack: need at least 2 objectives");
    Rng rng(seed);
    std::uniform_int_distribution<int> value(1, 1000);
    KnapsackInstance k;
    k.seed = seed;
    k.capacity = static_cast<int>(items / 2);
    k.items.assign(items, std::vector<int>(objectives));
    for (auto& item : k.items)
        for (int& v : item) v = value(rng);
    return k;
}

TspInstance gen_tsp(std::size_t cities, std::size_t objectives, std::uint64_t seed) {
    if (cities < 4) throw std::invalid_argument("gen_tsp: need at least 4 cities");
    if (objectives < 2) throw std::invalid_argument("gen_tsp: need at least 2 objectives");
    Rng rng(seed);
    std::uniform_int_distribution<int> value(1, 1000);
    TspInstance t;
    t.seed = seed;
    t.cities = cities;
    t.layers.assign(objectives, std::vector<int>(cities * cities, 0));
    for (auto& layer : t.layers) {
        for (std::size_t a = 0; a < cities; ++a) {
            for (std::size_t b = a + 1; b < cities; ++b) {
                int v = value(rng);
                layer[a * cities + b] = v;
                layer[b * cities + a] = v;
            }
        }
    }
    return t;
}

void save_instance(std::ostream& os, const Instance& inst) {
    std::visit(Overloaded{[&](const KnapsackInstance& k) {
                              os << "knapsack " << k.objectives() << ' ' << k.size() << ' ' << k.seed << '\n';
                              for (const auto& item : k.items) {
                                  for (std::size_t j = 0; j < item.size(); ++j) os << (j ? " " : "") << item[j];
                                  os << '\n';
                              }
                          },
                          [&](const TspInstance& t) {
                              os << "tsp " << t.objectives() << ' ' << t.cities << ' ' << t.seed << '\n';
                              for (const auto& layer : t.layers) {
                                  for (std::size_t a = 0; a < t.cities; ++a) {
                                      for (std::size_t b = 0; b < t.cities; ++b)
                                          os << (b ? " " : "") << layer[a * t.cities + b];
                                      os << '\n';
                                  }
                              }
                          },
                          [&](const ExplicitInstance& e) {
                              os << problem_name(inst) << ' ' << e.objectives() << ' ' << e.size() << " 0\n";
                              os.precision(17);
                              for (const auto& p : e.points) {
                                  for (std::size_t j = 0; j < p.size(); ++j) os << (j ? " " : "") << p[j];
                                  os << '\n';
                              }
                          }},
               inst);
}

Instance load_instance(std::istream& is) {
    std::size_t line_no = 0;
    std::string line;
    auto next_line = [&]() -> std::istringstream {
        while (std::getline(is, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
        }
        throw ParseError(line_no + 1, "unexpected end of file");
    };
    auto expect_end = [&](std::istringstream& ls) {
        std::string rest;
        if (ls >> rest) throw ParseError(line_no, "unexpected trailing token '" + rest + "'");
    };

    auto header = next_line();
    std::string problem;
    long long n = 0, size = 0;
    unsigned long long seed = 0;
    if (!(header >> problem >> n >> size >> seed)) throw ParseError(line_no, "expected header `problem n size seed`");
    expect_end(header);
    if (n < 2) throw ParseError(line_no, "objective count must be >= 2");

    if (problem == "knapsack") {
        if (size < 2) throw ParseError(line_no, "knapsack needs at least 2 items");
        KnapsackInstance k;
        k.seed = seed;
        k.capacity = static_cast<int>(size / 2);
        for (long long i = 0; i < size; ++i) {
            auto ls = next_line();
            std::vector<int> item(static_cast<std::size_t>(n));
            for (int& v : item) {
                if (!(ls >> v)) throw ParseError(line_no, "expected " + std::to_string(n) + " integers");
                if (v <= 0) throw ParseError(line_no, "item values must be positive");
            }
            expect_end(ls);
            k.items.push_back(std::move(item));
        }
        return k;
    }
    if (problem == "tsp") {
        if (size < 4) throw ParseError(line_no, "tsp needs at least 4 cities");
        TspInstance t;
        t.seed = seed;
        t.cities = static_cast<std::size_t>(size);
        for (long long j = 0; j < n; ++j) {
            std::vector<int> layer(t.cities * t.cities);
            std::vector<std::size_t> row_line(t.cities);
            for (std::size_t a = 0; a < t.cities; ++a) {
                auto ls = next_line();
                row_line[a] = line_no;
                for (std::size_t b = 0; b < t.cities; ++b) {
                    if (!(ls >> layer[a * t.cities + b]))
                        throw ParseError(line_no, "expected " + std::to_string(size) + " integers");
                }
                expect_end(ls);
                for (std::size_t b = 0; b < a; ++b) {
                    if (layer[a * t.cities + b] != layer[b * t.cities + a])
                        throw ParseError(line_no, "cost matrix is not symmetric at (" + std::to_string(a) + "," +
                                                      std::to_string(b) + ")");
                }
            }
            t.layers.push_back(std::move(layer));
        }
        return t;
    }
    if (problem == "explicit" || problem == "explicit_max") {
        if (size < 1) throw ParseError(line_no, "explicit instance needs at least one point");
        ExplicitInstance e;
        e.sense = problem == "explicit" ? Sense::Minimize : Sense::Maximize;
        for (long long i = 0; i < size; ++i) {
            auto ls = next_line();
            std::vector<double> v(static_cast<std::size_t>(n));
            for (double& x : v)
                if (!(ls >> x)) throw ParseError(line_no, "expected " + std::to_string(n) + " numbers");
            expect_end(ls);
            e.points.emplace_back(std::move(v));
        }
        return e;
    }
    throw ParseError(line_no, "unknown problem '" + problem + "'");
}

Solution solve_fixed(const Instance& inst, const PreferenceModel& model, SolverBudget budget) {
    check_model(inst, model);
    return std::visit(Overloaded{[&](const KnapsackInstance& k) { return solve_knapsack(k, model, budget, true); },
                                 [&](const TspInstance& t) { return solve_tsp(t, model, budget, true); },
                                 [&](const ExplicitInstance& e) { return best_explicit(e, model); }},
                      inst);
}

Solution greedy_seed(const Instance& inst, const PreferenceModel& model) {
    check_model(inst, model);
    return std::visit(Overloaded{[&](const KnapsackInstance& k) { return solve_knapsack(k, model, {}, false); },
                                 [&](const TspInstance& t) { return solve_tsp(t, model, {}, false); },
                                 [&](const ExplicitInstance& e) { return best_explicit(e, model); }},
                      inst);
}

void for_each_solution(const Instance& inst,
                       const std::function<void(const std::vector<int>&, const CostVector&)>& fn) {
    std::visit(Overloaded{[&](const KnapsackInstance& k) {
                              const std::size_t items = k.size(), cap = static_cast<std::size_t>(k.capacity);
                              if (binomial(items, cap) > 1e7)
                                  throw SizeGuardExceeded("knapsack too large for exhaustive enumeration");
                              // Positive values: some optimum always fills the capacity.
                              std::vector<int> pick(cap);
                              std::iota(pick.begin(), pick.end(), 0);
                              for (;;) {
                                  fn(pick, knapsack_cost(k, pick));
                                  std::size_t i = cap;
                                  while (i > 0 && static_cast<std::size_t>(pick[i - 1]) == items - cap + i - 1) --i;
                                  if (i == 0) break;
                                  ++pick[i - 1];
                                  for (std::size_t j = i; j < cap; ++j) pick[j] = pick[j - 1] + 1;
                              }
                          },
                          [&](const TspInstance& t) {
                              if (t.cities > 10) throw SizeGuardExceeded("tsp too large for exhaustive enumeration");
                              std::vector<int> rest(t.cities - 1);
                              std::iota(rest.begin(), rest.end(), 1);
                              std::vector<int> tour(t.cities);
                              do {
                                  // Each undirected cycle once: fix city 0, orient by endpoints.
                                  if (rest.front() > rest.back()) continue;
                                  tour[0] = 0;
                                  std::copy(rest.begin(), rest.end(), tour.begin() + 1);
                                  fn(tour, tour_cost(t, tour));
                              } while (std::next_permutation(rest.begin(), rest.end()));
                          },
                          [&](const ExplicitInstance& e) {
                              for (std::size_t i = 0; i < e.points.size(); ++i) fn({static_cast<int>(i)}, e.points[i]);
                          }},
               inst);
}

Solution solve_exact_small(const Instance& inst, const PreferenceModel& model) {
    check_model(inst, model);
    const Sense sense = sense_of(inst);
    Solution best;
    double best_val = 0;
    bool have = false;
    for_each_solution(inst, [&](const std::vector<int>& enc, const CostVector& cost) {
        double v = model.evaluate(cost);
        if (!have || improves(v, best_val, sense)) {
            best = {enc, cost};
            best_val = v;
            have = true;
        }
    });
    return best;
}

std::vector<std::size_t> pareto_indices(std::span<const CostVector> points, Sense sense) {
    // A dominating point precedes the points it dominates in (sense-adjusted)
    // lexicographic order, so each point only needs checking against the front
    // built so far.
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sense == Sense::Minimize ? points[a] < points[b] : points[b] < points[a];
    });
    std::vector<std::size_t> front;
    for (std::size_t idx : order) {
        bool drop = std::any_of(front.begin(), front.end(), [&](std::size_t f) {
            return points[f] == points[idx] || dominates(points[f], points[idx], sense);
        });
        if (!drop) front.push_back(idx);
    }
    std::sort(front.begin(), front.end());
    return front;
}

std::vector<CostVector> pareto_filter(std::span<const CostVector> points, Sense sense) {
    std::vector<CostVector> out;
    for (std::size_t i : pareto_indices(points, sense)) out.push_back(points[i]);
    return out;
}

std::vector<Solution> enumerate_pareto_small(const Instance& inst) {
    std::vector<Solution> all;
    std::vector<CostVector> costs;
    for_each_solution(inst, [&](const std::vector<int>& enc, const CostVector& cost) {
        all.push_back({enc, cost});
        costs.push_back(cost);
    });
    std::vector<Solution> out;
    for (std::size_t i : pareto_indices(costs, sense_of(inst))) out.push_back(std::move(all[i]));
    return out;
}

std::vector<Solution> neighborhood(const Instance& inst, const Solution& s) {
    std::vector<Solution> out;
    std::visit(Overloaded{[&](const KnapsackInstance& k) {
                              std::vector<bool> in(k.size(), false);
                              for (int i : s.encoding) in[i] = true;
                              for (int drop : s.encoding) {
                                  for (std::size_t add = 0; add < k.size(); ++add) {
                                      if (in[add]) continue;
                                      std::vector<int> enc;
                                      for (int i : s.encoding)
                                          if (i != drop) enc.push_back(i);
                                      enc.push_back(static_cast<int>(add));
                                      std::sort(enc.begin(), enc.end());
                                      out.push_back({enc, knapsack_cost(k, enc)});
                                  }
                              }
                          },
                          [&](const TspInstance& t) {
                              const std::size_t c = t.cities;
                              for (std::size_t i = 0; i + 2 < c; ++i) {
                                  for (std::size_t k = i + 2; k < c; ++k) {
                                      if (i == 0 && k == c - 1) continue;
                                      auto tour = s.encoding;
                                      std::reverse(tour.begin() + static_cast<std::ptrdiff_t>(i + 1),
                                                   tour.begin() + static_cast<std::ptrdiff_t>(k + 1));
                                      out.push_back({tour, tour_cost(t, tour)});
                                  }
                              }
                          },
                          [&](const ExplicitInstance& e) {
                              for (std::size_t i = 0; i < e.points.size(); ++i) {
                                  if (static_cast<int>(i) != s.encoding[0]) out.push_back({{static_cast<int>(i)}, e.points[i]});
                              }
                          }},
               inst);
    return out;
}

Solution one_point_crossover(const Instance& inst, const Solution& a, const Solution& b, Rng& rng) {
    return std::visit(
        Overloaded{[&](const KnapsackInstance& k) {
                       const std::size_t items = k.size(), cap = static_cast<std::size_t>(k.capacity);
                       std::vector<bool> pa(items, false), pb(items, false);
                       for (int i : a.encoding) pa[i] = true;
                       for (int i : b.encoding) pb[i] = true;
                       std::size_t cut = std::uniform_int_distribution<std::size_t>(1, items - 1)(rng);
                       std::vector<bool> child(items);
                       for (std::size_t i = 0; i < items; ++i) child[i] = i < cut ? pa[i] : pb[i];
                       // Repair to exactly `cap` items by random drops/adds.
                       auto chosen = bits_to_items(child);
                       while (chosen.size() > cap) {
                           std::size_t r = std::uniform_int_distribution<std::size_t>(0, chosen.size() - 1)(rng);
                           child[chosen[r]] = false;
                           chosen = bits_to_items(child);
                       }
                       while (chosen.size() < cap) {
                           std::vector<int> free;
                           for (std::size_t i = 0; i < items; ++i)
                               if (!child[i]) free.push_back(static_cast<int>(i));
                           std::size_t r = std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng);
                           child[free[r]] = true;
                           chosen = bits_to_items(child);
                       }
                       return Solution{chosen, knapsack_cost(k, chosen)};
                   },
                   [&](const TspInstance& t) {
                       const std::size_t c = t.cities;
                       std::size_t cut = std::uniform_int_distribution<std::size_t>(1, c - 1)(rng);
                       std::vector<int> child(a.encoding.begin(), a.encoding.begin() + static_cast<std::ptrdiff_t>(cut));
                       std::vector<bool> used(c, false);
                       for (int city : child) used[city] = true;
                       for (int city : b.encoding)
                           if (!used[city]) child.push_back(city);
                       return Solution{child, tour_cost(t, child)};
                   },
                   [&](const ExplicitInstance&) {
                       return std::uniform_int_distribution<int>(0, 1)(rng) ? a : b;
                   }},
        inst);
}

Solution swap_mutation(const Instance& inst, const Solution& s, Rng& rng) {
    return std::visit(
        Overloaded{[&](const KnapsackInstance& k) {
                       std::vector<bool> in(k.size(), false);
                       for (int i : s.encoding) in[i] = true;
                       std::vector<int> out_items;
                       for (std::size_t i = 0; i < k.size(); ++i)
                           if (!in[i]) out_items.push_back(static_cast<int>(i));
                       if (s.encoding.empty() || out_items.empty()) return s;
                       // Exchange a selected position with an unselected one.
                       auto enc = s.encoding;
                       std::size_t r = std::uniform_int_distribution<std::size_t>(0, enc.size() - 1)(rng);
                       std::size_t q = std::uniform_int_distribution<std::size_t>(0, out_items.size() - 1)(rng);
                       enc[r] = out_items[q];
                       std::sort(enc.begin(), enc.end());
                       return Solution{enc, knapsack_cost(k, enc)};
                   },
                   [&](const TspInstance& t) {
                       auto tour = s.encoding;
                       std::uniform_int_distribution<std::size_t> pos(0, tour.size() - 1);
                       std::size_t i = pos(rng), j = pos(rng);
                       std::swap(tour[i], tour[j]);
                       return Solution{tour, tour_cost(t, tour)};
                   },
                   [&](const ExplicitInstance& e) {
                       int i = std::uniform_int_distribution<int>(0, static_cast<int>(e.points.size()) - 1)(rng);
                       return Solution{{i}, e.points[i]};
                   }},
        inst);
}

}  // namespace riga
