#include "riga/serialize.hpp"

namespace riga {

namespace {

template <class T>
T get_field(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw FieldError(path, "missing");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw FieldError(path, e.what());
    }
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw FieldError(key, e.what());
    }
}

std::string relation_name(Relation r) { return r == Relation::LE ? "LE" : r == Relation::GE ? "GE" : "EQ"; }

Relation parse_relation(const std::string& s) {
    if (s == "LE") return Relation::LE;
    if (s == "GE") return Relation::GE;
    if (s == "EQ") return Relation::EQ;
    throw FieldError("sense", "unknown relation '" + s + "'");
}

}  // namespace

std::string to_string(Answer a) { return a == Answer::PrefersA ? "A" : "B"; }

Answer parse_answer(const std::string& s) {
    if (s == "A") return Answer::PrefersA;
    if (s == "B") return Answer::PrefersB;
    throw FieldError("choice", "must be \"A\" or \"B\"");
}

json to_json(const CostVector& y) { return {{"values", y.values()}, {"n", y.size()}}; }

CostVector cost_from_json(const json& j, const std::string& field) {
    try {
        if (j.is_array()) return CostVector(j.get<std::vector<double>>());
        return CostVector(get_field<std::vector<double>>(j, "values", field + ".values"));
    } catch (const FieldError&) {
        throw;
    } catch (const std::exception& e) {
        throw FieldError(field, e.what());
    }
}

json to_json(const PreferenceModel& m) {
    json params;
    if (const auto* w = std::get_if<OwaWeights>(&m.params())) {
        params = {{"w", w->w}, {"monotone", std::string(to_string(w->monotone))}};
    } else {
        params = {{"masses", m.coords()}};
    }
    return {{"family", std::string(to_string(m.family()))},
            {"orientation", std::string(to_string(m.sense()))},
            {"params", params}};
}

PreferenceModel model_from_json(const json& j) {
    try {
        Family family = parse_family(get_field<std::string>(j, "family", "family"));
        Sense sense = parse_sense(get_field<std::string>(j, "orientation", "orientation"));
        const json& params = j.at("params");
        if (family == Family::Choquet2) {
            auto masses = get_field<std::vector<double>>(params, "masses", "params.masses");
            return PreferenceModel::from_coords(family, sense, masses);
        }
        OwaWeights w{get_field<std::vector<double>>(params, "w", "params.w"),
                     parse_monotone(get_or<std::string>(params, "monotone", "none"))};
        return PreferenceModel(family, std::move(w), sense);
    } catch (const FieldError&) {
        throw;
    } catch (const std::exception& e) {
        throw FieldError("model", e.what());
    }
}

json to_json(const LinearConstraint& c) { return {{"a", c.a}, {"b", c.b}, {"sense", relation_name(c.relation)}}; }

json to_json(const ParameterPolytope& p) {
    json base = json::array(), learned = json::array();
    for (const auto& c : p.base()) base.push_back(to_json(c));
    for (const auto& c : p.learned()) learned.push_back(to_json(c));
    return {{"family", std::string(to_string(p.family()))},
            {"orientation", std::string(to_string(p.sense()))},
            {"n", p.objectives()},
            {"dim", p.dim()},
            {"base", base},
            {"learned", learned}};
}

ParameterPolytope polytope_from_json(const json& j) {
    auto p = ParameterPolytope::initial(parse_family(get_field<std::string>(j, "family", "family")),
                                        parse_sense(get_field<std::string>(j, "orientation", "orientation")),
                                        get_field<std::size_t>(j, "n", "n"));
    for (const auto& row : j.value("learned", json::array())) {
        LinearConstraint c{row.at("a").get<std::vector<double>>(), row.at("b").get<double>(),
                           parse_relation(row.at("sense").get<std::string>())};
        auto next = p.with(c);
        if (!next) throw FieldError("learned", "constraints describe an empty polytope");
        p = std::move(*next);
    }
    return p;
}

json to_json(const Instance& inst) {
    json j;
    j["problem"] = problem_name(inst);
    j["n"] = objectives_of(inst);
    j["size"] = size_of(inst);
    if (const auto* k = std::get_if<KnapsackInstance>(&inst)) {
        j["seed"] = k->seed;
        j["items"] = k->items;
    } else if (const auto* t = std::get_if<TspInstance>(&inst)) {
        j["seed"] = t->seed;
        j["layers"] = t->layers;
    } else {
        const auto& e = std::get<ExplicitInstance>(inst);
        json pts = json::array();
        for (const auto& p : e.points) pts.push_back(p.values());
        j["points"] = pts;
    }
    return j;
}

Instance instance_from_json(const json& j) {
    if (!j.is_object()) throw FieldError("instance", "must be an object");
    if (j.contains("generate")) {
        const json& g = j.at("generate");
        auto problem = get_field<std::string>(g, "problem", "instance.generate.problem");
        auto n = get_field<std::size_t>(g, "n", "instance.generate.n");
        auto size = get_field<std::size_t>(g, "size", "instance.generate.size");
        auto seed = get_or<std::uint64_t>(g, "seed", 1);
        try {
            if (problem == "knapsack") return gen_knapsack(size, n, seed);
            if (problem == "tsp") return gen_tsp(size, n, seed);
        } catch (const std::invalid_argument& e) {
            throw FieldError("instance.generate", e.what());
        }
        throw FieldError("instance.generate.problem", "unknown problem '" + problem + "'");
    }
    auto problem = get_field<std::string>(j, "problem", "instance.problem");
    try {
        if (problem == "knapsack") {
            KnapsackInstance k;
            k.items = get_field<std::vector<std::vector<int>>>(j, "items", "instance.items");
            k.seed = get_or<std::uint64_t>(j, "seed", 0);
            if (k.items.size() < 2) throw FieldError("instance.items", "need at least 2 items");
            for (const auto& item : k.items) {
                if (item.size() != k.items[0].size() || item.size() < 2)
                    throw FieldError("instance.items", "ragged or too short item vectors");
                for (int v : item)
                    if (v <= 0) throw FieldError("instance.items", "item values must be positive");
            }
            k.capacity = static_cast<int>(k.items.size() / 2);
            return k;
        }
        if (problem == "tsp") {
            TspInstance t;
            t.layers = get_field<std::vector<std::vector<int>>>(j, "layers", "instance.layers");
            t.seed = get_or<std::uint64_t>(j, "seed", 0);
            t.cities = get_field<std::size_t>(j, "size", "instance.size");
            if (t.cities < 4) throw FieldError("instance.size", "need at least 4 cities");
            if (t.layers.size() < 2) throw FieldError("instance.layers", "need at least 2 objectives");
            for (const auto& layer : t.layers) {
                if (layer.size() != t.cities * t.cities) throw FieldError("instance.layers", "expected size*size entries");
                for (std::size_t a = 0; a < t.cities; ++a)
                    for (std::size_t b = 0; b < a; ++b)
                        if (layer[a * t.cities + b] != layer[b * t.cities + a])
                            throw FieldError("instance.layers", "cost matrix is not symmetric");
            }
            return t;
        }
        if (problem == "explicit" || problem == "explicit_max") {
            ExplicitInstance e;
            e.sense = problem == "explicit" ? Sense::Minimize : Sense::Maximize;
            if (j.contains("sense")) e.sense = parse_sense(j.at("sense").get<std::string>());
            const auto pts = get_field<std::vector<std::vector<double>>>(j, "points", "instance.points");
            if (pts.empty()) throw FieldError("instance.points", "need at least one point");
            for (const auto& p : pts) {
                if (p.size() != pts[0].size()) throw FieldError("instance.points", "ragged cost vectors");
                e.points.emplace_back(p);
            }
            return e;
        }
    } catch (const FieldError&) {
        throw;
    } catch (const std::exception& e) {
        throw FieldError("instance", e.what());
    }
    throw FieldError("instance.problem", "unknown problem '" + problem + "'");
}

json to_json(const RigaConfig& c) {
    return {{"M", c.generations},       {"S", c.population}, {"K", c.survivors},
            {"mu", c.mutation_rate},    {"sigma", c.sigma},  {"delta", c.delta},
            {"family", std::string(to_string(c.family))},    {"seed", c.seed},
            {"swap_evaluations", c.budget.swap_evaluations}, {"two_opt_sweeps", c.budget.two_opt_sweeps}};
}

RigaConfig config_from_json(const json& j, const RigaConfig& defaults) {
    if (!j.is_object()) throw FieldError("config", "must be an object");
    RigaConfig c = defaults;
    auto check_count = [&](const char* key, std::size_t& out) {
        if (!j.contains(key)) return;
        if (!j.at(key).is_number_integer() || j.at(key).get<long long>() < 0)
            throw FieldError(key, "must be a non-negative integer");
        out = j.at(key).get<std::size_t>();
    };
    auto check_real = [&](const char* key, double& out) {
        if (!j.contains(key)) return;
        if (!j.at(key).is_number()) throw FieldError(key, "must be a number");
        out = j.at(key).get<double>();
    };
    check_count("M", c.generations);
    check_count("S", c.population);
    check_count("K", c.survivors);
    check_real("mu", c.mutation_rate);
    check_real("sigma", c.sigma);
    check_real("delta", c.delta);
    check_count("swap_evaluations", c.budget.swap_evaluations);
    check_count("two_opt_sweeps", c.budget.two_opt_sweeps);
    if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed", "seed");
    if (j.contains("family")) {
        try {
            c.family = parse_family(j.at("family").get<std::string>());
        } catch (const std::exception& e) {
            throw FieldError("family", e.what());
        }
    }
    // validate() messages start with the field name, e.g. "survivors (K) ...".
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        std::string field = msg.substr(0, msg.find(' '));
        auto open = msg.find('('), close = msg.find(')');
        if (open != std::string::npos && close != std::string::npos && open < close)
            field = msg.substr(open + 1, close - open - 1);
        throw FieldError(field, msg);
    }
    return c;
}

json to_json(const Solution& s) {
    return {{"encoding", s.encoding}, {"cost", s.cost.values()}, {"budget_exhausted", s.budget_exhausted}};
}

json to_json(const RunTrace& t) {
    json gens = json::array();
    for (const auto& p : t.phases) {
        json pop = json::array();
        for (const auto& y : p.population) pop.push_back(y.values());
        gens.push_back({{"generation", p.generation},
                        {"round", p.round},
                        {"population", pop},
                        {"mmr_start", p.mmr_start},
                        {"mmr_end", p.mmr_end},
                        {"queries", p.queries},
                        {"x_star", p.x_star.values()},
                        {"exhausted", p.exhausted},
                        {"inconsistent", p.inconsistent}});
    }
    json queries = json::array();
    for (const auto& q : t.queries) {
        queries.push_back({{"generation", q.generation},
                           {"a", q.a.values()},
                           {"b", q.b.values()},
                           {"answer", to_string(q.answer)},
                           {"mmr_before", q.mmr_before},
                           {"rejected", q.rejected}});
    }
    return {{"method", t.method},
            {"generations", gens},
            {"queries", queries},
            {"recommendation", t.recommendation ? to_json(*t.recommendation) : json(nullptr)},
            {"totals", {{"queries", t.accepted_queries()}, {"asked", t.queries.size()}, {"wall_time_s", t.wall_time_s}}},
            {"warnings", t.warnings},
            {"inconsistent", t.inconsistent}};
}

}  // namespace riga
