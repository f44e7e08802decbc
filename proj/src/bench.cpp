#include "riga/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace riga {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hidden_seed(std::uint64_t seed, Family family) {
    return splitmix(seed * 8 + static_cast<std::uint64_t>(family) + 1);
}

Instance make_instance(const ExperimentConfig& cfg, std::uint64_t seed) {
    if (cfg.problem == "knapsack") return gen_knapsack(cfg.size, cfg.n, seed);
    return gen_tsp(cfg.size, cfg.n, seed);
}

std::string fmt_real(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

const char* kCsvHeader = "seed,method,family,n,size,time_s,queries,error_pct,flags";

}  // namespace

double error_pct(const Solution& returned, const Instance& inst, const PreferenceModel& hidden) {
    Solution opt = solve_exact_small(inst, hidden);
    double best = hidden.evaluate(opt.cost);
    double got = hidden.evaluate(returned.cost);
    if (best == 0) return got == 0 ? 0.0 : INFINITY;
    return 100.0 * std::abs(got - best) / std::abs(best);
}

bool RunRow::has_flag(const std::string& f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

void ExperimentConfig::validate() const {
    if (problem != "knapsack" && problem != "tsp") throw FieldError("problem", "must be knapsack or tsp");
    if (n < 2) throw FieldError("n", "need at least 2 objectives");
    if (problem == "knapsack" && size < 2) throw FieldError("size", "need at least 2 items");
    if (problem == "tsp" && size < 4) throw FieldError("size", "need at least 4 cities");
    if (runs < 1 && seeds.empty()) throw FieldError("runs", "must be >= 1");
    if (families.empty()) throw FieldError("families", "must not be empty");
    if (methods.empty()) throw FieldError("methods", "must not be empty");
    for (const auto& m : methods)
        if (std::find(method_names().begin(), method_names().end(), m) == method_names().end())
            throw FieldError("methods", "unknown method '" + m + "'");
    if (!(timeout_s >= 0)) throw FieldError("timeout_s", "must be >= 0");
    try {
        riga.validate();
    } catch (const std::invalid_argument& e) {
        throw FieldError("riga", e.what());
    }
}

std::vector<std::uint64_t> ExperimentConfig::seed_list() const {
    if (!seeds.empty()) return seeds;
    std::vector<std::uint64_t> out(runs);
    for (std::size_t i = 0; i < runs; ++i) out[i] = first_seed + i;
    return out;
}

ExperimentConfig experiment_from_json(const json& j) {
    if (!j.is_object()) throw FieldError("config", "must be an object");
    ExperimentConfig c;
    try {
        c.problem = j.value("problem", c.problem);
        c.riga = c.problem == "tsp" ? RigaConfig::tsp_defaults() : RigaConfig::knapsack_defaults();
        if (c.problem == "tsp") c.size = 10;
        c.n = j.value("n", c.n);
        c.size = j.value("size", c.size);
        c.runs = j.value("runs", c.runs);
        c.first_seed = j.value("first_seed", c.first_seed);
        c.timeout_s = j.value("timeout_s", c.timeout_s);
        c.workers = j.value("workers", c.workers);
        c.record_time = j.value("record_time", c.record_time);
        c.traces_path = j.value("traces", c.traces_path);
        if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        if (j.contains("methods")) c.methods = j.at("methods").get<std::vector<std::string>>();
        if (j.contains("families")) {
            c.families.clear();
            for (const auto& f : j.at("families")) c.families.push_back(parse_family(f.get<std::string>()));
        }
    } catch (const FieldError&) {
        throw;
    } catch (const std::exception& e) {
        throw FieldError("config", e.what());
    }
    if (j.contains("riga")) c.riga = config_from_json(j.at("riga"), c.riga);
    if (j.contains("ils")) {
        const json& k = j.at("ils");
        c.ils.delta_start = k.value("delta_start", c.ils.delta_start);
        c.ils.delta_move = k.value("delta_move", c.ils.delta_move);
        c.ils.starts = k.value("starts", c.ils.starts);
        c.ils.max_moves = k.value("max_moves", c.ils.max_moves);
    }
    if (j.contains("two_phase")) {
        const json& k = j.at("two_phase");
        c.two_phase.subsample = k.value("subsample", c.two_phase.subsample);
        c.two_phase.delta = k.value("delta", c.two_phase.delta);
    }
    // A top-level delta applies to both RIGA and Two-Phase.
    if (j.contains("delta")) {
        if (!j.at("delta").is_number()) throw FieldError("delta", "must be a number");
        c.riga.delta = c.two_phase.delta = j.at("delta").get<double>();
    }
    c.validate();
    return c;
}

json to_json(const ExperimentConfig& c) {
    json fams = json::array();
    for (Family f : c.families) fams.push_back(std::string(to_string(f)));
    return {{"problem", c.problem},
            {"n", c.n},
            {"size", c.size},
            {"families", fams},
            {"methods", c.methods},
            {"riga", to_json(c.riga)},
            {"ils",
             {{"delta_start", c.ils.delta_start},
              {"delta_move", c.ils.delta_move},
              {"starts", c.ils.starts},
              {"max_moves", c.ils.max_moves}}},
            {"two_phase", {{"delta", c.two_phase.delta}, {"subsample", c.two_phase.subsample}}},
            {"runs", c.runs},
            {"seeds", c.seed_list()},
            {"timeout_s", c.timeout_s},
            {"record_time", c.record_time}};
}

RunRow run_single(const ExperimentConfig& cfg, const std::string& method, Family family, std::uint64_t seed,
                  RunTrace* trace_out) {
    Instance inst = make_instance(cfg, seed);
    PreferenceModel hidden = gen_hidden(family, cfg.n, sense_of(inst), hidden_seed(seed, family));
    SimulatedDm dm(hidden);

    RunResult result = [&] {
        if (method == "ils") {
            IlsConfig c = cfg.ils;
            c.seed = seed;
            c.budget = cfg.riga.budget;
            return ils_run(inst, family, dm, c);
        }
        if (method == "two_phase") {
            TwoPhaseConfig c = cfg.two_phase;
            c.seed = seed;
            return two_phase_run(inst, family, dm, c);
        }
        RigaConfig c = cfg.riga;
        c.family = family;
        c.seed = seed;
        if (method == "riga_kcss") return riga_kcss_run(inst, c, dm);
        if (method == "riga_s") return riga_s_run(inst, c, dm);
        return riga_run(inst, c, dm);
    }();

    RunRow row;
    row.seed = seed;
    row.method = method;
    row.family = family;
    row.n = cfg.n;
    row.size = cfg.size;
    row.time_s = cfg.record_time ? result.trace.wall_time_s : 0.0;
    row.queries = result.trace.accepted_queries();
    if (cfg.timeout_s > 0 && result.trace.wall_time_s > cfg.timeout_s) row.flags.push_back("timeout");
    if (result.trace.inconsistent) row.flags.push_back("inconsistent");
    if (result.recommendation.budget_exhausted) row.flags.push_back("budget");
    if (!result.trace.phases.empty() && result.trace.phases.back().mmr_end <= kZeroRegret)
        row.flags.push_back("mmr_zero");
    try {
        Solution opt = solve_exact_small(inst, hidden);
        double best = hidden.evaluate(opt.cost);
        double got = hidden.evaluate(result.recommendation.cost);
        row.error_pct = best == 0 ? (got == 0 ? 0.0 : INFINITY) : 100.0 * std::abs(got - best) / std::abs(best);
        if (!result.trace.phases.empty()) {
            for (const auto& y : result.trace.phases.back().population) {
                if (std::abs(hidden.evaluate(y) - best) <= 1e-9 * std::max(1.0, std::abs(best))) {
                    row.flags.push_back("opt_in_pool");
                    break;
                }
            }
        }
    } catch (const SizeGuardExceeded&) {
        row.error_pct = NAN;
        row.flags.push_back("no_oracle");
    }
    if (trace_out) *trace_out = std::move(result.trace);
    return row;
}

std::size_t workers_from_env() {
    if (const char* v = std::getenv("RIGA_WORKERS")) {
        try {
            long n = std::stol(v);
            if (n > 0) return static_cast<std::size_t>(n);
        } catch (const std::exception&) {
        }
    }
    return 1;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    struct Task {
        std::string method;
        Family family;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    const auto seeds = cfg.seed_list();
    for (const auto& m : cfg.methods)
        for (Family f : cfg.families)
            for (auto s : seeds) tasks.push_back({m, f, s});

    const bool keep_traces = !cfg.traces_path.empty();
    std::vector<RunRow> rows(tasks.size());
    std::vector<RunTrace> traces(keep_traces ? tasks.size() : 0);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        for (std::size_t i; (i = next++) < tasks.size();) {
            try {
                rows[i] = run_single(cfg, tasks[i].method, tasks[i].family, tasks[i].seed,
                                     keep_traces ? &traces[i] : nullptr);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::size_t workers = cfg.workers ? cfg.workers : workers_from_env();
    workers = std::max<std::size_t>(1, std::min(workers, tasks.size()));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    if (keep_traces) {
        std::ofstream out(cfg.traces_path);
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            json j = to_json(traces[i]);
            j["seed"] = tasks[i].seed;
            j["family"] = std::string(to_string(tasks[i].family));
            out << j.dump() << '\n';
        }
    }
    ExperimentResult res{std::move(rows), {}};
    res.metrics = aggregate(res.rows);
    return res;
}

std::vector<MetricsRow> aggregate(const std::vector<RunRow>& rows) {
    struct Acc {
        MetricsRow m;
        double time = 0, queries = 0, error = 0;
        std::size_t with_error = 0;
    };
    std::vector<Acc> accs;
    std::map<std::tuple<std::string, Family, std::size_t>, std::size_t> where;
    for (const auto& r : rows) {
        auto key = std::make_tuple(r.method, r.family, r.n);
        auto it = where.find(key);
        if (it == where.end()) {
            it = where.emplace(key, accs.size()).first;
            Acc a;
            a.m.method = r.method;
            a.m.family = r.family;
            a.m.n = r.n;
            accs.push_back(a);
        }
        Acc& a = accs[it->second];
        if (r.has_flag("timeout")) {
            ++a.m.timeouts;
            continue;
        }
        ++a.m.runs;
        a.time += r.time_s;
        a.queries += static_cast<double>(r.queries);
        if (!std::isnan(r.error_pct)) {
            a.error += r.error_pct;
            ++a.with_error;
        }
    }
    std::vector<MetricsRow> out;
    for (auto& a : accs) {
        if (a.m.runs > 0) {
            a.m.mean_time_s = a.time / static_cast<double>(a.m.runs);
            a.m.mean_queries = a.queries / static_cast<double>(a.m.runs);
        }
        a.m.mean_error_pct = a.with_error ? a.error / static_cast<double>(a.with_error) : NAN;
        out.push_back(a.m);
    }
    return out;
}

void write_csv(std::ostream& os, const std::vector<RunRow>& rows) {
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
        std::string flags;
        for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
        os << r.seed << ',' << r.method << ',' << to_string(r.family) << ',' << r.n << ',' << r.size << ','
           << fmt_real(r.time_s) << ',' << r.queries << ',' << fmt_real(r.error_pct) << ',' << flags << '\n';
    }
}

std::vector<RunRow> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) throw std::runtime_error("csv: unexpected header");
    std::vector<RunRow> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto f = split(line, ',');
        if (f.size() != 9) throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected 9 fields");
        try {
            RunRow r;
            r.seed = std::stoull(f[0]);
            r.method = f[1];
            r.family = parse_family(f[2]);
            r.n = std::stoul(f[3]);
            r.size = std::stoul(f[4]);
            r.time_s = std::stod(f[5]);
            r.queries = std::stoul(f[6]);
            r.error_pct = f[7] == "nan" ? NAN : std::stod(f[7]);
            if (!f[8].empty()) r.flags = split(f[8], ';');
            rows.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw std::runtime_error("csv line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

void write_table(std::ostream& os, const std::vector<MetricsRow>& metrics) {
    os << std::left << std::setw(11) << "method" << std::setw(9) << "family" << std::right << std::setw(3) << "n"
       << std::setw(6) << "runs" << std::setw(10) << "time(s)" << std::setw(10) << "queries" << std::setw(11)
       << "error(%)" << std::setw(10) << "timeouts" << '\n';
    for (const auto& m : metrics) {
        os << std::left << std::setw(11) << m.method << std::setw(9) << to_string(m.family) << std::right
           << std::setw(3) << m.n << std::setw(6) << m.runs << std::fixed << std::setprecision(3) << std::setw(10)
           << m.mean_time_s << std::setprecision(1) << std::setw(10) << m.mean_queries << std::setprecision(3)
           << std::setw(11) << m.mean_error_pct << std::setw(10) << m.timeouts << '\n';
        os.unsetf(std::ios::fixed);
    }
}

}  // namespace riga
