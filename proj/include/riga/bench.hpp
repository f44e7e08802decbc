// Experiment harness: seeded runs of each method against simulated decision
// makers, per-run CSV rows and aggregated metrics.

#ifndef RIGA_BENCH_HPP
#define RIGA_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "riga/baselines.hpp"
#include "riga/serialize.hpp"

namespace riga {

/// 100 * |f(returned) - f(opt)| / |f(opt)| under `hidden`, opt by exhaustive
/// search. Throws SizeGuardExceeded when the instance is too large.
double error_pct(const Solution& returned, const Instance& inst, const PreferenceModel& hidden);

inline const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names{"riga", "riga_kcss", "riga_s", "ils", "two_phase"};
    return names;
}

struct ExperimentConfig {
    std::string problem = "knapsack";
    std::size_t n = 3;
    std::size_t size = 12;
    std::vector<Family> families{Family::WS, Family::OWA, Family::Choquet2};
    std::vector<std::string> methods{"riga"};
    RigaConfig riga;  // family and seed are set per run
    IlsConfig ils;
    TwoPhaseConfig two_phase;
    std::size_t runs = 50;
    /// Explicit seeds; when empty, first_seed .. first_seed + runs - 1.
    std::vector<std::uint64_t> seeds;
    std::uint64_t first_seed = 1;
    /// Runs slower than this are flagged and left out of the means; 0 = none.
    double timeout_s = 0;
    /// 0: RIGA_WORKERS from the environment, else 1.
    std::size_t workers = 0;
    /// Off: time_s is written as 0 so repeated experiments give identical CSV.
    bool record_time = true;
    /// Optional JSONL sink for per-run traces (written after all runs).
    std::string traces_path;

    void validate() const;
    std::vector<std::uint64_t> seed_list() const;
};

/// Fields missing from `j` keep the defaults for the chosen problem.
ExperimentConfig experiment_from_json(const json& j);
json to_json(const ExperimentConfig& c);

struct RunRow {
    std::uint64_t seed = 0;
    std::string method;
    Family family = Family::WS;
    std::size_t n = 0;
    std::size_t size = 0;
    double time_s = 0;
    std::size_t queries = 0;
    double error_pct = 0;  // NaN when no exact oracle
    std::vector<std::string> flags;

    bool has_flag(const std::string& f) const;
};

struct MetricsRow {
    std::string method;
    Family family = Family::WS;
    std::size_t n = 0;
    std::size_t runs = 0;      // rows counted in the means
    std::size_t timeouts = 0;
    double mean_time_s = 0;
    double mean_queries = 0;
    double mean_error_pct = 0;  // over rows with an oracle value
};

/// One run: instance, hidden model and method seeds all derive from `seed`.
RunRow run_single(const ExperimentConfig& cfg, const std::string& method, Family family, std::uint64_t seed,
                  RunTrace* trace_out = nullptr);

struct ExperimentResult {
    std::vector<RunRow> rows;
    std::vector<MetricsRow> metrics;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Means per (method, family, n) in first-appearance order.
std::vector<MetricsRow> aggregate(const std::vector<RunRow>& rows);

void write_csv(std::ostream& os, const std::vector<RunRow>& rows);
std::vector<RunRow> read_csv(std::istream& is);
void write_table(std::ostream& os, const std::vector<MetricsRow>& metrics);

std::size_t workers_from_env();

}  // namespace riga

#endif  // RIGA_BENCH_HPP
