// riga-bench: instance generation, experiment runs and CSV reports.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "riga/bench.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kTimeouts = 3;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regret-based interactive genetic algorithm: experiments"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random instance");
    std::string gen_problem = "knapsack", gen_out, gen_format = "text";
    std::size_t gen_n = 3, gen_size = 12;
    std::uint64_t gen_seed = 1;
    gen->add_option("--problem", gen_problem, "knapsack or tsp")->check(CLI::IsMember({"knapsack", "tsp"}));
    gen->add_option("--n", gen_n, "Number of objectives");
    gen->add_option("--size", gen_size, "Items or cities");
    gen->add_option("--seed", gen_seed);
    gen->add_option("-o,--out", gen_out, "Output file (default: stdout)");
    gen->add_option("--format", gen_format)->check(CLI::IsMember({"text", "json"}));

    // run
    auto* run = app.add_subcommand("run", "Run an experiment and print the metrics table");
    std::string config_path, csv_path, traces_path, families, methods, problem;
    std::optional<std::size_t> n, size, runs, workers, M, S, K;
    std::optional<std::uint64_t> first_seed;
    std::optional<double> delta, timeout, mu, sigma;
    bool no_time = false;
    run->add_option("--config", config_path, "Experiment config (JSON)");
    run->add_option("--problem", problem);
    run->add_option("--n", n);
    run->add_option("--size", size);
    run->add_option("--families", families, "Comma list of WS,OWA,Choquet2");
    run->add_option("--methods", methods, "Comma list of riga,riga_kcss,riga_s,ils,two_phase");
    run->add_option("--runs", runs);
    run->add_option("--first-seed", first_seed);
    run->add_option("--delta", delta);
    run->add_option("--timeout", timeout, "Per-run time limit in seconds");
    run->add_option("--workers", workers, "Parallel runs (default: RIGA_WORKERS or 1)");
    run->add_option("--M", M);
    run->add_option("--S", S);
    run->add_option("--K", K);
    run->add_option("--mu", mu);
    run->add_option("--sigma", sigma);
    run->add_flag("--no-time", no_time, "Write time_s as 0 (byte-reproducible CSV)");
    run->add_option("--csv", csv_path, "Per-run CSV output");
    run->add_option("--traces", traces_path, "Per-run traces (JSON lines)");

    // report
    auto* report = app.add_subcommand("report", "Aggregate a per-run CSV");
    std::string report_csv;
    report->add_option("csv", report_csv)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and friends exit 0; bad arguments count as config errors.
        int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    if (*gen) {
        try {
            riga::Instance inst = gen_problem == "knapsack" ? riga::Instance(riga::gen_knapsack(gen_size, gen_n, gen_seed))
                                                            : riga::Instance(riga::gen_tsp(gen_size, gen_n, gen_seed));
            std::ofstream file;
            if (!gen_out.empty()) file.open(gen_out);
            std::ostream& os = gen_out.empty() ? std::cout : file;
            if (gen_format == "json")
                os << riga::to_json(inst).dump(2) << '\n';
            else
                riga::save_instance(os, inst);
        } catch (const std::exception& e) {
            std::cerr << "gen: " << e.what() << '\n';
            return kConfigError;
        }
        return 0;
    }

    if (*report) {
        std::ifstream in(report_csv);
        if (!in) {
            std::cerr << "report: cannot open " << report_csv << '\n';
            return kConfigError;
        }
        try {
            riga::write_table(std::cout, riga::aggregate(riga::read_csv(in)));
        } catch (const std::exception& e) {
            std::cerr << "report: " << e.what() << '\n';
            return kConfigError;
        }
        return 0;
    }

    riga::ExperimentConfig cfg;
    try {
        riga::json j = riga::json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw riga::FieldError("config", "cannot open " + config_path);
            j = riga::json::parse(in);
        }
        if (!problem.empty()) j["problem"] = problem;
        if (n) j["n"] = *n;
        if (size) j["size"] = *size;
        if (!families.empty()) j["families"] = split_list(families);
        if (!methods.empty()) j["methods"] = split_list(methods);
        if (runs) j["runs"] = *runs;
        if (first_seed) j["first_seed"] = *first_seed;
        if (delta) j["delta"] = *delta;
        if (timeout) j["timeout_s"] = *timeout;
        if (workers) j["workers"] = *workers;
        if (no_time) j["record_time"] = false;
        if (!traces_path.empty()) j["traces"] = traces_path;
        auto set_riga = [&](const char* key, const auto& v) {
            if (v) j["riga"][key] = *v;
        };
        set_riga("M", M);
        set_riga("S", S);
        set_riga("K", K);
        set_riga("mu", mu);
        set_riga("sigma", sigma);
        cfg = riga::experiment_from_json(j);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    riga::ExperimentResult result;
    try {
        result = riga::run_experiment(cfg);
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << '\n';
        return 1;
    }
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        riga::write_csv(out, result.rows);
    }
    riga::write_table(std::cout, result.metrics);
    std::size_t timeouts = 0;
    for (const auto& m : result.metrics) timeouts += m.timeouts;
    if (timeouts > 0) {
        std::cerr << timeouts << " run(s) exceeded the time limit and were left out of the means\n";
        return kTimeouts;
    }
    return 0;
}
