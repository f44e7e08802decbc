#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "riga/bench.hpp"

using namespace riga;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.problem = "knapsack";
    c.size = 8;
    c.runs = 3;
    c.methods = {"riga", "riga_s", "ils", "two_phase"};
    c.riga = RigaConfig::knapsack_defaults();
    c.riga.generations = 3;
    c.riga.population = 8;
    c.riga.survivors = 3;
    c.record_time = false;
    c.workers = 1;
    return c;
}

std::string csv_of(const std::vector<RunRow>& rows) {
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
}

int exit_code(const std::string& cmd) {
    int status = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("error percentage") {
    ExplicitInstance pts{{{100, 100}, {101, 101}, {150, 50}}, Sense::Minimize};
    PreferenceModel ws(Family::WS, OwaWeights{{0.5, 0.5}}, Sense::Minimize);
    CHECK(error_pct({{0}, {100, 100}}, pts, ws) == 0);
    CHECK(error_pct({{1}, {101, 101}}, pts, ws) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(error_pct({{2}, {150, 50}}, pts, ws) == 0);  // a tie is also optimal

    ExplicitInstance up{{{100, 100}, {99, 99}}, Sense::Maximize};
    PreferenceModel wsmax(Family::WS, OwaWeights{{0.5, 0.5}}, Sense::Maximize);
    CHECK(error_pct({{1}, {99, 99}}, up, wsmax) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(error_pct({}, gen_tsp(12, 2, 1), ws), SizeGuardExceeded);
}

TEST_CASE("identical seeds give identical CSV bytes") {
    auto c = small_config();
    auto a = run_experiment(c);
    auto b = run_experiment(c);
    CHECK(csv_of(a.rows) == csv_of(b.rows));
    c.workers = 3;
    auto parallel = run_experiment(c);
    CHECK(csv_of(parallel.rows) == csv_of(a.rows));
    // Rows come back in (method, family, seed) order whatever the worker count.
    CHECK(a.rows.size() == 4 * 3 * 3);
    CHECK(a.rows[0].method == "riga");
    CHECK(a.rows[0].seed == 1);
    CHECK(a.rows[2].seed == 3);
    CHECK(a.rows.back().method == "two_phase");

    // A single run is reproducible from its seed alone.
    auto one = run_single(c, "riga", Family::OWA, 2);
    CHECK(csv_of({one}) == csv_of({a.rows[3 + 1]}));
}

TEST_CASE("aggregates match a recomputation from the CSV") {
    auto c = small_config();
    auto res = run_experiment(c);
    std::istringstream in(csv_of(res.rows));
    auto rows = read_csv(in);
    REQUIRE(rows.size() == res.rows.size());
    CHECK(csv_of(rows) == csv_of(res.rows));

    std::map<std::pair<std::string, Family>, std::vector<const RunRow*>> groups;
    for (const auto& r : rows) groups[{r.method, r.family}].push_back(&r);
    REQUIRE(res.metrics.size() == groups.size());
    for (const auto& m : res.metrics) {
        const auto& g = groups.at({m.method, m.family});
        double q = 0, e = 0;
        for (const auto* r : g) {
            q += static_cast<double>(r->queries);
            e += r->error_pct;
        }
        CHECK(m.runs == g.size());
        CHECK(std::abs(m.mean_queries - q / static_cast<double>(g.size())) <= 1e-9);
        CHECK(std::abs(m.mean_error_pct - e / static_cast<double>(g.size())) <= 1e-9);
        CHECK(m.mean_error_pct >= 0);
    }
    std::ostringstream table;
    write_table(table, res.metrics);
    CHECK(table.str().find("two_phase") != std::string::npos);
}

TEST_CASE("timed-out rows are counted but left out of the means") {
    RunRow fast{1, "riga", Family::WS, 3, 8, 0.5, 4, 1.0, {}};
    RunRow slow{2, "riga", Family::WS, 3, 8, 50.0, 40, 9.0, {"timeout"}};
    RunRow other{3, "riga", Family::WS, 3, 8, 1.5, 6, 3.0, {"mmr_zero"}};
    auto m = aggregate({fast, slow, other});
    REQUIRE(m.size() == 1);
    CHECK(m[0].runs == 2);
    CHECK(m[0].timeouts == 1);
    CHECK(m[0].mean_time_s == doctest::Approx(1.0));
    CHECK(m[0].mean_queries == doctest::Approx(5.0));
    CHECK(m[0].mean_error_pct == doctest::Approx(2.0));

    RunRow blind{4, "ils", Family::OWA, 3, 60, 0.1, 3, NAN, {"no_oracle"}};
    auto b = aggregate({blind});
    CHECK(std::isnan(b[0].mean_error_pct));
    std::istringstream in(csv_of({blind, slow}));
    auto back = read_csv(in);
    CHECK(std::isnan(back[0].error_pct));
    CHECK(back[1].has_flag("timeout"));
}

TEST_CASE("zero regret over a pool holding the optimum means zero error") {
    auto c = small_config();
    c.methods = {"riga", "two_phase"};
    c.runs = 5;
    std::size_t certified = 0;
    for (const auto& r : run_experiment(c).rows) {
        if (r.has_flag("mmr_zero") && r.has_flag("opt_in_pool")) {
            ++certified;
            CHECK(r.error_pct <= 1e-9);
        }
    }
    CHECK(certified > 0);
}

TEST_CASE("config parsing and validation") {
    auto c = experiment_from_json(json::parse(R"({"problem":"tsp","n":4,"methods":["riga","ils"],"runs":2,
        "riga":{"M":3,"S":6,"K":2},"delta":0.2})"));
    CHECK(c.size == 10);
    CHECK(c.riga.generations == 3);
    CHECK(c.riga.population == 6);
    CHECK(c.riga.delta == 0.2);
    CHECK(c.two_phase.delta == 0.2);
    CHECK(c.seed_list() == std::vector<std::uint64_t>{1, 2});
    auto back = experiment_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));

    auto field_of = [](const char* text) {
        try {
            experiment_from_json(json::parse(text));
        } catch (const FieldError& e) {
            return e.field;
        }
        return std::string("none");
    };
    CHECK(field_of(R"({"problem":"vrp"})") == "problem");
    CHECK(field_of(R"({"methods":["nemo"]})") == "methods");
    CHECK(field_of(R"({"runs":0})") == "runs");
    CHECK(field_of(R"({"riga":{"K":20}})") == "K");
    CHECK(field_of(R"({"n":1})") == "n");
    CHECK(field_of(R"({"families":[]})") == "families");
    CHECK(field_of(R"({"delta":"big"})") == "delta");
    CHECK(field_of(R"({"runs":3,"seeds":[7,9]})") == "none");
    CHECK(experiment_from_json(json::parse(R"({"seeds":[7,9]})")).seed_list() == std::vector<std::uint64_t>{7, 9});
}

TEST_CASE("worker count from the environment") {
    ::setenv("RIGA_WORKERS", "3", 1);
    CHECK(workers_from_env() == 3);
    ::setenv("RIGA_WORKERS", "zero", 1);
    CHECK(workers_from_env() == 1);
    ::unsetenv("RIGA_WORKERS");
    CHECK(workers_from_env() == 1);
}

TEST_CASE("command line exit codes") {
    const std::string bin = RIGA_BENCH_BIN;
    const auto dir = std::filesystem::temp_directory_path() / "riga_bench_test";
    std::filesystem::create_directories(dir);
    const std::string csv = (dir / "runs.csv").string();
    const std::string base = bin + " run --size 6 --runs 2 --families WS --M 2 --S 5 --no-time";
    CHECK(exit_code(base + " --K 2 --csv " + csv) == 0);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "seed,method,family,n,size,time_s,queries,error_pct,flags");
    CHECK(exit_code(bin + " report " + csv) == 0);
    CHECK(exit_code(base + " --methods nemo") == 2);
    CHECK(exit_code(base + " --K 9") == 2);
    CHECK(exit_code(bin + " run --config " + (dir / "missing.json").string()) == 2);
    CHECK(exit_code(base + " --K 2 --timeout 1e-12") == 3);
    CHECK(exit_code(base + " --K 2 --bogus") == 2);
    CHECK(exit_code(bin + " --help") == 0);
    CHECK(exit_code(bin + " gen --problem tsp --size 5 --n 2 --seed 3 -o " + (dir / "t.txt").string()) == 0);
    std::ifstream inst(dir / "t.txt");
    auto loaded = load_instance(inst);
    CHECK(std::get<TspInstance>(loaded) == gen_tsp(5, 2, 3));
    std::filesystem::remove_all(dir);
}
