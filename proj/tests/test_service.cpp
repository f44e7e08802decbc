#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "riga/baselines.hpp"
#include "service_driver.hpp"

using namespace riga;
using drive::get;
using drive::post;

namespace {

json walkthrough_body() {
    return json::parse(R"({
        "config": {"M": 2, "S": 5, "K": 2, "delta": 0, "family": "OWA", "seed": 1},
        "instance": {"problem": "explicit", "points": [[49, 52, 60], [39, 50, 66], [56, 57, 58]]}})");
}

PreferenceModel walkthrough_dm() { return PreferenceModel(Family::OWA, OwaWeights{{0.1, 0.3, 0.6}}, Sense::Minimize); }

std::filesystem::path fresh_dir(const std::string& name) {
    auto d = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(d);
    return d;
}

}  // namespace

TEST_CASE("walkthrough over HTTP") {
    drive::LocalServer srv;
    auto c = srv.client();
    CHECK(get(c, "/healthz").body.at("status") == "ok");

    auto created = post(c, "/sessions?wait=30", walkthrough_body());
    REQUIRE(created.status == 201);
    CHECK(created.body.at("state") == "AwaitingAnswer");
    const std::string id = created.body.at("id");

    auto q = get(c, "/sessions/" + id + "/query");
    REQUIRE(q.body.at("pending") == true);
    CHECK(q.body.at("query_index") == 0);
    // x* is A; C is the first listed of the two regret-2 adversaries.
    CHECK(q.body.at("a").at("cost") == json::array({49, 52, 60}));
    CHECK(q.body.at("b").at("cost") == json::array({56, 57, 58}));
    CHECK(q.body.at("a").at("label") == "A");
    CHECK(q.body.at("context").at("orientation") == "minimize");
    CHECK(q.body.at("context").at("objectives").size() == 3);
    CHECK(q.body.at("context").at("objectives")[0].at("min") == 39);
    CHECK(q.body.at("a").at("normalized")[0] == doctest::Approx((49.0 - 39) / (56 - 39)));
    CHECK(q.body.at("progress").at("mmr") == doctest::Approx(2));
    CHECK(q.body.at("progress").at("queries") == 0);
    // Reads are idempotent.
    CHECK(get(c, "/sessions/" + id + "/query").body == q.body);

    CHECK(get(c, "/sessions/" + id + "/recommendation").status == 409);

    auto final = drive::answer_all(c, id, walkthrough_dm());
    CHECK(final.at("state") == "Finished");
    CHECK(final.at("history").size() == 2);
    auto rec = get(c, "/sessions/" + id + "/recommendation");
    REQUIRE(rec.status == 200);
    CHECK(rec.body.at("solution").at("cost") == json::array({49, 52, 60}));
    CHECK(rec.body.at("trace").at("totals").at("queries") == 2);

    auto done = get(c, "/sessions/" + id + "/query");
    CHECK(done.body.at("pending") == false);
    CHECK(done.body.at("recommendation") == "/sessions/" + id + "/recommendation");
    CHECK(post(c, "/sessions/" + id + "/answer", {{"choice", "A"}}).status == 409);
}

TEST_CASE("stale and duplicate answers are conflicts") {
    drive::LocalServer srv;
    auto c = srv.client();
    const std::string id = post(c, "/sessions?wait=30", walkthrough_body()).body.at("id");
    auto wrong = post(c, "/sessions/" + id + "/answer", {{"choice", "A"}, {"query_index", 5}});
    CHECK(wrong.status == 409);
    CHECK(wrong.body.at("code") == "conflict");
    auto first = post(c, "/sessions/" + id + "/answer?wait=30", {{"choice", "A"}, {"query_index", 0}});
    CHECK(first.status == 200);
    // Resubmitting the answer to query 0 must not be applied twice.
    auto again = post(c, "/sessions/" + id + "/answer?wait=30", {{"choice", "A"}, {"query_index", 0}});
    CHECK(again.status == 409);
    auto state = get(c, "/sessions/" + id).body;
    CHECK(state.at("history").size() == 1);
    CHECK(state.at("state") == "AwaitingAnswer");
}

TEST_CASE("malformed requests") {
    drive::LocalServer srv;
    auto c = srv.client();
    CHECK(get(c, "/sessions/nope").status == 404);
    CHECK(get(c, "/sessions/nope/query").body.at("code") == "not_found");
    CHECK(post(c, "/sessions/nope/answer", {{"choice", "A"}}).status == 404);

    auto field_of = [&](const json& body) {
        auto r = post(c, "/sessions", body);
        CHECK(r.status == 400);
        return r.body.value("field", std::string());
    };
    auto body = walkthrough_body();
    body["config"]["K"] = 7;
    CHECK(field_of(body) == "K");
    body = walkthrough_body();
    body["config"]["family"] = "Sugeno";
    CHECK(field_of(body) == "family");
    body = walkthrough_body();
    body["config"]["method"] = "nemo";
    CHECK(field_of(body) == "method");
    body = walkthrough_body();
    body["instance"]["points"] = json::array({json::array({1, 2}), json::array({1, 2, 3})});
    CHECK(field_of(body) == "instance.points");
    CHECK(field_of(json::parse(R"({"config": {}})")) == "instance");
    CHECK(field_of(json::array()) == "body");
    CHECK(srv.store().size() == 0);

    httplib::Client raw = srv.client();
    auto bad = raw.Post("/sessions", "{not json", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);

    const std::string id = post(c, "/sessions?wait=30", walkthrough_body()).body.at("id");
    CHECK(post(c, "/sessions/" + id + "/answer", {{"choice", "C"}}).body.at("field") == "choice");
    CHECK(post(c, "/sessions/" + id + "/answer", {{"pick", "A"}}).status == 400);
    CHECK(post(c, "/sessions/" + id + "/answer", {{"choice", "A"}, {"query_index", -1}}).body.at("field") ==
          "query_index");
    CHECK(get(c, "/sessions/" + id + "?wait=soon").body.at("field") == "wait");
}

TEST_CASE("a lax threshold finishes without questions") {
    drive::LocalServer srv;
    auto c = srv.client();
    auto body = walkthrough_body();
    body["config"]["delta"] = 1.0;
    auto r = post(c, "/sessions?wait=30", body);
    REQUIRE(r.status == 201);
    CHECK(r.body.at("state") == "Finished");
    CHECK(r.body.at("history").empty());
    auto rec = get(c, "/sessions/" + r.body.at("id").get<std::string>() + "/recommendation");
    CHECK(rec.body.at("trace").at("totals").at("queries") == 0);
}

TEST_CASE("sessions match direct runs under the same answers") {
    drive::LocalServer srv;
    auto c = srv.client();
    const char* methods[] = {"riga", "riga_kcss", "riga_s"};
    const Family families[] = {Family::WS, Family::OWA, Family::Choquet2};
    for (int t = 0; t < 6; ++t) {
        json body = {{"config", {{"M", 3}, {"S", 8}, {"K", 3}, {"seed", 10 + t}, {"family", to_string(families[t % 3])},
                                 {"method", methods[t % 3]}}},
                     {"instance", {{"generate", {{"problem", t % 2 ? "tsp" : "knapsack"},
                                                 {"n", 3}, {"size", t % 2 ? 7 : 10}, {"seed", 20 + t}}}}}};
        auto created = post(c, "/sessions", body);
        REQUIRE(created.status == 201);
        const std::string id = created.body.at("id");
        Instance inst = instance_from_json(body.at("instance"));
        auto hidden = gen_hidden(families[t % 3], 3, sense_of(inst), 30 + t);
        auto final = drive::answer_all(c, id, hidden);
        REQUIRE(final.at("state") == "Finished");
        auto rec = get(c, "/sessions/" + id + "/recommendation").body;

        RigaConfig cfg = config_from_json(body.at("config"), t % 2 ? RigaConfig::tsp_defaults()
                                                                  : RigaConfig::knapsack_defaults());
        SimulatedDm dm(hidden);
        RunResult direct = t % 3 == 0 ? riga_run(inst, cfg, dm)
                           : t % 3 == 1 ? riga_kcss_run(inst, cfg, dm)
                                        : riga_s_run(inst, cfg, dm);
        CAPTURE(t);
        CHECK(rec.at("solution").at("encoding").get<std::vector<int>>() == direct.recommendation.encoding);
        CHECK(rec.at("trace").at("queries").size() == direct.trace.queries.size());
        CHECK(final.at("history").size() == direct.trace.queries.size());
        CHECK(rec.at("trace").at("method") == methods[t % 3]);

        // Replaying the recorded choices reproduces the run.
        std::vector<Answer> choices;
        for (const auto& h : final.at("history")) choices.push_back(parse_answer(h.at("choice").get<std::string>()));
        ScriptedDm script(choices);
        RunResult replay = t % 3 == 0 ? riga_run(inst, cfg, script)
                           : t % 3 == 1 ? riga_kcss_run(inst, cfg, script)
                                        : riga_s_run(inst, cfg, script);
        CHECK(replay.recommendation.encoding == direct.recommendation.encoding);
        CHECK(script.consumed() == choices.size());
    }
}

TEST_CASE("a restarted service resumes sessions from disk") {
    const auto dir = fresh_dir("riga_service_test");
    std::string id;
    json pending;
    {
        drive::LocalServer srv(dir);
        auto c = srv.client();
        id = post(c, "/sessions?wait=30", walkthrough_body()).body.at("id");
        CHECK(post(c, "/sessions/" + id + "/answer?wait=30", {{"choice", "A"}, {"query_index", 0}}).status == 200);
        pending = get(c, "/sessions/" + id + "/query").body;
        REQUIRE(pending.at("pending") == true);
        CHECK(std::filesystem::exists(dir / (id + ".json")));
    }
    {
        drive::LocalServer srv(dir);
        auto c = srv.client();
        CHECK(srv.store().size() == 1);
        auto q = get(c, "/sessions/" + id + "/query?wait=30").body;
        // Same pending pair, same index, same progress.
        CHECK(q == pending);
        auto final = drive::answer_all(c, id, walkthrough_dm());
        CHECK(final.at("state") == "Finished");
        CHECK(get(c, "/sessions/" + id + "/recommendation").body.at("solution").at("cost") ==
              json::array({49, 52, 60}));
    }
    {
        // A finished session comes back finished.
        drive::LocalServer srv(dir);
        auto c = srv.client();
        CHECK(get(c, "/sessions/" + id + "?wait=30").body.at("state") == "Finished");
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("recorded answers in the create request are replayed") {
    drive::LocalServer srv;
    auto c = srv.client();
    auto body = walkthrough_body();
    body["answers"] = json::array({"A", "A"});
    auto r = post(c, "/sessions?wait=30", body);
    REQUIRE(r.status == 201);
    CHECK(r.body.at("state") == "Finished");
    CHECK(r.body.at("history").size() == 2);
}

TEST_CASE("failed sessions carry the rejected statement and the trace") {
    // Contradictions cannot be reached through CSS questions (see the riga
    // tests), so the report format is checked on a constructed view.
    SessionView v;
    v.id = "x";
    v.state = SessionState::Failed;
    v.instance = std::make_shared<const Instance>(ExplicitInstance{{{1, 5, 3}, {6, 1, 2}}, Sense::Minimize});
    RunTrace trace;
    trace.method = "riga";
    trace.inconsistent = true;
    trace.queries.push_back({1, {1, 5, 3}, {6, 1, 2}, Answer::PrefersA, 2.0, false});
    trace.queries.push_back({1, {4, 3, 3}, {1, 5, 3}, Answer::PrefersA, 1.0, true});
    v.trace = trace;
    v.error = "inconsistent answers";
    auto j = to_json(v);
    CHECK(j.at("state") == "Failed");
    REQUIRE(j.at("inconsistency").at("rejected").size() == 1);
    CHECK(j.at("inconsistency").at("rejected")[0].at("a") == json::array({4, 3, 3}));
    CHECK(j.at("inconsistency").at("trace").at("queries").size() == 2);
    CHECK(query_json(v).at("pending") == false);
    CHECK(query_json(v).at("error") == "inconsistent answers");
}
