#include "riga/service.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <random>

#include "httplib.h"

namespace riga {

namespace {

struct Cancelled {};

std::string new_id() {
    static std::mutex mu;
    static std::mt19937_64 gen{std::random_device{}()};
    std::lock_guard lock(mu);
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(gen()));
    return buf;
}

// Per-objective [min, max] over the instance, for display normalization.
std::vector<std::pair<double, double>> objective_bounds(const Instance& inst) {
    const std::size_t n = objectives_of(inst);
    std::vector<std::pair<double, double>> out(n);
    if (const auto* k = std::get_if<KnapsackInstance>(&inst)) {
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<int> vals;
            for (const auto& item : k->items) vals.push_back(item[j]);
            std::sort(vals.rbegin(), vals.rend());
            double top = 0;
            for (int i = 0; i < k->capacity && i < static_cast<int>(vals.size()); ++i) top += vals[i];
            out[j] = {0, top};
        }
    } else if (const auto* t = std::get_if<TspInstance>(&inst)) {
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<int> edges;
            for (std::size_t a = 0; a < t->cities; ++a)
                for (std::size_t b = a + 1; b < t->cities; ++b) edges.push_back(t->layers[j][a * t->cities + b]);
            std::sort(edges.begin(), edges.end());
            double lo = 0, hi = 0;
            for (std::size_t i = 0; i < t->cities && i < edges.size(); ++i) {
                lo += edges[i];
                hi += edges[edges.size() - 1 - i];
            }
            out[j] = {lo, hi};
        }
    } else {
        const auto& e = std::get<ExplicitInstance>(inst);
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = {e.points[0][j], e.points[0][j]};
            for (const auto& p : e.points) {
                out[j].first = std::min(out[j].first, p[j]);
                out[j].second = std::max(out[j].second, p[j]);
            }
        }
    }
    return out;
}

json progress_json(const SessionView& v, const QueryContext* ctx) {
    json p = {{"generations", v.config.generations}, {"queries", v.history.size()}};
    if (ctx) {
        p["generation"] = ctx->generation;
        p["mmr"] = ctx->mmr;
        p["normalized_mmr"] = ctx->normalized_mmr;
    }
    return p;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << content;
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

std::string_view to_string(SessionState s) {
    switch (s) {
        case SessionState::AwaitingAnswer: return "AwaitingAnswer";
        case SessionState::Computing: return "Computing";
        case SessionState::Finished: return "Finished";
        case SessionState::Failed: return "Failed";
    }
    return "?";
}

struct SessionStore::Session {
    std::mutex mu;
    std::condition_variable cv;
    std::string id;
    json request;  // {"config", "instance"} as accepted
    std::string method;
    RigaConfig config;
    std::shared_ptr<const Instance> instance;
    std::vector<Answer> answers;
    std::size_t replayed = 0;
    std::vector<AnsweredQuery> history;
    std::optional<PendingQuery> pending;
    SessionState state = SessionState::Computing;
    std::optional<Solution> recommendation;
    std::optional<RunTrace> trace;
    std::string error;
    bool cancel = false;
    std::shared_ptr<const SessionView> view;
    std::thread worker;
};

class SessionStore::WireDm final : public DmOracle {
public:
    explicit WireDm(Session& s) : s_(s) {}

    Answer answer(const CostVector& a, const CostVector& b, const QueryContext& ctx) override {
        std::unique_lock lock(s_.mu);
        if (s_.cancel) throw Cancelled{};
        // Recorded answers (after a restart) are consumed without blocking.
        if (s_.replayed < s_.answers.size()) {
            Answer ans = s_.answers[s_.replayed++];
            s_.history.push_back({a, b, ans, ctx});
            return ans;
        }
        const std::size_t index = s_.answers.size();
        s_.pending = PendingQuery{index, a, b, ctx};
        s_.state = SessionState::AwaitingAnswer;
        publish(s_);
        s_.cv.wait(lock, [&] { return s_.cancel || s_.answers.size() > index; });
        if (s_.cancel) throw Cancelled{};
        s_.replayed = s_.answers.size();
        return s_.answers[index];
    }

private:
    Session& s_;
};

void SessionStore::publish(Session& s) {
    auto v = std::make_shared<SessionView>();
    v->id = s.id;
    v->state = s.state;
    v->method = s.method;
    v->config = s.config;
    v->instance = s.instance;
    v->history = s.history;
    v->pending = s.pending;
    v->recommendation = s.recommendation;
    v->trace = s.trace;
    v->error = s.error;
    s.view = std::move(v);
    s.cv.notify_all();
}

void SessionStore::work(Session& s) {
    WireDm dm(s);
    try {
        RunResult r = s.method == "riga_kcss" ? riga_kcss_run(*s.instance, s.config, dm)
                      : s.method == "riga_s"  ? riga_s_run(*s.instance, s.config, dm)
                                              : riga_run(*s.instance, s.config, dm);
        std::lock_guard lock(s.mu);
        s.pending.reset();
        s.trace = std::move(r.trace);
        if (s.trace->inconsistent) {
            s.state = SessionState::Failed;
            s.error = "inconsistent answers: a statement would have emptied the parameter polytope";
        } else {
            s.state = SessionState::Finished;
            s.recommendation = std::move(r.recommendation);
        }
        publish(s);
    } catch (const Cancelled&) {
    } catch (const std::exception& e) {
        std::lock_guard lock(s.mu);
        s.pending.reset();
        s.state = SessionState::Failed;
        s.error = e.what();
        publish(s);
    }
}

SessionStore::SessionStore(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {
    if (dir_) {
        std::filesystem::create_directories(*dir_);
        load_all();
    }
}

SessionStore::~SessionStore() {
    std::map<std::string, std::shared_ptr<Session>> all;
    {
        std::lock_guard lock(mu_);
        all.swap(sessions_);
    }
    for (auto& [id, s] : all) {
        {
            std::lock_guard lock(s->mu);
            s->cancel = true;
        }
        s->cv.notify_all();
    }
    for (auto& [id, s] : all)
        if (s->worker.joinable()) s->worker.join();
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw NotFound("no session '" + id + "'");
    return it->second;
}

std::shared_ptr<const SessionView> SessionStore::start(std::shared_ptr<Session> s) {
    std::shared_ptr<const SessionView> view;
    {
        std::lock_guard lock(s->mu);
        publish(*s);
        view = s->view;
    }
    {
        std::lock_guard lock(mu_);
        sessions_[s->id] = s;
    }
    Session* raw = s.get();
    s->worker = std::thread([raw] { work(*raw); });
    return view;
}

std::shared_ptr<const SessionView> SessionStore::create(const json& body) {
    if (!body.is_object()) throw FieldError("body", "must be a JSON object");
    if (!body.contains("instance")) throw FieldError("instance", "missing");
    auto s = std::make_shared<Session>();
    s->instance = std::make_shared<const Instance>(instance_from_json(body.at("instance")));
    json cfg = body.value("config", json::object());
    if (!cfg.is_object()) throw FieldError("config", "must be an object");
    s->method = cfg.value("method", std::string("riga"));
    if (s->method != "riga" && s->method != "riga_kcss" && s->method != "riga_s")
        throw FieldError("method", "must be riga, riga_kcss or riga_s");
    RigaConfig defaults =
        std::holds_alternative<TspInstance>(*s->instance) ? RigaConfig::tsp_defaults() : RigaConfig::knapsack_defaults();
    s->config = config_from_json(cfg, defaults);
    if (s->config.family == Family::Choquet2 && objectives_of(*s->instance) > 12)
        throw FieldError("family", "Choquet2 supports at most 12 objectives");
    s->request = {{"config", cfg}, {"instance", to_json(*s->instance)}};
    if (body.contains("answers")) {
        for (const auto& a : body.at("answers")) s->answers.push_back(parse_answer(a.get<std::string>()));
    }
    {
        std::lock_guard lock(mu_);
        do s->id = new_id();
        while (sessions_.count(s->id));
    }
    persist(*s);
    return start(std::move(s));
}

std::shared_ptr<const SessionView> SessionStore::get(const std::string& id) const {
    auto s = find(id);
    std::lock_guard lock(s->mu);
    return s->view;
}

std::shared_ptr<const SessionView> SessionStore::answer(const std::string& id, Answer choice,
                                                        std::optional<std::size_t> query_index) {
    auto s = find(id);
    std::lock_guard lock(s->mu);
    if (s->state != SessionState::AwaitingAnswer)
        throw Conflict("session is " + std::string(to_string(s->state)) + ", not awaiting an answer");
    if (query_index && *query_index != s->pending->index)
        throw Conflict("query " + std::to_string(*query_index) + " is not pending (pending: " +
                       std::to_string(s->pending->index) + ")");
    s->answers.push_back(choice);
    s->history.push_back({s->pending->a, s->pending->b, choice, s->pending->context});
    s->pending.reset();
    s->state = SessionState::Computing;
    persist(*s);
    publish(*s);
    return s->view;
}

std::shared_ptr<const SessionView> SessionStore::wait_settled(const std::string& id, double timeout_s) const {
    auto s = find(id);
    std::unique_lock lock(s->mu);
    s->cv.wait_for(lock, std::chrono::duration<double>(timeout_s),
                   [&] { return s->state != SessionState::Computing; });
    return s->view;
}

std::size_t SessionStore::size() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
}

void SessionStore::persist(const Session& s) const {
    if (!dir_) return;
    json answers = json::array();
    for (Answer a : s.answers) answers.push_back(to_string(a));
    json j = s.request;
    j["id"] = s.id;
    j["answers"] = answers;
    write_file_atomic(*dir_ / (s.id + ".json"), j.dump());
}

void SessionStore::load_all() {
    for (const auto& entry : std::filesystem::directory_iterator(*dir_)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        json j = json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.contains("id")) continue;
        auto s = std::make_shared<Session>();
        s->id = j.at("id").get<std::string>();
        s->request = {{"config", j.at("config")}, {"instance", j.at("instance")}};
        s->instance = std::make_shared<const Instance>(instance_from_json(j.at("instance")));
        s->method = j.at("config").value("method", std::string("riga"));
        RigaConfig defaults = std::holds_alternative<TspInstance>(*s->instance) ? RigaConfig::tsp_defaults()
                                                                                 : RigaConfig::knapsack_defaults();
        s->config = config_from_json(j.at("config"), defaults);
        for (const auto& a : j.at("answers")) s->answers.push_back(parse_answer(a.get<std::string>()));
        start(std::move(s));
    }
}

json to_json(const SessionView& v) {
    json j = {{"id", v.id},
              {"state", std::string(to_string(v.state))},
              {"method", v.method},
              {"config", to_json(v.config)},
              {"progress", progress_json(v, v.pending ? &v.pending->context : nullptr)},
              {"pending", v.pending.has_value()}};
    json hist = json::array();
    for (const auto& q : v.history)
        hist.push_back({{"a", q.a.values()}, {"b", q.b.values()}, {"choice", to_string(q.answer)},
                        {"generation", q.context.generation}});
    j["history"] = hist;
    if (v.state == SessionState::Finished) j["recommendation"] = "/sessions/" + v.id + "/recommendation";
    if (!v.error.empty()) j["error"] = v.error;
    if (v.state == SessionState::Failed && v.trace) {
        json rejected = json::array();
        for (const auto& q : v.trace->queries)
            if (q.rejected)
                rejected.push_back({{"a", q.a.values()}, {"b", q.b.values()}, {"choice", to_string(q.answer)}});
        j["inconsistency"] = {{"rejected", rejected}, {"trace", to_json(*v.trace)}};
    }
    return j;
}

json query_json(const SessionView& v) {
    if (!v.pending) {
        json j = {{"state", std::string(to_string(v.state))}, {"pending", false}};
        if (v.state == SessionState::Finished) j["recommendation"] = "/sessions/" + v.id + "/recommendation";
        if (!v.error.empty()) j["error"] = v.error;
        return j;
    }
    const auto& q = *v.pending;
    json objectives = json::array();
    auto bounds = objective_bounds(*v.instance);
    for (std::size_t i = 0; i < bounds.size(); ++i)
        objectives.push_back({{"label", "f" + std::to_string(i + 1)}, {"min", bounds[i].first}, {"max", bounds[i].second}});
    auto normalized = [&](const CostVector& y) {
        std::vector<double> out;
        for (std::size_t i = 0; i < y.size(); ++i) {
            double span = bounds[i].second - bounds[i].first;
            out.push_back(span > 0 ? (y[i] - bounds[i].first) / span : 0.0);
        }
        return out;
    };
    return {{"state", std::string(to_string(v.state))},
            {"pending", true},
            {"query_index", q.index},
            {"a", {{"label", "A"}, {"cost", q.a.values()}, {"normalized", normalized(q.a)}}},
            {"b", {{"label", "B"}, {"cost", q.b.values()}, {"normalized", normalized(q.b)}}},
            {"context",
             {{"objectives", objectives}, {"orientation", std::string(to_string(sense_of(*v.instance)))}}},
            {"progress", progress_json(v, &q.context)}};
}

void install_routes(httplib::Server& server, SessionStore& store) {
    using httplib::Request;
    using httplib::Response;
    auto send = [](Response& res, int status, const json& body) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    };
    auto fail = [send](Response& res, int status, const std::string& code, const std::string& message,
                       const std::string& field = {}) {
        json j = {{"code", code}, {"message", message}};
        if (!field.empty()) j["field"] = field;
        send(res, status, j);
    };
    // Runs `fn`, mapping domain exceptions onto HTTP errors.
    auto guarded = [fail](auto fn) {
        return [fail, fn](const Request& req, Response& res) {
            try {
                fn(req, res);
            } catch (const FieldError& e) {
                fail(res, 400, "invalid_request", e.what(), e.field);
            } catch (const NotFound& e) {
                fail(res, 404, "not_found", e.what());
            } catch (const Conflict& e) {
                fail(res, 409, "conflict", e.what());
            } catch (const json::exception& e) {
                fail(res, 400, "invalid_json", e.what());
            } catch (const std::exception& e) {
                fail(res, 500, "internal", e.what());
            }
        };
    };
    auto wait_param = [](const Request& req) {
        if (!req.has_param("wait")) return 0.0;
        const std::string v = req.get_param_value("wait");
        char* end = nullptr;
        double w = std::strtod(v.c_str(), &end);
        if (v.empty() || *end != '\0' || !(w >= 0)) throw FieldError("wait", "must be a nonnegative number of seconds");
        return std::min(w, 300.0);
    };

    server.Get("/healthz", [send](const Request&, Response& res) {
        send(res, 200, {{"status", "ok"}});
    });
    server.Post("/sessions", guarded([&store, send, wait_param](const Request& req, Response& res) {
        json body = json::parse(req.body);
        auto v = store.create(body);
        if (double w = wait_param(req); w > 0) v = store.wait_settled(v->id, w);
        send(res, 201, to_json(*v));
    }));
    server.Get(R"(/sessions/([^/]+))", guarded([&store, send, wait_param](const Request& req, Response& res) {
        std::string id = req.matches[1];
        auto v = store.get(id);
        if (double w = wait_param(req); w > 0) v = store.wait_settled(id, w);
        send(res, 200, to_json(*v));
    }));
    server.Get(R"(/sessions/([^/]+)/query)", guarded([&store, send, wait_param](const Request& req, Response& res) {
        std::string id = req.matches[1];
        auto v = store.get(id);
        if (double w = wait_param(req); w > 0) v = store.wait_settled(id, w);
        send(res, 200, query_json(*v));
    }));
    server.Post(R"(/sessions/([^/]+)/answer)", guarded([&store, send, wait_param](const Request& req, Response& res) {
        std::string id = req.matches[1];
        json body = json::parse(req.body);
        if (!body.is_object() || !body.contains("choice") || !body.at("choice").is_string())
            throw FieldError("choice", "must be \"A\" or \"B\"");
        Answer choice = parse_answer(body.at("choice").get<std::string>());
        std::optional<std::size_t> index;
        if (body.contains("query_index")) {
            if (!body.at("query_index").is_number_unsigned()) throw FieldError("query_index", "must be an integer");
            index = body.at("query_index").get<std::size_t>();
        }
        auto v = store.answer(id, choice, index);
        if (double w = wait_param(req); w > 0) v = store.wait_settled(id, w);
        send(res, 200, to_json(*v));
    }));
    server.Get(R"(/sessions/([^/]+)/recommendation)", guarded([&store, send](const Request& req, Response& res) {
        auto v = store.get(req.matches[1]);
        if (v->state != SessionState::Finished)
            throw Conflict("session is " + std::string(to_string(v->state)) + ", no recommendation yet");
        send(res, 200, {{"solution", to_json(*v->recommendation)}, {"trace", to_json(*v->trace)}});
    }));
}

}  // namespace riga
