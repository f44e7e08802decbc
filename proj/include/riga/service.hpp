// Interactive elicitation sessions over HTTP. Each session runs RIGA on its
// own worker thread; the oracle it asks blocks until a client posts an
// answer. Sessions persist as (request, answers) and are rebuilt by replay.

#ifndef RIGA_SERVICE_HPP
#define RIGA_SERVICE_HPP

#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "riga/serialize.hpp"

namespace httplib {
class Server;
}

namespace riga {

enum class SessionState { AwaitingAnswer, Computing, Finished, Failed };
std::string_view to_string(SessionState s);

struct AnsweredQuery {
    CostVector a;
    CostVector b;
    Answer answer = Answer::PrefersA;
    QueryContext context;
};

struct PendingQuery {
    std::size_t index = 0;  // number of answers before this query
    CostVector a;
    CostVector b;
    QueryContext context;
};

/// Immutable view of a session; replaced wholesale on every transition.
struct SessionView {
    std::string id;
    SessionState state = SessionState::Computing;
    std::string method;
    RigaConfig config;
    std::shared_ptr<const Instance> instance;
    std::vector<AnsweredQuery> history;
    std::optional<PendingQuery> pending;
    std::optional<Solution> recommendation;
    std::optional<RunTrace> trace;  // Finished or Failed
    std::string error;
};

json to_json(const SessionView& v);
/// Pending pair with per-objective display context, or the state otherwise.
json query_json(const SessionView& v);

class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Conflict : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SessionStore {
public:
    /// Without a directory sessions live in memory only.
    explicit SessionStore(std::optional<std::filesystem::path> dir = std::nullopt);
    ~SessionStore();
    SessionStore(const SessionStore&) = delete;
    SessionStore& operator=(const SessionStore&) = delete;

    /// Body: {"config": {...}, "instance": {...}}. Throws FieldError.
    std::shared_ptr<const SessionView> create(const json& body);
    std::shared_ptr<const SessionView> get(const std::string& id) const;
    /// `query_index`, when given, must name the pending query.
    std::shared_ptr<const SessionView> answer(const std::string& id, Answer choice,
                                              std::optional<std::size_t> query_index = std::nullopt);
    /// Blocks until the session leaves Computing (or the timeout elapses).
    std::shared_ptr<const SessionView> wait_settled(const std::string& id, double timeout_s = 60) const;
    std::size_t size() const;

private:
    struct Session;
    class WireDm;

    std::shared_ptr<Session> find(const std::string& id) const;
    std::shared_ptr<const SessionView> start(std::shared_ptr<Session> s);
    void persist(const Session& s) const;
    void load_all();
    static void publish(Session& s);
    static void work(Session& s);

    std::optional<std::filesystem::path> dir_;
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Routes the JSON API onto a store.
void install_routes(httplib::Server& server, SessionStore& store);

}  // namespace riga

#endif  // RIGA_SERVICE_HPP
