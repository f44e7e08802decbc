// JSON forms of the domain types (nlohmann::json). Parsers throw FieldError
// naming the offending field so HTTP callers can report it.

#ifndef RIGA_SERIALIZE_HPP
#define RIGA_SERIALIZE_HPP

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "riga/baselines.hpp"
#include "riga/polytope.hpp"
#include "riga/riga.hpp"

namespace riga {

using json = nlohmann::json;

class FieldError : public std::invalid_argument {
public:
    FieldError(std::string field, const std::string& msg)
        : std::invalid_argument(field + ": " + msg), field(std::move(field)) {}
    std::string field;
};

json to_json(const CostVector& y);
CostVector cost_from_json(const json& j, const std::string& field = "cost");

json to_json(const PreferenceModel& m);
PreferenceModel model_from_json(const json& j);

json to_json(const LinearConstraint& c);
json to_json(const ParameterPolytope& p);
ParameterPolytope polytope_from_json(const json& j);

json to_json(const Instance& inst);
/// Accepts an inline instance or {"generate": {problem, n, size, seed}}.
Instance instance_from_json(const json& j);

json to_json(const RigaConfig& c);
/// Missing fields fall back to `defaults`; the result is validated.
RigaConfig config_from_json(const json& j, const RigaConfig& defaults = {});

json to_json(const Solution& s);
json to_json(const RunTrace& t);

std::string to_string(Answer a);
Answer parse_answer(const std::string& s);

}  // namespace riga

#endif  // RIGA_SERIALIZE_HPP
