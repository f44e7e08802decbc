// Decision-maker oracles: the interface RIGA asks pairwise questions through,
// a simulated DM driven by a hidden model, and a scripted DM that replays
// recorded answers.

#ifndef RIGA_DM_HPP
#define RIGA_DM_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "riga/preference.hpp"

namespace riga {

enum class Answer { PrefersA, PrefersB };

/// Where in a run a question is being asked.
struct QueryContext {
    std::size_t generation = 0;      // 1-based; 0 for baselines without generations
    std::size_t queries_asked = 0;   // before this one
    double mmr = 0;                  // current minimax regret
    double normalized_mmr = 0;       // mmr / phase-start mmr
};

class DmOracle {
public:
    virtual ~DmOracle() = default;
    virtual Answer answer(const CostVector& a, const CostVector& b, const QueryContext& ctx) = 0;
};

/// Answers from a hidden model; ties favour `a`.
class SimulatedDm final : public DmOracle {
public:
    explicit SimulatedDm(PreferenceModel hidden) : hidden_(std::move(hidden)) {}
    Answer answer(const CostVector& a, const CostVector& b, const QueryContext&) override {
        return hidden_.prefers(a, b) ? Answer::PrefersA : Answer::PrefersB;
    }
    const PreferenceModel& hidden() const { return hidden_; }

private:
    PreferenceModel hidden_;
};

/// Raised by ScriptedDm when the run needs an answer it does not have yet.
struct AnswerNeeded {
    CostVector a;
    CostVector b;
    QueryContext context;
};

/// Replays answers in order; throws AnswerNeeded once they run out.
class ScriptedDm final : public DmOracle {
public:
    explicit ScriptedDm(std::vector<Answer> answers) : answers_(std::move(answers)) {}
    Answer answer(const CostVector& a, const CostVector& b, const QueryContext& ctx) override {
        if (next_ >= answers_.size()) throw AnswerNeeded{a, b, ctx};
        return answers_[next_++];
    }
    std::size_t consumed() const { return next_; }

private:
    std::vector<Answer> answers_;
    std::size_t next_ = 0;
};

}  // namespace riga

#endif  // RIGA_DM_HPP
