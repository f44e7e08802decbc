#ifndef RIGA_TRACE_HPP
#define RIGA_TRACE_HPP

#include <optional>
#include <string>
#include <vector>

#include "riga/dm.hpp"
#include "riga/problems.hpp"

namespace riga {

struct QueryRecord {
    std::size_t generation = 0;
    CostVector a;
    CostVector b;
    Answer answer = Answer::PrefersA;
    double mmr_before = 0;
    bool rejected = false;  // answer would have emptied the polytope
};

/// One elicitation phase (one per generation, K per generation for RIGA_KCSS).
struct PhaseRecord {
    std::size_t generation = 0;
    std::size_t round = 0;
    std::vector<CostVector> population;
    double mmr_start = 0;
    double mmr_end = 0;
    std::size_t queries = 0;
    CostVector x_star;
    bool exhausted = false;
    bool inconsistent = false;
};

struct RunTrace {
    std::string method;
    std::vector<PhaseRecord> phases;
    std::vector<QueryRecord> queries;
    std::optional<Solution> recommendation;
    std::vector<std::string> warnings;
    bool inconsistent = false;
    double wall_time_s = 0;

    /// Queries whose statement entered the polytope.
    std::size_t accepted_queries() const;
};

}  // namespace riga

#endif  // RIGA_TRACE_HPP
