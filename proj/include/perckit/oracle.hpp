#pragma once

#include "perckit/selection.hpp"
#include "perckit/topology.hpp"

#include <string>
#include <vector>

namespace perckit {

// A maximal feasible set of configurations, kept in canonical order
// (sorted by sensor id) so assignments compare deterministically.
struct Assignment {
    std::vector<Configuration> configurations;

    bool operator==(const Assignment&) const = default;
};

// Ranking of an assignment: more sensors assigned beats fewer, then fewer
// rank inversions, then fewer relays. Inversions count every pair where the
// size/power alignment is violated, treating an unassigned sensor as held
// by a rank-bottom device and a non-processing device as holding a
// rank-bottom sensor; this makes the sorted pairing the unique optimum on
// fully connected topologies whatever the S/D size ratio.
struct Score {
    int assigned_count = 0;
    int inversions = 0;
    int relays_used = 0;

    bool operator==(const Score&) const = default;
};

// True when a ranks strictly ahead of b.
bool score_better(const Score& a, const Score& b);

Score score_assignment(const Topology& t, const Assignment& a);

// Convenience: scores a greedy SelectionResult under the same objective.
Score score_selection(const Topology& t, const SelectionResult& r);

// All maximal feasible assignments in deterministic order. Throws
// DomainError when |S| > 6 or |D| > 6.
std::vector<Assignment> enumerate_assignments(const Topology& t);

// Lexicographic-best assignment under Score, ties broken by the canonical
// configuration list. Same size guard as enumerate_assignments.
std::pair<Assignment, Score> best_assignment(const Topology& t);

std::string serialize_assignment(const Assignment& a, const Score& s);

} // namespace perckit
