#pragma once

#include "extfair/instance.hpp"
#include "extfair/partition.hpp"

#include <vector>

namespace extfair {

// assignment[k] = agent that receives bundle k; a bijection on {0..n-1}.
struct Allocation {
    Partition partition;
    std::vector<int> assignment;
    std::vector<Rat> utilities; // indexed by agent
};

// U_i = sum over bundles of the cross value from the bundle's holder to i.
std::vector<Rat> utilities(const Instance& inst, const Partition& p, const std::vector<int>& assignment);

enum class ExtremeMode { Worst, Best };
enum class ExtremeMethod { Matching, Enumerate };

inline constexpr int kDefaultEnumerationCap = 8;

// The assignment of bundles to agents minimizing (or maximizing) one agent's
// utility. Both methods return the lexicographically smallest optimal
// assignment vector, so they agree exactly.
Allocation extreme_allocation(const Instance& inst, const Partition& p, int agent, ExtremeMode mode,
                              ExtremeMethod method = ExtremeMethod::Matching,
                              int enumeration_cap = kDefaultEnumerationCap);

// Closed form of the worst-assignment utility in network form: incoming
// weights sorted ascending paired with bundle values sorted descending.
// Throws GeneralFormUnsupported on general-form instances.
Rat worst_value_network(const Instance& inst, const Partition& p, int agent);

// Exact min-cost perfect matching (assignment problem) on an n x n rational
// cost matrix; returns row -> column.
std::vector<int> min_cost_assignment(const std::vector<std::vector<Rat>>& cost);

} // namespace extfair
