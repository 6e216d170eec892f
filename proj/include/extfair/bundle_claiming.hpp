#pragma once

#include "extfair/allocation.hpp"
#include "extfair/fairness.hpp"
#include "extfair/instance.hpp"
#include "extfair/partitioning.hpp"

#include <map>
#include <optional>
#include <vector>

namespace extfair {

enum class PartitionSource { Exact, Lpt };

// Mapping target for a satisfied agent that is not yet accounted against a
// reference-bundle position.
inline constexpr int kFloating = -1;

// Smallest-cardinality subset of the given items whose value reaches the
// threshold, greedily built from the largest values (ties by ascending item
// index). nullopt when even all items together fall short.
std::optional<ItemSet> min_expectation_bundle(std::span<const int> items, std::span<const Rat> values_by_item,
                                              const Rat& threshold);

// members: (agent id, value of that agent's claimed bundle), distinct ids.
// Returns a minimum-cardinality subset whose summed value lies in
// [target/2, target]; ties by lexicographically first combination in member
// order. nullopt when no subset of any size is compatible.
std::optional<std::vector<int>> compatible_subset(std::span<const std::pair<int, Rat>> members, const Rat& target);

// Claim progress of one still-unsatisfied agent.
struct AgentClaimState {
    int agent = -1;
    Partition source{0, 0, {}};     // reference partition O_i (nicified)
    std::vector<int> sorted_order;  // bundle index per sorted position
    std::vector<Rat> v;             // reference values, sorted non-increasing
    Rat source_objective = 0;       // sorted-objective of v under own weights
    int level = 0;                  // expectation position, 0-based; <= n-1
    std::map<int, int> mapping;     // satisfied agent -> position or kFloating
    std::vector<char> pinned;       // positions fixed by a relocation
};

struct LevelCheck {
    int level;
    Rat mapped_value;
    bool lower_ok; // mapped value >= v[level]/2
    bool upper_ok; // mapped value <= v[level]
};

struct SatisfactionReport {
    std::vector<LevelCheck> levels;
    Rat floating_value = 0;
    bool floating_ok = true; // floating value < v[level]/2; waived at zero expectation
    bool zero_expectation = false;
    Rat external_value = 0; // sum over satisfied j of w_{j,i} * V_i(B_j)
    Rat external_floor = 0; // sum over positions below level of x_k * v_k / 2
    bool external_ok = true;

    bool ok() const;
};

// Verifies the mapping-validity conditions and the external-satisfaction
// floor for one remaining agent. bundles_by_agent[k] is the claimed bundle of
// satisfied agent k (only ids present in the mapping are read).
SatisfactionReport check_external_satisfaction(const Instance& inst, const std::vector<ItemSet>& bundles_by_agent,
                                               const AgentClaimState& st);

struct SwapEvent {
    int agent;           // whose mapping was rewritten
    int moved_satisfied; // satisfied agent relocated to a lower position
    int to_level;
    std::vector<int> evicted; // former occupants, now floating
};

// Raises the agent's expectation position while the floating claims are worth
// at least half the current reference value: a compatible subset of them is
// mapped to the current position, or an oversized single-item claim is
// relocated onto a matching earlier position (evicting its occupants and
// pinning it). Returns the relocations performed.
std::vector<SwapEvent> update_mapping(const Instance& inst, const std::vector<ItemSet>& bundles_by_agent,
                                      AgentClaimState& st);

struct StepCheck {
    int agent;
    SatisfactionReport satisfaction;
    Rat pool_value;   // remaining value for this agent
    bool feasible_ok; // pool value >= v[level]/2
    bool level_ok;    // level < n
};

struct TraceStep {
    int step;
    std::vector<std::pair<int, ItemSet>> candidates; // remaining agent -> claim candidate
    int chosen_agent;
    ItemSet allocated;
    std::vector<SwapEvent> swaps;
    // post-update snapshots of every remaining agent
    struct Snapshot {
        int agent;
        int level;
        Rat expectation_value; // v[level]/2
        std::map<int, int> mapping;
    };
    std::vector<Snapshot> snapshots;
    std::vector<StepCheck> checks;
};

struct AgentSourceInfo {
    int agent;
    Partition source{0, 0, {}};
    std::vector<Rat> v;
    Rat objective;
};

struct Trace {
    PartitionSource source_kind;
    std::vector<AgentSourceInfo> sources;
    std::vector<TraceStep> steps;
    ItemSet leftovers;
    int leftover_recipient = -1;
    bool invariants_checked = false;
};

struct BcOptions {
    PartitionSearchOptions search{};
    bool check_invariants = true; // record checks; a failed check raises InvariantBroken
};

struct BcResult {
    Allocation allocation;
    Trace trace;
};

// Bundle-claiming allocation for network-form instances: every agent holds an
// expectation drawn from its reference partition, the agent with the smallest
// satisfying claim wins each round, and the waiting agents account satisfied
// rivals against their own reference bundles. Guarantees, per agent i with
// self weight w: utility >= (w/2) * source objective (so (w/2) * EMMS with
// exact sources, (w/4) * EMMS with LPT sources).
BcResult run_bc(const Instance& inst, PartitionSource source, const BcOptions& opts = {});

// Two agents: agent 0 proposes its best-worst-case partition, agent 1 picks
// the assignment it prefers. Both end up at or above their EMMS.
Allocation cut_and_choose(const Instance& inst, const PartitionSearchOptions& opts = {});

} // namespace extfair
