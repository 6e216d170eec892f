#pragma once

#include "extfair/allocation.hpp"
#include "extfair/instance.hpp"
#include "extfair/partitioning.hpp"

#include <optional>
#include <vector>

namespace extfair {

enum class EmmsMode { Exact, LptBound };

struct EmmsValue {
    Rat value;
    bool exact; // false when it is only the LPT lower bound
};

// The extended maximin share of one agent: the best worst-assignment utility
// achievable over all partitions into n bundles. Exact mode enumerates
// partitions (network form uses the sorted-objective closed form, general
// form evaluates the worst assignment per partition); LptBound returns the
// worst-assignment value of the agent's LPT partition, which is within a
// factor 2 of exact.
EmmsValue emms(const Instance& inst, int agent, EmmsMode mode = EmmsMode::Exact,
               const PartitionSearchOptions& opts = {});

// Exact-mode EMMS together with a witnessing partition.
OptimalPartitionResult emms_partition(const Instance& inst, int agent, const PartitionSearchOptions& opts = {});

struct MmsPair {
    Rat raw;                       // classic maximin share over own values
    std::optional<Rat> self_scaled; // raw * self weight; network form only
};

MmsPair mms(const Instance& inst, int agent, const PartitionSearchOptions& opts = {});

// (1/n) * sum over holders j of the value agent i receives when j holds all
// items.
Rat average_share(const Instance& inst, int agent);

// (1/n) * sum over items of the best-holder value for agent i.
Rat extended_proportional_share(const Instance& inst, int agent);

// Three-agent instance where the extended and classic shares diverge: agent 0
// values items (1, c/eps, c/eps), keeps self weight 1-2*eps and leans on the
// other two with weight eps each; agents 1 and 2 mirror the weights and value
// everything at 1. Requires c >= 1 and eps in (0, 1/2).
Instance gap_instance(const Rat& c, const Rat& eps);

struct AgentFairnessRow {
    int agent;
    Rat utility;
    Rat emms;
    bool emms_exact;
    Rat threshold; // alpha * emms
    bool pass;
    Rat mms_raw;
    std::optional<Rat> mms_self_scaled;
    Rat average_share;
    Rat ext_prop_share;
};

struct FairnessReport {
    Rat alpha;
    std::vector<AgentFairnessRow> rows;
    bool all_pass;
};

// Evaluates an allocation against alpha * EMMS per agent and reports every
// share metric alongside.
FairnessReport check_allocation(const Instance& inst, const Partition& p, const std::vector<int>& assignment,
                                const Rat& alpha, EmmsMode mode = EmmsMode::Exact,
                                const PartitionSearchOptions& opts = {});

} // namespace extfair
