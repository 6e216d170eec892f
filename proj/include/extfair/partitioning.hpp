#pragma once

#include "extfair/partition.hpp"
#include "extfair/rational.hpp"

#include <optional>
#include <span>
#include <vector>

namespace extfair {

// Non-negative entries, sorted non-decreasing, summing to at most 1. Used as
// the weight vector of the sorted-bundle objective: with bundle values sorted
// non-increasing, objective = sum_j entries[j] * value[j].
class ObjectiveVector {
public:
    static ObjectiveVector from_entries(std::vector<Rat> entries);

    const std::vector<Rat>& entries() const { return entries_; }
    int size() const { return static_cast<int>(entries_.size()); }

private:
    ObjectiveVector() = default;
    std::vector<Rat> entries_;
};

enum class ObjectiveKind { Maximin, Minimax, Leximin };

// Maximin: [0,...,0,1] (objective = min bundle value). Minimax: [0, 1/(n-1),
// ..., 1/(n-1)] (maximizing it minimizes the max bundle). Leximin: geometric
// eps-weights; requires eps in (0,1), else BadEpsilon.
ObjectiveVector objective_vector(ObjectiveKind kind, int n);
ObjectiveVector objective_vector(ObjectiveKind kind, int n, const Rat& eps);

Rat sorted_objective(std::span<const Rat> sorted_desc_values, const ObjectiveVector& x);

// Largest-value-first greedy: items in non-increasing value order (ties by
// ascending item index), each placed into the currently least valuable bundle
// (ties by ascending bundle index).
Partition lpt_partition(std::span<const Rat> item_values, int n);

// Items worth at least the per-bundle average total/n.
std::vector<int> huge_items(std::span<const Rat> item_values, int n);

struct NicifyResult {
    Partition partition;
    int modifications;
};

// Repeatedly extracts an item b from a bundle P with V(P) > V({b}) > V(min
// bundle) into its own bundle, merging the rest into the old minimum, until no
// such item exists. Never lowers the sorted objective for any objective
// vector.
NicifyResult nicify(const Partition& p, std::span<const Rat> item_values);

// Moves the cheapest item out of any multi-item bundle worth more than twice
// the minimum bundle into the minimum bundle until every such bundle is a
// singleton. Never lowers the sorted objective.
NicifyResult rebalance_heavy_bundles(const Partition& p, std::span<const Rat> item_values);

// Every multi-item bundle is worth at most twice the minimum bundle.
bool is_balanced(const Partition& p, std::span<const Rat> item_values);

enum class Parallel { Auto, Serial, OpenMP };

unsigned long long default_partition_cap(); // EXTFAIR_CAP env var or 2*10^7

struct PartitionSearchOptions {
    unsigned long long cap = default_partition_cap(); // limit on n^m
    Parallel parallel = Parallel::Auto;
    bool allow_scaled = true; // permit the overflow-checked int64 fast path
};

struct OptimalPartitionResult {
    Partition partition;
    Rat value;
};

// Exhaustive exact search over all partitions of the items into at most n
// unlabeled bundles, maximizing the sorted objective. Deterministic: among
// optima, returns the one whose restricted-growth encoding is smallest.
OptimalPartitionResult optimal_partition_exact(std::span<const Rat> item_values, const ObjectiveVector& x,
                                               const PartitionSearchOptions& opts = {});

// Serial reference implementation and OpenMP variant; both produce identical
// results, the wrapper above dispatches between them.
OptimalPartitionResult optimal_partition_serial(std::span<const Rat> item_values, const ObjectiveVector& x,
                                                const PartitionSearchOptions& opts = {});
OptimalPartitionResult optimal_partition_openmp(std::span<const Rat> item_values, const ObjectiveVector& x,
                                                const PartitionSearchOptions& opts = {});

struct LeximinPartitionResult {
    Partition partition;
    std::vector<Rat> sorted_ascending; // bundle values, poorest first
};

// Direct lexicographic maximization of the ascending bundle-value vector;
// avoids the epsilon-vector's risk of misordering nearly-equal vectors.
LeximinPartitionResult optimal_partition_leximin(std::span<const Rat> item_values, int n,
                                                 const PartitionSearchOptions& opts = {});

} // namespace extfair
