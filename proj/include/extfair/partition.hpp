#pragma once

#include "extfair/instance.hpp"
#include "extfair/rational.hpp"

#include <span>
#include <vector>

namespace extfair {

using ItemSet = std::vector<int>; // item indices, kept sorted ascending

// A partition of the m items into exactly n bundles; empty bundles allowed.
class Partition {
public:
    Partition(int n, int m, std::vector<ItemSet> bundles);

    int bundle_count() const { return static_cast<int>(bundles_.size()); }
    int item_count() const { return m_; }
    const ItemSet& bundle(int k) const { return bundles_[k]; }
    const std::vector<ItemSet>& bundles() const { return bundles_; }

    bool operator==(const Partition& other) const {
        return m_ == other.m_ && bundles_ == other.bundles_;
    }

private:
    int m_;
    std::vector<ItemSet> bundles_;
};

// Bundle value under one agent's own valuation.
Rat bundle_value(std::span<const Rat> item_values, std::span<const int> bundle);
std::vector<Rat> all_bundle_values(const Partition& p, std::span<const Rat> item_values);

// Bundle indices ordered by non-increasing value; equal values keep ascending
// original bundle index. sorted_values are the values in that order.
struct SortedView {
    std::vector<int> order;
    std::vector<Rat> sorted_values;
};
SortedView sorted_view(const Partition& p, std::span<const Rat> item_values);
SortedView sorted_view(const Partition& p, const Instance& inst, int agent);

// True when no item b sits in a bundle P with V(P) > V({b}) > V(min bundle).
bool is_nice(const Partition& p, std::span<const Rat> item_values);
bool is_nice(const Partition& p, const Instance& inst, int agent);

} // namespace extfair
