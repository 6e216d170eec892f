#include "extfair/partition.hpp"

#include "extfair/error.hpp"

#include <algorithm>
#include <numeric>

namespace extfair {

Partition::Partition(int n, int m, std::vector<ItemSet> bundles) : m_(m), bundles_(std::move(bundles)) {
    if (static_cast<int>(bundles_.size()) != n)
        fail(Errc::InvalidArgument, "partition must have exactly n bundles");
    std::vector<char> seen(m, 0);
    for (auto& b : bundles_) {
        std::sort(b.begin(), b.end());
        for (int it : b) {
            if (it < 0 || it >= m) fail(Errc::InvalidArgument, "item index out of range");
            if (seen[it]) fail(Errc::InvalidArgument, "item appears in two bundles");
            seen[it] = 1;
        }
    }
    for (int it = 0; it < m; ++it)
        if (!seen[it]) fail(Errc::InvalidArgument, "item " + std::to_string(it) + " is unassigned");
}

Rat bundle_value(std::span<const Rat> item_values, std::span<const int> bundle) {
    Rat s = 0;
    for (int b : bundle) s += item_values[b];
    return s;
}

std::vector<Rat> all_bundle_values(const Partition& p, std::span<const Rat> item_values) {
    std::vector<Rat> out;
    out.reserve(p.bundle_count());
    for (const auto& b : p.bundles()) out.push_back(bundle_value(item_values, b));
    return out;
}

SortedView sorted_view(const Partition& p, std::span<const Rat> item_values) {
    std::vector<Rat> vals = all_bundle_values(p, item_values);
    SortedView view;
    view.order.resize(p.bundle_count());
    std::iota(view.order.begin(), view.order.end(), 0);
    std::sort(view.order.begin(), view.order.end(), [&](int a, int b) {
        int c = cmp(vals[a], vals[b]);
        if (c != 0) return c > 0;
        return a < b;
    });
    view.sorted_values.reserve(vals.size());
    for (int k : view.order) view.sorted_values.push_back(vals[k]);
    return view;
}

SortedView sorted_view(const Partition& p, const Instance& inst, int agent) {
    return sorted_view(p, inst.values_of(agent));
}

bool is_nice(const Partition& p, std::span<const Rat> item_values) {
    SortedView view = sorted_view(p, item_values);
    const Rat& vmin = view.sorted_values.back();
    for (int k = 0; k < p.bundle_count(); ++k) {
        Rat vb = bundle_value(item_values, p.bundle(k));
        if (vb <= vmin) continue;
        for (int it : p.bundle(k))
            if (vb > item_values[it] && item_values[it] > vmin) return false;
    }
    return true;
}

bool is_nice(const Partition& p, const Instance& inst, int agent) {
    return is_nice(p, inst.values_of(agent));
}

} // namespace extfair
