#pragma once

#include "extfair/allocation.hpp"
#include "extfair/error.hpp"
#include "extfair/instance.hpp"
#include "extfair/partitioning.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <string_view>
#include <vector>

namespace extfair::test {

inline Rat R(long v) { return Rat(v); }
inline Rat R(const char* s) { return parse_rational(s); }

inline std::vector<Rat> rats(std::initializer_list<long> vs) {
    std::vector<Rat> out;
    for (long v : vs) out.emplace_back(v);
    return out;
}

inline std::vector<Rat> rats(std::initializer_list<std::string_view> vs) {
    std::vector<Rat> out;
    for (std::string_view v : vs) out.push_back(parse_rational(v));
    return out;
}

inline Instance make_network(std::vector<std::vector<Rat>> values, std::vector<std::vector<Rat>> w) {
    return Instance::network(std::move(values), NetworkWeights{std::move(w)});
}

// Two agents, shared item values, symmetric off-diagonal weight.
inline Instance pair_instance(std::vector<Rat> values, const Rat& self) {
    Rat cross = 1 - self;
    return make_network({values, values}, {{self, cross}, {cross, self}});
}

// Five agents, eight items. Incoming influence columns of agents 3 and 4
// (0-based) reproduce the published ascending vectors [0,0,0.1,0.4,0.5] and
// [0,0,0.2,0.25,0.55]; the remaining columns complete the matrix.
inline Instance figure_instance() {
    std::vector<std::vector<Rat>> values = {
        rats({10, 5, 3, 2, 8, 1, 4, 6}), rats({2, 2, 2, 2, 2, 2, 2, 2}),  rats({7, 1, 1, 5, 5, 3, 2, 2}),
        rats({9, 9, 1, 1, 1, 1, 1, 1}),  rats({3, 4, 5, 6, 7, 8, 9, 10}),
    };
    // column i holds the weights flowing INTO agent i
    std::vector<std::vector<Rat>> w = {
        rats({"0.8", "0.4", "0", "0", "0"}),
        rats({"0.2", "0.6", "0.1", "0", "0"}),
        rats({"0", "0", "0.9", "0.4", "0.2"}),
        rats({"0", "0", "0", "0.5", "0.25"}),
        rats({"0", "0", "0", "0.1", "0.55"}),
    };
    return make_network(std::move(values), std::move(w));
}

inline std::vector<int> identity_assignment(int n) {
    std::vector<int> a(n);
    std::iota(a.begin(), a.end(), 0);
    return a;
}

// Independent check oracle: walk every bijection with next_permutation.
inline Rat extreme_utility_by_permutations(const Instance& inst, const Partition& p, int agent, bool best) {
    std::vector<int> assign = identity_assignment(inst.agents());
    bool first = true;
    Rat extreme = 0;
    do {
        Rat u = 0;
        for (int k = 0; k < inst.agents(); ++k) u += inst.cross_value(assign[k], agent, p.bundle(k));
        if (first || (best ? u > extreme : u < extreme)) extreme = u;
        first = false;
    } while (std::next_permutation(assign.begin(), assign.end()));
    return extreme;
}

// Independent partition oracle: label items over a base-n counter, evaluate
// the sorted objective directly. No restricted-growth machinery shared with
// the library path.
inline Rat best_sorted_objective_by_labels(const std::vector<Rat>& item_values, const ObjectiveVector& x) {
    const int n = x.size();
    const int m = static_cast<int>(item_values.size());
    std::vector<int> label(m, 0);
    bool first = true;
    Rat best = 0;
    for (;;) {
        std::vector<Rat> sums(n, Rat(0));
        for (int b = 0; b < m; ++b) sums[label[b]] += item_values[b];
        std::sort(sums.begin(), sums.end(), std::greater<Rat>());
        Rat obj = 0;
        for (int j = 0; j < n; ++j) obj += x.entries()[j] * sums[j];
        if (first || obj > best) best = obj;
        first = false;

        int pos = m - 1;
        while (pos >= 0 && label[pos] == n - 1) label[pos--] = 0;
        if (pos < 0) break;
        ++label[pos];
    }
    return best;
}

// Independent EMMS oracle for any model: labels + permutation worst case.
inline Rat emms_by_labels(const Instance& inst, int agent) {
    const int n = inst.agents();
    const int m = inst.items();
    std::vector<int> label(m, 0);
    bool first = true;
    Rat best = 0;
    for (;;) {
        std::vector<ItemSet> bundles(n);
        for (int b = 0; b < m; ++b) bundles[label[b]].push_back(b);
        Partition p(n, m, std::move(bundles));
        Rat w = extreme_utility_by_permutations(inst, p, agent, false);
        if (first || w > best) best = w;
        first = false;

        int pos = m - 1;
        while (pos >= 0 && label[pos] == n - 1) label[pos--] = 0;
        if (pos < 0) break;
        ++label[pos];
    }
    return best;
}

} // namespace extfair::test

#define CHECK_ERRC(expr, errc)                                                                                         \
    do {                                                                                                               \
        bool caught_ = false;                                                                                          \
        try {                                                                                                          \
            (void)(expr);                                                                                              \
        } catch (const ::extfair::Error& e_) {                                                                         \
            caught_ = true;                                                                                            \
            CHECK(e_.code() == (errc));                                                                                \
        }                                                                                                              \
        CHECK_MESSAGE(caught_, #expr " did not raise " #errc);                                                         \
    } while (0)
