#include "extfair/partitioning.hpp"

#include "extfair/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace extfair {

ObjectiveVector ObjectiveVector::from_entries(std::vector<Rat> entries) {
    if (entries.empty()) fail(Errc::InvalidArgument, "objective vector must be non-empty");
    Rat sum = 0;
    for (size_t j = 0; j < entries.size(); ++j) {
        if (entries[j] < 0) fail(Errc::InvalidArgument, "objective vector entries must be non-negative");
        if (j > 0 && entries[j] < entries[j - 1])
            fail(Errc::InvalidArgument, "objective vector entries must be non-decreasing");
        sum += entries[j];
    }
    if (sum > 1) fail(Errc::InvalidArgument, "objective vector entries must sum to at most 1");
    ObjectiveVector x;
    x.entries_ = std::move(entries);
    return x;
}

ObjectiveVector objective_vector(ObjectiveKind kind, int n) {
    if (n < 1) fail(Errc::InvalidArgument, "objective vector needs n >= 1");
    std::vector<Rat> e(n, Rat(0));
    switch (kind) {
    case ObjectiveKind::Maximin:
        e[n - 1] = 1;
        break;
    case ObjectiveKind::Minimax: {
        if (n < 2) fail(Errc::InvalidArgument, "minimax objective needs n >= 2");
        Rat share(1, n - 1);
        share.canonicalize();
        for (int j = 1; j < n; ++j) e[j] = share;
        break;
    }
    case ObjectiveKind::Leximin:
        fail(Errc::BadEpsilon, "leximin objective requires an epsilon in (0,1)");
    }
    return ObjectiveVector::from_entries(std::move(e));
}

ObjectiveVector objective_vector(ObjectiveKind kind, int n, const Rat& eps) {
    if (kind != ObjectiveKind::Leximin) return objective_vector(kind, n);
    if (n < 1) fail(Errc::InvalidArgument, "objective vector needs n >= 1");
    if (eps <= 0 || eps >= 1) fail(Errc::BadEpsilon, "epsilon must lie strictly between 0 and 1");
    // ascending entry j = eps^(n-1-j) * (1-eps) / (1-eps^n)
    std::vector<Rat> pow(n + 1, Rat(1));
    for (int k = 1; k <= n; ++k) pow[k] = pow[k - 1] * eps;
    Rat denom = 1 - pow[n];
    std::vector<Rat> e(n);
    for (int j = 0; j < n; ++j) e[j] = pow[n - 1 - j] * (1 - eps) / denom;
    return ObjectiveVector::from_entries(std::move(e));
}

Rat sorted_objective(std::span<const Rat> sorted_desc_values, const ObjectiveVector& x) {
    if (static_cast<int>(sorted_desc_values.size()) != x.size())
        fail(Errc::DimensionMismatch, "objective vector length must match bundle count");
    Rat total = 0;
    for (int j = 0; j < x.size(); ++j)
        if (sgn(x.entries()[j]) != 0) total += x.entries()[j] * sorted_desc_values[j];
    return total;
}

Partition lpt_partition(std::span<const Rat> item_values, int n) {
    if (n < 1) fail(Errc::InvalidArgument, "need at least one bundle");
    const int m = static_cast<int>(item_values.size());
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return item_values[a] > item_values[b]; });

    std::vector<ItemSet> bundles(n);
    std::vector<Rat> sums(n, Rat(0));
    for (int it : order) {
        int target = 0;
        for (int k = 1; k < n; ++k)
            if (sums[k] < sums[target]) target = k;
        bundles[target].push_back(it);
        sums[target] += item_values[it];
    }
    return Partition(n, m, std::move(bundles));
}

std::vector<int> huge_items(std::span<const Rat> item_values, int n) {
    if (n < 1) fail(Errc::InvalidArgument, "need at least one bundle");
    Rat total = 0;
    for (const Rat& v : item_values) total += v;
    Rat threshold = total / n;
    std::vector<int> out;
    for (int b = 0; b < static_cast<int>(item_values.size()); ++b)
        if (item_values[b] >= threshold) out.push_back(b);
    return out;
}

NicifyResult nicify(const Partition& p, std::span<const Rat> item_values) {
    const int n = p.bundle_count();
    const int m = p.item_count();
    std::vector<ItemSet> bundles = p.bundles();
    int steps = 0;
    const int guard = 4 * (m + 1) * (n + 1) + 64;

    for (;;) {
        Partition cur(n, m, bundles);
        SortedView view = sorted_view(cur, item_values);
        const Rat& vmin = view.sorted_values.back();
        int min_idx = view.order.back();

        int found_bundle = -1, found_item = -1;
        for (int pos = 0; pos < n && found_bundle < 0; ++pos) {
            const Rat& vb = view.sorted_values[pos];
            if (vb <= vmin) break;
            int k = view.order[pos];
            for (int it : cur.bundle(k)) {
                if (vb > item_values[it] && item_values[it] > vmin) {
                    found_bundle = k;
                    found_item = it;
                    break;
                }
            }
        }
        if (found_bundle < 0) return NicifyResult{std::move(cur), steps};

        ItemSet merged = bundles[min_idx];
        for (int it : bundles[found_bundle])
            if (it != found_item) merged.push_back(it);
        std::sort(merged.begin(), merged.end());
        bundles[found_bundle] = {found_item};
        bundles[min_idx] = std::move(merged);
        ++steps;
        if (steps > guard) fail(Errc::InvariantBroken, "nicify failed to terminate");
    }
}

bool is_balanced(const Partition& p, std::span<const Rat> item_values) {
    SortedView view = sorted_view(p, item_values);
    const Rat& vmin = view.sorted_values.back();
    for (int pos = 0; pos < p.bundle_count(); ++pos) {
        if (p.bundle(view.order[pos]).size() < 2) continue;
        if (view.sorted_values[pos] > 2 * vmin) return false;
    }
    return true;
}

NicifyResult rebalance_heavy_bundles(const Partition& p, std::span<const Rat> item_values) {
    const int n = p.bundle_count();
    const int m = p.item_count();
    std::vector<ItemSet> bundles = p.bundles();
    int steps = 0;
    const int guard = 4 * (m + 1) * (n + 1) + 64;

    for (;;) {
        Partition cur(n, m, bundles);
        SortedView view = sorted_view(cur, item_values);
        const Rat& vmin = view.sorted_values.back();
        int min_idx = view.order.back();

        int heavy = -1;
        for (int pos = 0; pos < n; ++pos) {
            int k = view.order[pos];
            if (cur.bundle(k).size() < 2) continue;
            if (view.sorted_values[pos] > 2 * vmin) {
                heavy = k;
                break;
            }
        }
        if (heavy < 0) return NicifyResult{std::move(cur), steps};

        int cheapest = bundles[heavy][0];
        for (int it : bundles[heavy])
            if (item_values[it] < item_values[cheapest]) cheapest = it;
        bundles[heavy].erase(std::find(bundles[heavy].begin(), bundles[heavy].end(), cheapest));
        bundles[min_idx].push_back(cheapest);
        std::sort(bundles[min_idx].begin(), bundles[min_idx].end());
        ++steps;
        if (steps > guard) fail(Errc::InvariantBroken, "rebalance failed to terminate");
    }
}

unsigned long long default_partition_cap() {
    static unsigned long long cap = [] {
        if (const char* env = std::getenv("EXTFAIR_CAP")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end && *end == '\0' && v > 0) return v;
        }
        return 20'000'000ULL;
    }();
    return cap;
}

namespace {

void check_cap(int n, int m, unsigned long long cap) {
    mpz_class space;
    mpz_ui_pow_ui(space.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(m));
    if (space > mpz_class(static_cast<unsigned long>(cap)))
        fail(Errc::SearchCapExceeded,
             "search space " + std::to_string(n) + "^" + std::to_string(m) + " exceeds cap " + std::to_string(cap));
}

// One enumeration state: restricted-growth strings visited in lexicographic
// order, block sums maintained incrementally.
template <typename T> struct Best {
    bool have = false;
    T obj{};
    std::vector<signed char> rgs;
};

template <typename T> struct Kernel {
    const std::vector<T>& vals;
    const std::vector<T>& x; // ascending
    int n, m;
    std::vector<signed char> rgs;
    std::vector<T> sums;
    std::vector<T> scratch;

    Kernel(const std::vector<T>& v, const std::vector<T>& xasc, int n_)
        : vals(v), x(xasc), n(n_), m(static_cast<int>(v.size())), rgs(v.size(), 0), sums(n_, T(0)),
          scratch(n_, T(0)) {}

    void leaf(Best<T>& best) {
        for (int j = 0; j < n; ++j) scratch[j] = sums[j];
        std::sort(scratch.begin(), scratch.end(), std::greater<T>());
        T obj{};
        for (int j = 0; j < n; ++j) obj += x[j] * scratch[j];
        if (!best.have || obj > best.obj) {
            best.have = true;
            best.obj = std::move(obj);
            best.rgs = rgs;
        }
    }

    void run(int t, int used, Best<T>& best) {
        if (t == m) {
            leaf(best);
            return;
        }
        const int lim = std::min(used + 1, n);
        for (int b = 0; b < lim; ++b) {
            rgs[t] = static_cast<signed char>(b);
            sums[b] += vals[t];
            run(t + 1, std::max(used, b + 1), best);
            sums[b] -= vals[t];
        }
    }

    // Enumerate all depth-K prefixes in lexicographic order.
    struct Prefix {
        std::vector<signed char> rgs;
        std::vector<T> sums;
        int used;
    };

    void collect_prefixes(int t, int used, int depth, std::vector<Prefix>& out) {
        if (t == depth) {
            out.push_back(Prefix{rgs, sums, used});
            return;
        }
        const int lim = std::min(used + 1, n);
        for (int b = 0; b < lim; ++b) {
            rgs[t] = static_cast<signed char>(b);
            sums[b] += vals[t];
            collect_prefixes(t + 1, std::max(used, b + 1), depth, out);
            sums[b] -= vals[t];
        }
    }
};

template <typename T>
Best<T> search_serial(const std::vector<T>& vals, const std::vector<T>& x, int n) {
    Kernel<T> k(vals, x, n);
    Best<T> best;
    k.run(0, 0, best);
    return best;
}

template <typename T>
Best<T> search_openmp(const std::vector<T>& vals, const std::vector<T>& x, int n) {
    Kernel<T> seed(vals, x, n);
    const int depth = std::min<int>(static_cast<int>(vals.size()), 5);
    std::vector<typename Kernel<T>::Prefix> prefixes;
    seed.collect_prefixes(0, 0, depth, prefixes);

    std::vector<Best<T>> bests(prefixes.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (long long pi = 0; pi < static_cast<long long>(prefixes.size()); ++pi) {
        Kernel<T> k(vals, x, n);
        k.rgs = prefixes[pi].rgs;
        k.sums = prefixes[pi].sums;
        k.run(depth, prefixes[pi].used, bests[pi]);
    }

    // Reduce in prefix (= lexicographic) order so the result is independent of
    // the schedule and identical to the serial search.
    Best<T> best;
    for (auto& b : bests) {
        if (!b.have) continue;
        if (!best.have || b.obj > best.obj) best = std::move(b);
    }
    return best;
}

Partition partition_from_rgs(const std::vector<signed char>& rgs, int n, int m) {
    std::vector<ItemSet> bundles(n);
    for (int t = 0; t < m; ++t) bundles[rgs[t]].push_back(t);
    return Partition(n, m, std::move(bundles));
}

struct ScaledProblem {
    bool ok = false;
    std::vector<long long> vals;
    std::vector<long long> x;
    mpz_class denom;
};

// Bring item values and objective entries to common integer grids so leaves
// run in int64. Rejected unless the largest possible dot product provably
// fits with headroom.
ScaledProblem try_scale(std::span<const Rat> values, const ObjectiveVector& x) {
    ScaledProblem sp;
    mpz_class dv = 1, dx = 1;
    for (const Rat& v : values) mpz_lcm(dv.get_mpz_t(), dv.get_mpz_t(), v.get_den().get_mpz_t());
    for (const Rat& e : x.entries()) mpz_lcm(dx.get_mpz_t(), dx.get_mpz_t(), e.get_den().get_mpz_t());

    mpz_class total = 0, xsum = 0;
    std::vector<long long> sv, sx;
    for (const Rat& v : values) {
        mpz_class s = v.get_num() * (dv / v.get_den());
        if (!s.fits_slong_p()) return sp;
        sv.push_back(s.get_si());
        total += s;
    }
    for (const Rat& e : x.entries()) {
        mpz_class s = e.get_num() * (dx / e.get_den());
        if (!s.fits_slong_p()) return sp;
        sx.push_back(s.get_si());
        xsum += s;
    }
    mpz_class bound = total * xsum;
    if (bound > mpz_class("4611686018427387904")) return sp; // 2^62
    sp.ok = true;
    sp.vals = std::move(sv);
    sp.x = std::move(sx);
    sp.denom = dv * dx;
    return sp;
}

OptimalPartitionResult run_search(std::span<const Rat> item_values, const ObjectiveVector& x,
                                  const PartitionSearchOptions& opts, bool use_openmp) {
    const int n = x.size();
    const int m = static_cast<int>(item_values.size());
    if (n < 1) fail(Errc::InvalidArgument, "need at least one bundle");
    if (m < 1) fail(Errc::InvalidArgument, "need at least one item");
    for (const Rat& v : item_values)
        if (v < 0) fail(Errc::NegativeValue, "item values must be non-negative");
    check_cap(n, m, opts.cap);

    if (opts.allow_scaled) {
        ScaledProblem sp = try_scale(item_values, x);
        if (sp.ok) {
            Best<long long> best =
                use_openmp ? search_openmp<long long>(sp.vals, sp.x, n) : search_serial<long long>(sp.vals, sp.x, n);
            Rat value(mpz_class(static_cast<long>(best.obj)), sp.denom);
            value.canonicalize();
            return OptimalPartitionResult{partition_from_rgs(best.rgs, n, m), value};
        }
    }

    std::vector<Rat> vals(item_values.begin(), item_values.end());
    Best<Rat> best = use_openmp ? search_openmp<Rat>(vals, x.entries(), n) : search_serial<Rat>(vals, x.entries(), n);
    return OptimalPartitionResult{partition_from_rgs(best.rgs, n, m), best.obj};
}

} // namespace

OptimalPartitionResult optimal_partition_serial(std::span<const Rat> item_values, const ObjectiveVector& x,
                                                const PartitionSearchOptions& opts) {
    return run_search(item_values, x, opts, false);
}

OptimalPartitionResult optimal_partition_openmp(std::span<const Rat> item_values, const ObjectiveVector& x,
                                                const PartitionSearchOptions& opts) {
    return run_search(item_values, x, opts, true);
}

OptimalPartitionResult optimal_partition_exact(std::span<const Rat> item_values, const ObjectiveVector& x,
                                               const PartitionSearchOptions& opts) {
    bool openmp = opts.parallel != Parallel::Serial;
#ifndef _OPENMP
    if (opts.parallel != Parallel::OpenMP) openmp = false;
#endif
    return run_search(item_values, x, opts, openmp);
}

LeximinPartitionResult optimal_partition_leximin(std::span<const Rat> item_values, int n,
                                                 const PartitionSearchOptions& opts) {
    const int m = static_cast<int>(item_values.size());
    if (n < 1) fail(Errc::InvalidArgument, "need at least one bundle");
    if (m < 1) fail(Errc::InvalidArgument, "need at least one item");
    check_cap(n, m, opts.cap);

    std::vector<Rat> vals(item_values.begin(), item_values.end());
    std::vector<signed char> rgs(m, 0);
    std::vector<Rat> sums(n, Rat(0));
    std::vector<Rat> scratch(n);
    std::vector<Rat> best_vec;
    std::vector<signed char> best_rgs;

    std::function<void(int, int)> rec = [&](int t, int used) {
        if (t == m) {
            for (int j = 0; j < n; ++j) scratch[j] = sums[j];
            std::sort(scratch.begin(), scratch.end());
            if (best_vec.empty() ||
                std::lexicographical_compare(best_vec.begin(), best_vec.end(), scratch.begin(), scratch.end())) {
                best_vec = scratch;
                best_rgs = rgs;
            }
            return;
        }
        const int lim = std::min(used + 1, n);
        for (int b = 0; b < lim; ++b) {
            rgs[t] = static_cast<signed char>(b);
            sums[b] += vals[t];
            rec(t + 1, std::max(used, b + 1));
            sums[b] -= vals[t];
        }
    };
    rec(0, 0);
    return LeximinPartitionResult{partition_from_rgs(best_rgs, n, m), std::move(best_vec)};
}

} // namespace extfair
