#include "extfair/fairness.hpp"

#include "extfair/error.hpp"

#include <algorithm>
#include <functional>

namespace extfair {

namespace {

ObjectiveVector influence_objective(const Instance& inst, int agent) {
    return ObjectiveVector::from_entries(inst.influence_vector(agent).entries);
}

void check_general_cap(int n, int m, unsigned long long cap) {
    mpz_class space;
    mpz_ui_pow_ui(space.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(m));
    if (space > mpz_class(static_cast<unsigned long>(cap)))
        fail(Errc::SearchCapExceeded,
             "search space " + std::to_string(n) + "^" + std::to_string(m) + " exceeds cap " + std::to_string(cap));
}

// General form: enumerate partitions, score each by its worst-assignment
// value (exact matching), keep the maximum. First optimum in enumeration
// order wins, matching the network kernel's tie rule.
OptimalPartitionResult emms_partition_general(const Instance& inst, int agent, const PartitionSearchOptions& opts) {
    const int n = inst.agents();
    const int m = inst.items();
    check_general_cap(n, m, opts.cap);

    // per-block, per-holder received value, maintained incrementally
    std::vector<std::vector<Rat>> block_from_holder(n, std::vector<Rat>(n, Rat(0)));
    std::vector<signed char> rgs(m, 0);
    std::vector<signed char> best_rgs;
    Rat best_val;
    bool have = false;

    std::vector<std::vector<Rat>> cost(n, std::vector<Rat>(n, Rat(0)));
    std::function<void(int, int)> rec = [&](int t, int used) {
        if (t == m) {
            for (int k = 0; k < n; ++k)
                for (int a = 0; a < n; ++a) cost[k][a] = k < used ? block_from_holder[k][a] : Rat(0);
            std::vector<int> asg = min_cost_assignment(cost);
            Rat worst = 0;
            for (int k = 0; k < n; ++k) worst += cost[k][asg[k]];
            if (!have || worst > best_val) {
                have = true;
                best_val = worst;
                best_rgs = rgs;
            }
            return;
        }
        const int lim = std::min(used + 1, n);
        int single[1] = {t};
        for (int b = 0; b < lim; ++b) {
            rgs[t] = static_cast<signed char>(b);
            for (int a = 0; a < n; ++a) block_from_holder[b][a] += inst.cross_value(a, agent, single);
            rec(t + 1, std::max(used, b + 1));
            for (int a = 0; a < n; ++a) block_from_holder[b][a] -= inst.cross_value(a, agent, single);
        }
    };
    rec(0, 0);

    std::vector<ItemSet> bundles(n);
    for (int t = 0; t < m; ++t) bundles[best_rgs[t]].push_back(t);
    return OptimalPartitionResult{Partition(n, m, std::move(bundles)), best_val};
}

} // namespace

OptimalPartitionResult emms_partition(const Instance& inst, int agent, const PartitionSearchOptions& opts) {
    if (agent < 0 || agent >= inst.agents()) fail(Errc::InvalidArgument, "agent index out of range");
    if (inst.is_network())
        return optimal_partition_exact(inst.values_of(agent), influence_objective(inst, agent), opts);
    return emms_partition_general(inst, agent, opts);
}

EmmsValue emms(const Instance& inst, int agent, EmmsMode mode, const PartitionSearchOptions& opts) {
    if (agent < 0 || agent >= inst.agents()) fail(Errc::InvalidArgument, "agent index out of range");
    if (mode == EmmsMode::Exact) return EmmsValue{emms_partition(inst, agent, opts).value, true};
    Partition lpt = lpt_partition(inst.values_of(agent), inst.agents());
    return EmmsValue{worst_value_network(inst, lpt, agent), false};
}

MmsPair mms(const Instance& inst, int agent, const PartitionSearchOptions& opts) {
    if (agent < 0 || agent >= inst.agents()) fail(Errc::InvalidArgument, "agent index out of range");
    ObjectiveVector maximin = objective_vector(ObjectiveKind::Maximin, inst.agents());
    Rat raw = optimal_partition_exact(inst.values_of(agent), maximin, opts).value;
    MmsPair out{raw, std::nullopt};
    if (inst.is_network()) out.self_scaled = inst.self_weight(agent) * raw;
    return out;
}

Rat average_share(const Instance& inst, int agent) {
    std::vector<int> all(inst.items());
    for (int b = 0; b < inst.items(); ++b) all[b] = b;
    Rat total = 0;
    for (int j = 0; j < inst.agents(); ++j) total += inst.cross_value(j, agent, all);
    return total / inst.agents();
}

Rat extended_proportional_share(const Instance& inst, int agent) {
    Rat total = 0;
    for (int b = 0; b < inst.items(); ++b) {
        int single[1] = {b};
        Rat best = inst.cross_value(0, agent, single);
        for (int j = 1; j < inst.agents(); ++j) best = std::max(best, inst.cross_value(j, agent, single));
        total += best;
    }
    return total / inst.agents();
}

Instance gap_instance(const Rat& c, const Rat& eps) {
    if (c < 1) fail(Errc::BadParameters, "c must be at least 1");
    if (eps <= 0 || eps >= Rat(1, 2)) fail(Errc::BadParameters, "eps must lie strictly between 0 and 1/2");

    Rat big = c / eps;
    std::vector<std::vector<Rat>> values = {
        {Rat(1), big, big},
        {Rat(1), Rat(1), Rat(1)},
        {Rat(1), Rat(1), Rat(1)},
    };
    Rat self = 1 - 2 * eps;
    std::vector<std::vector<Rat>> w(3, std::vector<Rat>(3, eps));
    for (int i = 0; i < 3; ++i) w[i][i] = self;
    return Instance::network(std::move(values), NetworkWeights{std::move(w)});
}

FairnessReport check_allocation(const Instance& inst, const Partition& p, const std::vector<int>& assignment,
                                const Rat& alpha, EmmsMode mode, const PartitionSearchOptions& opts) {
    if (alpha < 0) fail(Errc::BadParameters, "alpha must be non-negative");
    std::vector<Rat> u = utilities(inst, p, assignment);

    FairnessReport report;
    report.alpha = alpha;
    report.all_pass = true;
    for (int i = 0; i < inst.agents(); ++i) {
        AgentFairnessRow row;
        row.agent = i;
        row.utility = u[i];
        EmmsValue e = emms(inst, i, mode, opts);
        row.emms = e.value;
        row.emms_exact = e.exact;
        row.threshold = alpha * e.value;
        row.pass = u[i] >= row.threshold;
        MmsPair mp = mms(inst, i, opts);
        row.mms_raw = mp.raw;
        row.mms_self_scaled = mp.self_scaled;
        row.average_share = average_share(inst, i);
        row.ext_prop_share = extended_proportional_share(inst, i);
        report.all_pass = report.all_pass && row.pass;
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace extfair
