#include "extfair/bundle_claiming.hpp"

#include "extfair/error.hpp"

#include <algorithm>
#include <numeric>

namespace extfair {

bool SatisfactionReport::ok() const {
    for (const LevelCheck& lc : levels)
        if (!lc.lower_ok || !lc.upper_ok) return false;
    return floating_ok && external_ok;
}

std::optional<ItemSet> min_expectation_bundle(std::span<const int> items, std::span<const Rat> values_by_item,
                                              const Rat& threshold) {
    if (threshold <= 0) return ItemSet{};
    std::vector<int> order(items.begin(), items.end());
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        int c = cmp(values_by_item[a], values_by_item[b]);
        if (c != 0) return c > 0;
        return a < b;
    });
    ItemSet picked;
    Rat sum = 0;
    for (int it : order) {
        picked.push_back(it);
        sum += values_by_item[it];
        if (sum >= threshold) {
            std::sort(picked.begin(), picked.end());
            return picked;
        }
    }
    return std::nullopt;
}

std::optional<std::vector<int>> compatible_subset(std::span<const std::pair<int, Rat>> members, const Rat& target) {
    const int sz = static_cast<int>(members.size());
    Rat half = target / 2;
    if (target == 0) return std::vector<int>{};

    std::vector<int> comb;
    for (int k = 1; k <= sz; ++k) {
        comb.resize(k);
        std::iota(comb.begin(), comb.end(), 0);
        for (;;) {
            Rat sum = 0;
            for (int pos : comb) sum += members[pos].second;
            if (sum >= half && sum <= target) {
                std::vector<int> ids;
                ids.reserve(k);
                for (int pos : comb) ids.push_back(members[pos].first);
                return ids;
            }
            // next lexicographic combination of {0..sz-1} of size k
            int i = k - 1;
            while (i >= 0 && comb[i] == sz - k + i) --i;
            if (i < 0) break;
            ++comb[i];
            for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
    return std::nullopt;
}

namespace {

Rat own_bundle_value(const Instance& inst, int agent, const ItemSet& bundle) {
    Rat s = 0;
    for (int it : bundle) s += inst.value(agent, it);
    return s;
}

std::vector<std::pair<int, Rat>> floating_members(const Instance& inst, const std::vector<ItemSet>& bundles_by_agent,
                                                  const AgentClaimState& st) {
    std::vector<std::pair<int, Rat>> members;
    for (const auto& [sat, pos] : st.mapping)
        if (pos == kFloating) members.emplace_back(sat, own_bundle_value(inst, st.agent, bundles_by_agent[sat]));
    return members;
}

} // namespace

std::vector<SwapEvent> update_mapping(const Instance& inst, const std::vector<ItemSet>& bundles_by_agent,
                                      AgentClaimState& a) {
    const int n = inst.agents();
    std::vector<SwapEvent> swaps;
    auto floating_value = [&] {
        Rat s = 0;
        for (const auto& [sat, pos] : a.mapping)
            if (pos == kFloating) s += own_bundle_value(inst, a.agent, bundles_by_agent[sat]);
        return s;
    };

    int iterations = 0;
    while (a.v[a.level] > 0 && 2 * floating_value() >= a.v[a.level]) {
        if (++iterations > 4 * n + 8) fail(Errc::InvariantBroken, "mapping update failed to terminate");

        std::vector<std::pair<int, Rat>> members = floating_members(inst, bundles_by_agent, a);
        if (auto delta = compatible_subset(members, a.v[a.level])) {
            for (int sat : *delta) a.mapping[sat] = a.level;
            ++a.level;
            if (a.level >= n) fail(Errc::InvariantBroken, "expectation position exceeded bundle count");
            continue;
        }

        // No compatible subset: some floating claim alone exceeds the
        // reference value. It must be a single item matching a richer
        // reference bundle; relocate it there.
        int mover = -1;
        for (const auto& [sat, val] : members)
            if (val > a.v[a.level]) {
                mover = sat;
                break;
            }
        if (mover < 0) fail(Errc::InvariantBroken, "floating value oversized but no oversized member");
        if (bundles_by_agent[mover].size() != 1)
            fail(Errc::InvariantBroken, "oversized claim is not a single item");

        Rat mover_value = own_bundle_value(inst, a.agent, bundles_by_agent[mover]);
        int target = -1;
        for (int pos = 0; pos < a.level && target < 0; ++pos)
            if (!a.pinned[pos] && a.source.bundle(a.sorted_order[pos]) == bundles_by_agent[mover]) target = pos;
        for (int pos = 0; pos < a.level && target < 0; ++pos)
            if (!a.pinned[pos] && a.v[pos] == mover_value) target = pos;
        if (target < 0) fail(Errc::InvariantBroken, "no reference position matches the relocated claim");

        SwapEvent ev;
        ev.agent = a.agent;
        ev.moved_satisfied = mover;
        ev.to_level = target;
        for (auto& [sat, pos] : a.mapping)
            if (pos == target && sat != mover) {
                pos = kFloating;
                ev.evicted.push_back(sat);
            }
        a.mapping[mover] = target;
        a.pinned[target] = 1;
        swaps.push_back(std::move(ev));
    }
    return swaps;
}

SatisfactionReport check_external_satisfaction(const Instance& inst, const std::vector<ItemSet>& bundles_by_agent,
                                               const AgentClaimState& st) {
    const int n = inst.agents();
    SatisfactionReport rep;
    rep.zero_expectation = st.level >= n || st.v[st.level] == 0;

    std::vector<Rat> mapped(n, Rat(0));
    for (const auto& [sat, pos] : st.mapping) {
        Rat val = own_bundle_value(inst, st.agent, bundles_by_agent[sat]);
        if (pos == kFloating)
            rep.floating_value += val;
        else
            mapped[pos] += val;
    }
    for (int k = 0; k < st.level; ++k) {
        LevelCheck lc;
        lc.level = k;
        lc.mapped_value = mapped[k];
        lc.lower_ok = 2 * mapped[k] >= st.v[k];
        lc.upper_ok = mapped[k] <= st.v[k];
        rep.levels.push_back(std::move(lc));
    }
    rep.floating_ok = rep.zero_expectation || 2 * rep.floating_value < st.v[st.level];

    InfluenceVector x = inst.influence_vector(st.agent);
    for (const auto& [sat, pos] : st.mapping) {
        (void)pos;
        rep.external_value += inst.weight(sat, st.agent) * own_bundle_value(inst, st.agent, bundles_by_agent[sat]);
    }
    for (int k = 0; k < st.level; ++k) rep.external_floor += x.entries[k] * st.v[k] / 2;
    rep.external_ok = rep.external_value >= rep.external_floor;
    return rep;
}

namespace {

struct Runner {
    const Instance& inst;
    const BcOptions& opts;
    int n;

    std::vector<ItemSet> claimed;   // per agent id
    std::vector<char> satisfied;    // per agent id
    std::vector<int> order;         // satisfaction order
    ItemSet pool;
    std::vector<AgentClaimState> st; // per agent id; valid while unsatisfied
    Trace trace;

    Runner(const Instance& instance, PartitionSource source, const BcOptions& options)
        : inst(instance), opts(options), n(instance.agents()), claimed(n), satisfied(n, 0), st(n) {
        trace.source_kind = source;
        pool.resize(inst.items());
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < n; ++i) init_agent(i, source);
        trace.invariants_checked = opts.check_invariants;
    }

    void init_agent(int i, PartitionSource source) {
        const auto& vals = inst.values_of(i);
        Partition p{0, 0, {}};
        if (source == PartitionSource::Exact) {
            ObjectiveVector x = ObjectiveVector::from_entries(inst.influence_vector(i).entries);
            OptimalPartitionResult res = optimal_partition_exact(vals, x, opts.search);
            p = res.partition;
            // joint fixpoint of the two partition repairs; neither lowers the
            // objective, so optimality is preserved
            for (int round = 0;; ++round) {
                NicifyResult nr = nicify(p, vals);
                NicifyResult rb = rebalance_heavy_bundles(nr.partition, vals);
                p = rb.partition;
                if (nr.modifications + rb.modifications == 0) break;
                if (round > 4 * (inst.items() + 1) * (n + 1))
                    fail(Errc::InvariantBroken, "source repair failed to converge");
            }
            Rat after = sorted_objective(sorted_view(p, vals).sorted_values, x);
            if (after != res.value) fail(Errc::InvariantBroken, "source repair changed the optimal objective");
        } else {
            p = nicify(lpt_partition(vals, n), vals).partition;
        }
        if (!is_nice(p, vals) || !is_balanced(p, vals))
            fail(Errc::InvariantBroken, "source partition lacks the required shape");

        AgentClaimState& a = st[i];
        a.agent = i;
        SortedView view = sorted_view(p, vals);
        a.source = std::move(p);
        a.sorted_order = view.order;
        a.v = view.sorted_values;
        a.source_objective =
            sorted_objective(a.v, ObjectiveVector::from_entries(inst.influence_vector(i).entries));
        a.level = 0;
        a.pinned.assign(n, 0);

        trace.sources.push_back(AgentSourceInfo{i, a.source, a.v, a.source_objective});
    }

    Rat pool_value(int agent) const {
        Rat s = 0;
        for (int it : pool) s += inst.value(agent, it);
        return s;
    }

    StepCheck make_check(const AgentClaimState& a) const {
        StepCheck c;
        c.agent = a.agent;
        c.satisfaction = check_external_satisfaction(inst, claimed, a);
        c.pool_value = pool_value(a.agent);
        c.feasible_ok = 2 * c.pool_value >= a.v[a.level];
        c.level_ok = a.level < n;
        return c;
    }

    BcResult run() {
        int step_no = 0;
        std::vector<int> remaining(n);
        std::iota(remaining.begin(), remaining.end(), 0);

        while (!remaining.empty()) {
            TraceStep step;
            step.step = step_no++;

            int chosen = -1;
            size_t chosen_size = 0;
            for (int j : remaining) {
                const AgentClaimState& a = st[j];
                Rat threshold = a.v[a.level] / 2;
                auto claim = min_expectation_bundle(pool, inst.values_of(j), threshold);
                if (!claim) fail(Errc::InvariantBroken, "remaining items cannot satisfy an expectation");
                if (chosen < 0 || claim->size() < chosen_size) {
                    chosen = j;
                    chosen_size = claim->size();
                }
                step.candidates.emplace_back(j, std::move(*claim));
            }

            step.chosen_agent = chosen;
            for (auto& [j, claim] : step.candidates)
                if (j == chosen) step.allocated = claim;

            claimed[chosen] = step.allocated;
            satisfied[chosen] = 1;
            order.push_back(chosen);
            ItemSet new_pool;
            std::set_difference(pool.begin(), pool.end(), step.allocated.begin(), step.allocated.end(),
                                std::back_inserter(new_pool));
            pool = std::move(new_pool);
            remaining.erase(std::find(remaining.begin(), remaining.end(), chosen));

            for (int j : remaining) {
                st[j].mapping[chosen] = kFloating;
                std::vector<SwapEvent> swaps = update_mapping(inst, claimed, st[j]);
                step.swaps.insert(step.swaps.end(), swaps.begin(), swaps.end());
            }

            for (int j : remaining) {
                const AgentClaimState& a = st[j];
                step.snapshots.push_back(TraceStep::Snapshot{j, a.level, a.v[a.level] / 2, a.mapping});
            }

            if (opts.check_invariants) {
                for (int j : remaining) {
                    StepCheck c = make_check(st[j]);
                    bool ok = c.satisfaction.ok() && c.feasible_ok && c.level_ok;
                    step.checks.push_back(std::move(c));
                    if (!ok) fail(Errc::InvariantBroken, "claim-state invariant failed for agent " + std::to_string(j));
                }
            }

            trace.steps.push_back(std::move(step));
        }

        if (!pool.empty()) {
            int last = order.back();
            trace.leftovers = pool;
            trace.leftover_recipient = last;
            ItemSet merged;
            std::set_union(claimed[last].begin(), claimed[last].end(), pool.begin(), pool.end(),
                           std::back_inserter(merged));
            claimed[last] = std::move(merged);
            pool.clear();
        }

        std::vector<ItemSet> bundles;
        std::vector<int> assignment;
        bundles.reserve(n);
        for (int k = 0; k < n; ++k) {
            bundles.push_back(claimed[order[k]]);
            assignment.push_back(order[k]);
        }
        Partition result(n, inst.items(), std::move(bundles));
        Allocation alloc{result, assignment, utilities(inst, result, assignment)};

        if (opts.check_invariants) {
            for (const AgentSourceInfo& src : trace.sources) {
                Rat bound = inst.self_weight(src.agent) * src.objective / 2;
                if (alloc.utilities[src.agent] < bound)
                    fail(Errc::InvariantBroken,
                         "final utility of agent " + std::to_string(src.agent) + " below half-objective bound");
            }
        }
        return BcResult{std::move(alloc), std::move(trace)};
    }
};

} // namespace

BcResult run_bc(const Instance& inst, PartitionSource source, const BcOptions& opts) {
    if (!inst.is_network()) fail(Errc::GeneralFormUnsupported, "bundle claiming needs influence weights");
    Runner runner(inst, source, opts);
    return runner.run();
}

Allocation cut_and_choose(const Instance& inst, const PartitionSearchOptions& opts) {
    if (inst.agents() != 2) fail(Errc::WrongAgentCount, "cut and choose needs exactly two agents");
    OptimalPartitionResult proposal = emms_partition(inst, 0, opts);

    const std::vector<int> straight = {0, 1}, flipped = {1, 0};
    std::vector<Rat> u_straight = utilities(inst, proposal.partition, straight);
    std::vector<Rat> u_flipped = utilities(inst, proposal.partition, flipped);
    // chooser takes the assignment it strictly prefers; ties keep the
    // lexicographically smaller assignment
    if (u_flipped[1] > u_straight[1]) return Allocation{proposal.partition, flipped, std::move(u_flipped)};
    return Allocation{proposal.partition, straight, std::move(u_straight)};
}

} // namespace extfair
