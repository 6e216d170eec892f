// Acceptance gate: the structural guarantees the library advertises, checked
// end to end at desk scale. Every comparison below is exact rational
// arithmetic; there are no floating-point tolerances anywhere.

#include "extfair/allocation.hpp"
#include "extfair/bundle_claiming.hpp"
#include "extfair/fairness.hpp"
#include "extfair/generator.hpp"
#include "extfair/instance.hpp"
#include "extfair/partitioning.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

using namespace extfair;

namespace {

bool g_all_ok = true;

void report(int idx, bool ok, const std::string& what, const std::string& detail) {
    if (!ok) g_all_ok = false;
    std::printf("[%2d] %s  %s: %s\n", idx, ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::uint64_t splitmix(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Partition random_partition(std::uint64_t& state, int n, int m) {
    std::vector<ItemSet> bundles(n);
    for (int b = 0; b < m; ++b) bundles[splitmix(state) % n].push_back(b);
    return Partition(n, m, std::move(bundles));
}

struct SweepEntry {
    Instance inst;
    Rat beta;
    std::vector<Rat> emms_values;
    Trace exact_trace;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string approx(const Rat& r) { return rat_to_string(r) + " (~" + std::to_string(rat_to_double(r)) + ")"; }

} // namespace

int main() {
    // ----- shared sweep: 510 seeded instances, three self-weight floors ---
    auto sweep_start = std::chrono::steady_clock::now();
    std::vector<SweepEntry> sweep;
    sweep.reserve(510);
    const Rat betas[] = {Rat(1, 2), Rat(7, 10), Rat(9, 10)};
    for (int bi = 0; bi < 3; ++bi) {
        GenConfig cfg;
        cfg.seed = 1000 + bi;
        cfg.count = 170;
        cfg.n_lo = 2;
        cfg.n_hi = 5;
        cfg.m_lo = 2; // raised to n per instance
        cfg.m_hi = 8;
        cfg.v_lo = 0;
        cfg.v_hi = 20;
        cfg.beta = betas[bi];
        for (int idx = 0; idx < cfg.count; ++idx) {
            SweepEntry e{generate_instance(cfg, idx), betas[bi], {}, {}};
            for (int i = 0; i < e.inst.agents(); ++i) e.emms_values.push_back(emms(e.inst, i).value);
            sweep.push_back(std::move(e));
        }
    }

    // 1: exact reference partitions give everyone half the floor-scaled share
    {
        int agents = 0, violations = 0;
        for (SweepEntry& e : sweep) {
            BcResult res = run_bc(e.inst, PartitionSource::Exact);
            for (int i = 0; i < e.inst.agents(); ++i) {
                ++agents;
                if (2 * res.allocation.utilities[i] < e.beta * e.emms_values[i]) ++violations;
            }
            e.exact_trace = std::move(res.trace);
        }
        double secs = seconds_since(sweep_start);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%zu instances, %d agent bounds, %d violations, %.1fs elapsed (budget 120s)",
                      sweep.size(), agents, violations, secs);
        report(1, sweep.size() >= 500 && violations == 0 && secs <= 120.0,
               "utility >= (beta/2) * share with exact sources", buf);
    }

    // 2: greedy reference partitions still give a quarter
    {
        int agents = 0, violations = 0;
        for (const SweepEntry& e : sweep) {
            BcResult res = run_bc(e.inst, PartitionSource::Lpt);
            for (int i = 0; i < e.inst.agents(); ++i) {
                ++agents;
                if (4 * res.allocation.utilities[i] < e.beta * e.emms_values[i]) ++violations;
            }
        }
        char buf[120];
        std::snprintf(buf, sizeof(buf), "%zu instances, %d agent bounds, %d violations", sweep.size(), agents,
                      violations);
        report(2, violations == 0, "utility >= (beta/4) * share with greedy sources", buf);
    }

    // 3: the greedy partition's worst assignment is within half of optimal
    {
        GenConfig cfg;
        cfg.seed = 2024;
        cfg.count = 350;
        cfg.n_lo = 2;
        cfg.n_hi = 4;
        cfg.m_lo = 2;
        cfg.m_hi = 8;
        cfg.v_lo = 0;
        cfg.v_hi = 20;
        int pairs = 0, violations = 0;
        bool have_ratio = false;
        Rat min_ratio = 0;
        for (int idx = 0; idx < cfg.count; ++idx) {
            Instance inst = generate_instance(cfg, idx);
            for (int i = 0; i < inst.agents(); ++i) {
                ++pairs;
                Partition greedy = lpt_partition(inst.values_of(i), inst.agents());
                Rat w = worst_value_network(inst, greedy, i);
                Rat e = emms(inst, i).value;
                if (2 * w < e) ++violations;
                if (e > 0) {
                    Rat ratio = w / e;
                    if (!have_ratio || ratio < min_ratio) min_ratio = ratio;
                    have_ratio = true;
                }
            }
        }
        std::string detail = std::to_string(pairs) + " pairs, " + std::to_string(violations) +
                             " violations, minimum ratio " + (have_ratio ? approx(min_ratio) : "n/a");
        report(3, pairs >= 1000 && violations == 0 && have_ratio && 2 * min_ratio >= 1,
               "greedy partition worst assignment >= share/2", detail);
    }

    // 4: the constructed instance separates the two share notions by c
    {
        bool ok = true;
        Instance inst = gap_instance(10, Rat(1, 10));
        Rat e = emms(inst, 0).value;
        MmsPair p = mms(inst, 0);
        ok = ok && e == Rat(104, 5) && p.self_scaled.has_value() && *p.self_scaled == Rat(4, 5);
        ok = ok && e > 10 * *p.self_scaled; // ratio 26 > 10

        // closed form (1-2e)+2c; valid while the self weight stays the
        // largest incoming weight, i.e. eps <= 1/3
        const std::pair<const char*, const char*> params[] = {
            {"1", "1/100"}, {"1", "1/10"},  {"1", "1/4"},   {"1", "1/3"},  {"3/2", "1/8"},
            {"2", "1/5"},   {"2", "1/3"},   {"3", "1/6"},   {"5", "1/10"}, {"5", "3/10"},
            {"7", "1/7"},   {"10", "1/10"}, {"10", "1/3"},  {"20", "1/4"}, {"50", "1/5"},
            {"100", "1/10"}, {"13", "2/7"}, {"8", "1/12"},  {"4", "1/20"}, {"6", "1/3"}};
        int tested = 0;
        for (const auto& [cs, es] : params) {
            Rat c = parse_rational(cs), eps = parse_rational(es);
            Instance g = gap_instance(c, eps);
            Rat got = emms(g, 0).value;
            if (got != (1 - 2 * eps) + 2 * c) ok = false;
            if (!(got > c * *mms(g, 0).self_scaled)) ok = false;
            ++tested;
        }
        report(4, ok && tested == 20,
               "share separation instance", "value 104/5, scaled classic share 4/5, ratio 26 > 10; closed form on " +
               std::to_string(tested) + " (c, eps) pairs");
    }

    // 5: matching-based worst allocation agrees with full enumeration
    {
        std::uint64_t state = 0xfeedULL;
        int checked = 0, mismatches = 0;
        for (int idx = 0; idx < 200; ++idx) {
            Instance inst = generate_general_instance(3000, idx, 2, 5, 2, 6, 0, 15);
            Partition p = random_partition(state, inst.agents(), inst.items());
            for (int i = 0; i < inst.agents(); ++i) {
                Allocation via_matching = extreme_allocation(inst, p, i, ExtremeMode::Worst, ExtremeMethod::Matching);
                Allocation via_listing = extreme_allocation(inst, p, i, ExtremeMode::Worst, ExtremeMethod::Enumerate);
                ++checked;
                if (via_matching.utilities[i] != via_listing.utilities[i]) ++mismatches;
            }
        }
        int closed_checked = 0, closed_mismatches = 0;
        GenConfig net;
        net.seed = 3500;
        net.n_lo = 2;
        net.n_hi = 5;
        net.m_lo = 2;
        net.m_hi = 6;
        for (int idx = 0; idx < 100; ++idx) {
            Instance inst = generate_instance(net, idx);
            Partition p = random_partition(state, inst.agents(), inst.items());
            for (int i = 0; i < inst.agents(); ++i) {
                Rat closed = worst_value_network(inst, p, i);
                Allocation via_matching = extreme_allocation(inst, p, i, ExtremeMode::Worst, ExtremeMethod::Matching);
                ++closed_checked;
                if (closed != via_matching.utilities[i]) ++closed_mismatches;
            }
        }
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "%d cross-form worst values, %d mismatches; %d closed-form values, %d mismatches", checked,
                      mismatches, closed_checked, closed_mismatches);
        report(5, checked >= 200 && mismatches == 0 && closed_mismatches == 0,
               "worst assignment: matching == enumeration == closed form", buf);
    }

    // 6: share chain on every sweep instance
    {
        int agents = 0, violations = 0;
        for (const SweepEntry& e : sweep) {
            for (int i = 0; i < e.inst.agents(); ++i) {
                ++agents;
                MmsPair p = mms(e.inst, i);
                const Rat& em = e.emms_values[i];
                bool ok = average_share(e.inst, i) >= em && em >= p.raw && p.self_scaled.has_value() &&
                          p.raw >= *p.self_scaled;
                if (!ok) ++violations;
            }
        }
        char buf[120];
        std::snprintf(buf, sizeof(buf), "%d agents, %d violations", agents, violations);
        report(6, violations == 0, "average share >= extended share >= classic share >= scaled", buf);
    }

    // 7: single-item fixtures where neither share notion implies the other
    {
        GeneralValues none;
        none.v.assign(3, std::vector<std::vector<Rat>>(3, std::vector<Rat>{Rat(0)}));
        none.v[1][1][0] = 6;
        Instance only_self = Instance::general(std::move(none));

        GeneralValues all;
        all.v.assign(3, std::vector<std::vector<Rat>>(3, std::vector<Rat>{Rat(0)}));
        for (int j = 0; j < 3; ++j) all.v[j][1][0] = 6;
        Instance everyone = Instance::general(std::move(all));

        bool dir1 = emms(only_self, 1).value == 0 && extended_proportional_share(only_self, 1) == 2;
        bool dir2 = emms(everyone, 1).value == 6 && extended_proportional_share(everyone, 1) == 2;
        report(7, dir1 && dir2, "share notions don't imply each other",
               std::string("zero-cross fixture: share 0 < proportional 2 ") + (dir1 ? "ok" : "BAD") +
                   "; equal-cross fixture: share 6 > proportional 2 " + (dir2 ? "ok" : "BAD"));
    }

    // 8: two-agent cut and choose reaches the exact share
    {
        GenConfig cfg;
        cfg.seed = 4000;
        cfg.count = 200;
        cfg.n_lo = 2;
        cfg.n_hi = 2;
        cfg.m_lo = 2;
        cfg.m_hi = 8;
        int agents = 0, violations = 0;
        for (int idx = 0; idx < cfg.count; ++idx) {
            Instance inst = generate_instance(cfg, idx);
            Allocation a = cut_and_choose(inst);
            for (int i = 0; i < 2; ++i) {
                ++agents;
                if (a.utilities[i] < emms(inst, i).value) ++violations;
            }
        }
        char buf[120];
        std::snprintf(buf, sizeof(buf), "%d instances, %d agent bounds, %d violations", cfg.count, agents, violations);
        report(8, violations == 0, "cut and choose meets the exact share for both agents", buf);
    }

    // 9: every recorded invariant check in the exact-source traces holds
    {
        long steps = 0, checks = 0, swap_claims = 0;
        int failures = 0;
        for (const SweepEntry& e : sweep) {
            if (!e.exact_trace.invariants_checked) ++failures;
            std::map<int, ItemSet> claimed_by;
            for (const TraceStep& st : e.exact_trace.steps) {
                ++steps;
                claimed_by[st.chosen_agent] = st.allocated;
                for (const StepCheck& c : st.checks) {
                    ++checks;
                    if (!(c.satisfaction.ok() && c.feasible_ok && c.level_ok)) ++failures;
                }
                for (const SwapEvent& sw : st.swaps) {
                    ++swap_claims;
                    auto it = claimed_by.find(sw.moved_satisfied);
                    if (it == claimed_by.end() || it->second.size() != 1) ++failures;
                }
            }
        }
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%ld steps, %ld per-agent checks, %ld relocations (all single items), %d failures",
                      steps, checks, swap_claims, failures);
        report(9, failures == 0, "runtime invariants along every trace", buf);
    }

    // 10: extraction repair is safe and bounded
    {
        std::uint64_t state = 0xabcdULL;
        GenConfig cfg;
        cfg.seed = 5000;
        cfg.count = 100;
        cfg.n_lo = 2;
        cfg.n_hi = 5;
        cfg.m_lo = 2;
        cfg.m_hi = 8;
        cfg.v_lo = 0;
        cfg.v_hi = 20;
        int partitions = 0, violations = 0;
        for (int idx = 0; idx < cfg.count; ++idx) {
            Instance inst = generate_instance(cfg, idx);
            for (int rep = 0; rep < 5; ++rep) {
                ++partitions;
                int agent = static_cast<int>(splitmix(state) % inst.agents());
                Partition p = random_partition(state, inst.agents(), inst.items());
                NicifyResult out = nicify(p, inst.values_of(agent));
                bool ok = is_nice(out.partition, inst.values_of(agent)) &&
                          worst_value_network(inst, out.partition, agent) >= worst_value_network(inst, p, agent) &&
                          out.modifications <= inst.items() * inst.agents();
                if (!ok) ++violations;
            }
        }
        char buf[120];
        std::snprintf(buf, sizeof(buf), "%d partitions, %d violations", partitions, violations);
        report(10, partitions >= 500 && violations == 0,
               "repair yields nice partitions, never hurts, terminates early", buf);
    }

    std::printf("ACCEPTANCE: %s\n", g_all_ok ? "all criteria PASS" : "FAILURES present");
    return g_all_ok ? 0 : 1;
}
