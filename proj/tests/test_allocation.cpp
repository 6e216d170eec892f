#include "support.hpp"

#include "extfair/fairness.hpp"
#include "extfair/generator.hpp"

using namespace extfair;
using namespace extfair::test;

namespace {

Instance two_bundle_general() {
    // agent 0 values items (3, 1); nothing flows across
    GeneralValues g;
    g.v = {{rats({3, 1}), rats({0, 0})}, {rats({0, 0}), rats({1, 1})}};
    return Instance::general(std::move(g));
}

} // namespace

TEST_SUITE("utilities") {
    TEST_CASE("influence-weighted sum over held bundles") {
        Instance inst = make_network({rats({10, 5}), rats({1, 1})},
                                     {rats({"0.8", "0"}), rats({"0.2", "1"})});
        Partition p(2, 2, {{0}, {1}});
        std::vector<Rat> u = utilities(inst, p, identity_assignment(2));
        CHECK(u[0] == 9); // 0.8 * 10 + 0.2 * 5
    }

    TEST_CASE("single agent keeps the scaled total") {
        Instance inst = make_network({rats({3, 4})}, {rats({"1"})});
        Partition p(1, 2, {{0, 1}});
        CHECK(utilities(inst, p, {0})[0] == 7);
    }

    TEST_CASE("without externalities utility is the own bundle value") {
        Instance inst = make_network({rats({4, 3, 2}), rats({1, 5, 1})},
                                     {rats({"1", "0"}), rats({"0", "1"})});
        Partition p(2, 3, {{0, 2}, {1}});
        std::vector<Rat> u = utilities(inst, p, {1, 0});
        CHECK(u[0] == 3); // agent 0 holds {1}
        CHECK(u[1] == 2); // agent 1 holds {0, 2}
    }

    TEST_CASE("non-bijections are rejected") {
        Instance inst = figure_instance();
        Partition p(5, 8, {{0, 1, 2, 3}, {4}, {5}, {6}, {7}});
        CHECK_ERRC(utilities(inst, p, {0, 0, 2, 3, 4}), Errc::NotABijection);
        CHECK_ERRC(utilities(inst, p, {0, 1, 2, 3}), Errc::NotABijection);
        CHECK_ERRC(utilities(inst, p, {0, 1, 2, 3, 5}), Errc::NotABijection);
    }
}

TEST_SUITE("extreme allocations") {
    TEST_CASE("single agent has a unique allocation") {
        Instance inst = make_network({rats({2, 2})}, {rats({"1"})});
        Partition p(1, 2, {{0, 1}});
        Allocation a = extreme_allocation(inst, p, 0, ExtremeMode::Worst);
        CHECK(a.assignment == std::vector<int>{0});
        CHECK(a.utilities[0] == 4);
    }

    TEST_CASE("worst assignment hands agent 0 the cheap bundle") {
        Instance inst = two_bundle_general();
        Partition p(2, 2, {{0}, {1}});
        Allocation worst = extreme_allocation(inst, p, 0, ExtremeMode::Worst);
        CHECK(worst.utilities[0] == 1);
        CHECK(worst.assignment[1] == 0); // bundle {1} goes to agent 0
        Allocation best = extreme_allocation(inst, p, 0, ExtremeMode::Best);
        CHECK(best.utilities[0] == 3);
    }

    TEST_CASE("gap fixture: singleton partition worst value") {
        Instance inst = gap_instance(10, Rat(1, 10));
        Partition p(3, 3, {{0}, {1}, {2}});
        Allocation worst = extreme_allocation(inst, p, 0, ExtremeMode::Worst);
        CHECK(worst.utilities[0] == Rat(104, 5)); // 20.8
        CHECK(worst_value_network(inst, p, 0) == Rat(104, 5));
    }

    TEST_CASE("closed form examples") {
        Instance inst = pair_instance(rats({5, 5}), R("0.8"));
        Partition p(2, 2, {{0}, {1}});
        CHECK(worst_value_network(inst, p, 0) == 5);

        Instance tri = make_network(
            {rats({100, 100, 1}), rats({1, 1, 1}), rats({1, 1, 1})},
            {rats({"0.8", "0.1", "0.1"}), rats({"0.1", "0.8", "0.1"}), rats({"0.1", "0.1", "0.8"})});
        Partition q(3, 3, {{0}, {1}, {2}});
        CHECK(worst_value_network(tri, q, 0) == Rat(104, 5)); // x=[0.1,0.1,0.8] against (100,100,1)
    }

    TEST_CASE("equal bundle values collapse the closed form to that value") {
        Instance inst = make_network(
            {rats({3, 3, 3, 3}), rats({1, 2, 3, 4}), rats({4, 3, 2, 1}), rats({2, 2, 2, 2})},
            {rats({"0.7", "0", "0.3", "0"}), rats({"0.1", "0.6", "0.1", "0.2"}),
             rats({"0.1", "0.2", "0.5", "0.2"}), rats({"0.1", "0.2", "0.1", "0.6"})});
        Partition p(4, 4, {{0}, {1}, {2}, {3}});
        CHECK(worst_value_network(inst, p, 0) == 3); // weights sum to 1
    }

    TEST_CASE("closed form equals matching equals enumeration on random partitions") {
        GenConfig cfg;
        cfg.seed = 11;
        cfg.n_lo = 2;
        cfg.n_hi = 4;
        std::mt19937_64 rng(99);
        for (int idx = 0; idx < 12; ++idx) {
            Instance inst = generate_instance(cfg, idx);
            const int n = inst.agents(), m = inst.items();
            std::vector<ItemSet> bundles(n);
            for (int b = 0; b < m; ++b) bundles[bounded_draw(rng, n)].push_back(b);
            Partition p(n, m, std::move(bundles));
            for (int i = 0; i < n; ++i) {
                Rat closed = worst_value_network(inst, p, i);
                Allocation match = extreme_allocation(inst, p, i, ExtremeMode::Worst, ExtremeMethod::Matching);
                Allocation enumd = extreme_allocation(inst, p, i, ExtremeMode::Worst, ExtremeMethod::Enumerate);
                CHECK(closed == match.utilities[i]);
                CHECK(match.utilities[i] == enumd.utilities[i]);
                CHECK(match.assignment == enumd.assignment);
                CHECK(closed == extreme_utility_by_permutations(inst, p, i, false));
            }
        }
    }

    TEST_CASE("every bijection sits between worst and best") {
        GenConfig cfg;
        cfg.seed = 23;
        cfg.n_lo = 3;
        cfg.n_hi = 3;
        Instance inst = generate_instance(cfg, 0);
        std::vector<ItemSet> bundles = {{0, 1}, {2}, {}};
        for (int b = 3; b < inst.items(); ++b) bundles[2].push_back(b);
        Partition q(3, inst.items(), bundles);
        for (int i = 0; i < 3; ++i) {
            Rat lo = extreme_allocation(inst, q, i, ExtremeMode::Worst).utilities[i];
            Rat hi = extreme_allocation(inst, q, i, ExtremeMode::Best).utilities[i];
            std::vector<int> assign = identity_assignment(3);
            do {
                std::vector<Rat> u = utilities(inst, q, assign);
                CHECK(lo <= u[i]);
                CHECK(u[i] <= hi);
            } while (std::next_permutation(assign.begin(), assign.end()));
        }
    }

    TEST_CASE("sorted tail bound holds for every partition position") {
        // with x ascending and v descending, sum_{j>=k} x_j v_j <= v_k
        GenConfig cfg;
        cfg.seed = 31;
        std::mt19937_64 rng(5);
        for (int idx = 0; idx < 10; ++idx) {
            Instance inst = generate_instance(cfg, idx);
            const int n = inst.agents(), m = inst.items();
            std::vector<ItemSet> bundles(n);
            for (int b = 0; b < m; ++b) bundles[bounded_draw(rng, n)].push_back(b);
            Partition p(n, m, std::move(bundles));
            for (int i = 0; i < n; ++i) {
                std::vector<Rat> x = inst.influence_vector(i).entries;
                std::vector<Rat> v = sorted_view(p, inst, i).sorted_values;
                for (int k = 0; k < n; ++k) {
                    Rat tail = 0;
                    for (int j = k; j < n; ++j) tail += x[j] * v[j];
                    CHECK(tail <= v[k]);
                }
            }
        }
    }

    TEST_CASE("average share never exceeds the best-assignment utility") {
        GenConfig cfg;
        cfg.seed = 37;
        std::mt19937_64 rng(6);
        for (int idx = 0; idx < 10; ++idx) {
            Instance inst = generate_instance(cfg, idx);
            const int n = inst.agents(), m = inst.items();
            std::vector<ItemSet> bundles(n);
            for (int b = 0; b < m; ++b) bundles[bounded_draw(rng, n)].push_back(b);
            Partition p(n, m, std::move(bundles));
            for (int i = 0; i < n; ++i)
                CHECK(average_share(inst, i) <= extreme_allocation(inst, p, i, ExtremeMode::Best).utilities[i]);
        }
    }
}

TEST_SUITE("assignment solver") {
    TEST_CASE("matches permutation brute force on small matrices") {
        std::vector<std::vector<Rat>> cost = {rats({4, 1, 3}), rats({2, 0, 5}), rats({3, 2, 2})};
        std::vector<int> got = min_cost_assignment(cost);
        // brute force
        std::vector<int> perm = {0, 1, 2};
        Rat best = 0;
        bool first = true;
        do {
            Rat c = 0;
            for (int r = 0; r < 3; ++r) c += cost[r][perm[r]];
            if (first || c < best) best = c;
            first = false;
        } while (std::next_permutation(perm.begin(), perm.end()));
        Rat chosen = 0;
        for (int r = 0; r < 3; ++r) chosen += cost[r][got[r]];
        CHECK(chosen == best);
    }

    TEST_CASE("random rational matrices agree with brute force") {
        std::mt19937_64 rng(404);
        for (int t = 0; t < 40; ++t) {
            int n = 2 + static_cast<int>(bounded_draw(rng, 4));
            std::vector<std::vector<Rat>> cost(n, std::vector<Rat>(n));
            for (auto& row : cost)
                for (Rat& c : row) c = rat_frac(static_cast<long>(bounded_draw(rng, 12)), 1 + static_cast<long>(bounded_draw(rng, 3)));
            std::vector<int> got = min_cost_assignment(cost);
            Rat chosen = 0;
            std::vector<char> seen(n, 0);
            for (int r = 0; r < n; ++r) {
                chosen += cost[r][got[r]];
                seen[got[r]] = 1;
            }
            for (char s : seen) CHECK(s == 1);

            std::vector<int> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            Rat best = 0;
            bool first = true;
            do {
                Rat c = 0;
                for (int r = 0; r < n; ++r) c += cost[r][perm[r]];
                if (first || c < best) best = c;
                first = false;
            } while (std::next_permutation(perm.begin(), perm.end()));
            CHECK(chosen == best);
        }
    }

    TEST_CASE("extreme ties resolve to the lexicographically smallest assignment") {
        // uniform weights and values: every bijection is equally bad
        Instance inst = make_network(
            {rats({1, 1, 1}), rats({1, 1, 1}), rats({1, 1, 1})},
            {rats({"1/3", "1/3", "1/3"}), rats({"1/3", "1/3", "1/3"}), rats({"1/3", "1/3", "1/3"})});
        Partition p(3, 3, {{0}, {1}, {2}});
        for (int i = 0; i < 3; ++i) {
            CHECK(extreme_allocation(inst, p, i, ExtremeMode::Worst, ExtremeMethod::Matching).assignment ==
                  std::vector<int>{0, 1, 2});
            CHECK(extreme_allocation(inst, p, i, ExtremeMode::Best, ExtremeMethod::Enumerate).assignment ==
                  std::vector<int>{0, 1, 2});
        }
    }
}
