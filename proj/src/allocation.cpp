#include "extfair/allocation.hpp"

#include "extfair/error.hpp"

#include <algorithm>
#include <numeric>

namespace extfair {

std::vector<Rat> utilities(const Instance& inst, const Partition& p, const std::vector<int>& assignment) {
    const int n = inst.agents();
    if (p.bundle_count() != n) fail(Errc::DimensionMismatch, "partition bundle count != agent count");
    if (static_cast<int>(assignment.size()) != n) fail(Errc::NotABijection, "assignment has wrong length");
    std::vector<char> hit(n, 0);
    for (int a : assignment) {
        if (a < 0 || a >= n) fail(Errc::NotABijection, "agent index out of range");
        if (hit[a]) fail(Errc::NotABijection, "agent assigned twice");
        hit[a] = 1;
    }

    std::vector<Rat> u(n, Rat(0));
    for (int k = 0; k < n; ++k) {
        const ItemSet& bundle = p.bundle(k);
        for (int i = 0; i < n; ++i) u[i] += inst.cross_value(assignment[k], i, bundle);
    }
    return u;
}

// Jonker-Volgenant style shortest augmenting paths over exact rationals.
std::vector<int> min_cost_assignment(const std::vector<std::vector<Rat>>& cost) {
    const int n = static_cast<int>(cost.size());
    for (const auto& row : cost)
        if (static_cast<int>(row.size()) != n) fail(Errc::DimensionMismatch, "cost matrix not square");

    std::vector<Rat> u(n + 1, Rat(0)), v(n + 1, Rat(0));
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<Rat> minv(n + 1, Rat(0));
        std::vector<char> havemin(n + 1, 0), used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = -1;
            Rat delta;
            bool have_delta = false;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                Rat cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (!havemin[j] || cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                    havemin[j] = 1;
                }
                if (!have_delta || minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                    have_delta = true;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else if (havemin[j]) {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

namespace {

// cost[k][a]: value agent `agent` receives when bundle k is held by agent a.
std::vector<std::vector<Rat>> build_cost(const Instance& inst, const Partition& p, int agent) {
    const int n = inst.agents();
    std::vector<std::vector<Rat>> cost(n, std::vector<Rat>(n));
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a) cost[k][a] = inst.cross_value(a, agent, p.bundle(k));
    return cost;
}

Rat assignment_total(const std::vector<std::vector<Rat>>& cost, const std::vector<int>& asg) {
    Rat t = 0;
    for (size_t k = 0; k < asg.size(); ++k) t += cost[k][asg[k]];
    return t;
}

Rat min_assignment_value(const std::vector<std::vector<Rat>>& cost) {
    if (cost.empty()) return Rat(0);
    return assignment_total(cost, min_cost_assignment(cost));
}

// Lexicographically smallest assignment vector achieving the optimum: fix
// bundles in order, trying agents in ascending index, keeping the choice
// whenever the reduced problem still reaches the target total.
std::vector<int> lex_min_optimal_assignment(const std::vector<std::vector<Rat>>& cost) {
    const int n = static_cast<int>(cost.size());
    Rat target = min_assignment_value(cost);

    std::vector<int> fixed(n, -1);
    std::vector<char> used(n, 0);
    Rat acc = 0;
    std::vector<int> free_cols;
    for (int k = 0; k < n; ++k) {
        bool placed = false;
        for (int a = 0; a < n && !placed; ++a) {
            if (used[a]) continue;
            free_cols.clear();
            for (int c = 0; c < n; ++c)
                if (!used[c] && c != a) free_cols.push_back(c);
            std::vector<std::vector<Rat>> sub;
            sub.reserve(n - k - 1);
            for (int r = k + 1; r < n; ++r) {
                std::vector<Rat> row;
                row.reserve(free_cols.size());
                for (int c : free_cols) row.push_back(cost[r][c]);
                sub.push_back(std::move(row));
            }
            if (acc + cost[k][a] + min_assignment_value(sub) == target) {
                fixed[k] = a;
                used[a] = 1;
                acc += cost[k][a];
                placed = true;
            }
        }
        if (!placed) fail(Errc::InvariantBroken, "lex refinement lost the optimum");
    }
    return fixed;
}

std::vector<int> extreme_by_enumeration(const std::vector<std::vector<Rat>>& cost, ExtremeMode mode) {
    const int n = static_cast<int>(cost.size());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    Rat best_val = assignment_total(cost, perm);
    while (std::next_permutation(perm.begin(), perm.end())) {
        Rat val = assignment_total(cost, perm);
        bool better = mode == ExtremeMode::Worst ? val < best_val : val > best_val;
        if (better) {
            best = perm;
            best_val = val;
        }
    }
    return best;
}

} // namespace

Allocation extreme_allocation(const Instance& inst, const Partition& p, int agent, ExtremeMode mode,
                              ExtremeMethod method, int enumeration_cap) {
    const int n = inst.agents();
    if (p.bundle_count() != n) fail(Errc::DimensionMismatch, "partition bundle count != agent count");
    if (agent < 0 || agent >= n) fail(Errc::InvalidArgument, "agent index out of range");

    std::vector<std::vector<Rat>> cost = build_cost(inst, p, agent);
    std::vector<int> asg;
    if (method == ExtremeMethod::Enumerate) {
        if (n > enumeration_cap)
            fail(Errc::EnumerationCapExceeded,
                 "n=" + std::to_string(n) + " exceeds enumeration cap " + std::to_string(enumeration_cap));
        asg = extreme_by_enumeration(cost, mode);
    } else {
        if (mode == ExtremeMode::Best) {
            std::vector<std::vector<Rat>> neg = cost;
            for (auto& row : neg)
                for (auto& c : row) c = -c;
            asg = lex_min_optimal_assignment(neg);
        } else {
            asg = lex_min_optimal_assignment(cost);
        }
    }
    return Allocation{p, asg, utilities(inst, p, asg)};
}

Rat worst_value_network(const Instance& inst, const Partition& p, int agent) {
    InfluenceVector x = inst.influence_vector(agent); // throws on general form
    SortedView view = sorted_view(p, inst, agent);
    Rat total = 0;
    const int n = inst.agents();
    for (int j = 0; j < n; ++j) total += x.entries[j] * view.sorted_values[j];
    return total;
}

} // namespace extfair
