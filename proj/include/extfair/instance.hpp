#pragma once

#include "extfair/rational.hpp"

#include <span>
#include <variant>
#include <vector>

namespace extfair {

// weights[j][i] = influence of agent j on agent i. For every observer i the
// incoming column sums to exactly 1.
struct NetworkWeights {
    std::vector<std::vector<Rat>> w;
};

// cross[j][i][b] = value agent i receives from item b when it is held by
// agent j. No normalization is imposed.
struct GeneralValues {
    std::vector<std::vector<std::vector<Rat>>> v;
};

// The incoming influence weights of one agent, sorted non-decreasing.
struct InfluenceVector {
    std::vector<Rat> entries;

    const Rat& largest() const { return entries.back(); }
};

// Immutable problem instance: n agents, m indivisible items, per-agent item
// values, and either a normalized influence matrix or a full cross-valuation
// tensor.
class Instance {
public:
    static Instance network(std::vector<std::vector<Rat>> values, NetworkWeights weights);
    // Own valuations are the diagonal slices cross[i][i].
    static Instance general(GeneralValues cross);

    int agents() const { return n_; }
    int items() const { return m_; }
    bool is_network() const { return std::holds_alternative<NetworkWeights>(ext_); }

    // V_i({b})
    const Rat& value(int agent, int item) const { return values_[agent][item]; }
    const std::vector<Rat>& values_of(int agent) const { return values_[agent]; }

    // V_i(S), additive over items
    Rat own_value(int agent, std::span<const int> bundle) const;
    Rat total_value(int agent) const;

    // Value observer receives from `bundle` when `holder` holds it.
    Rat cross_value(int holder, int observer, std::span<const int> bundle) const;

    // Network-form accessors; throw GeneralFormUnsupported otherwise.
    const Rat& weight(int giver, int observer) const;
    const Rat& self_weight(int agent) const { return weight(agent, agent); }
    InfluenceVector influence_vector(int observer) const;
    const NetworkWeights& weights() const;

    const GeneralValues& cross_values() const;

private:
    Instance() = default;

    int n_ = 0, m_ = 0;
    std::vector<std::vector<Rat>> values_;
    std::variant<NetworkWeights, GeneralValues> ext_;
};

} // namespace extfair
