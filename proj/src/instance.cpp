#include "extfair/instance.hpp"

#include "extfair/error.hpp"

#include <algorithm>

namespace extfair {

namespace {

void check_values(const std::vector<std::vector<Rat>>& values, int n, int m) {
    if (static_cast<int>(values.size()) != n)
        fail(Errc::DimensionMismatch, "expected one value row per agent");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(values[i].size()) != m)
            fail(Errc::DimensionMismatch, "value row " + std::to_string(i) + " has wrong length");
        for (const Rat& v : values[i])
            if (v < 0) fail(Errc::NegativeValue, "item value of agent " + std::to_string(i));
    }
}

} // namespace

Instance Instance::network(std::vector<std::vector<Rat>> values, NetworkWeights weights) {
    Instance inst;
    inst.n_ = static_cast<int>(values.size());
    if (inst.n_ == 0) fail(Errc::DimensionMismatch, "instance needs at least one agent");
    inst.m_ = static_cast<int>(values[0].size());
    if (inst.m_ == 0) fail(Errc::DimensionMismatch, "instance needs at least one item");
    check_values(values, inst.n_, inst.m_);

    if (static_cast<int>(weights.w.size()) != inst.n_)
        fail(Errc::DimensionMismatch, "weight matrix must be n x n");
    for (const auto& row : weights.w)
        if (static_cast<int>(row.size()) != inst.n_)
            fail(Errc::DimensionMismatch, "weight matrix must be n x n");

    for (int j = 0; j < inst.n_; ++j)
        for (int i = 0; i < inst.n_; ++i)
            if (weights.w[j][i] < 0)
                fail(Errc::NegativeValue, "influence weight w[" + std::to_string(j) + "][" + std::to_string(i) + "]");

    for (int i = 0; i < inst.n_; ++i) {
        Rat col = 0;
        for (int j = 0; j < inst.n_; ++j) col += weights.w[j][i];
        if (col != 1)
            fail(Errc::UnnormalizedWeights,
                 "incoming weights of agent " + std::to_string(i) + " sum to " + rat_to_string(col));
    }

    inst.values_ = std::move(values);
    inst.ext_ = std::move(weights);
    return inst;
}

Instance Instance::general(GeneralValues cross) {
    Instance inst;
    inst.n_ = static_cast<int>(cross.v.size());
    if (inst.n_ == 0) fail(Errc::DimensionMismatch, "instance needs at least one agent");
    if (static_cast<int>(cross.v[0].size()) != inst.n_ || cross.v[0][0].empty())
        fail(Errc::DimensionMismatch, "cross-value tensor must be n x n x m");
    inst.m_ = static_cast<int>(cross.v[0][0].size());

    for (int j = 0; j < inst.n_; ++j) {
        if (static_cast<int>(cross.v[j].size()) != inst.n_)
            fail(Errc::DimensionMismatch, "cross-value tensor must be n x n x m");
        for (int i = 0; i < inst.n_; ++i) {
            if (static_cast<int>(cross.v[j][i].size()) != inst.m_)
                fail(Errc::DimensionMismatch, "cross-value tensor must be n x n x m");
            for (const Rat& v : cross.v[j][i])
                if (v < 0)
                    fail(Errc::NegativeValue,
                         "cross value v[" + std::to_string(j) + "][" + std::to_string(i) + "]");
        }
    }

    inst.values_.resize(inst.n_);
    for (int i = 0; i < inst.n_; ++i) inst.values_[i] = cross.v[i][i];
    inst.ext_ = std::move(cross);
    return inst;
}

Rat Instance::own_value(int agent, std::span<const int> bundle) const {
    Rat s = 0;
    for (int b : bundle) s += values_[agent][b];
    return s;
}

Rat Instance::total_value(int agent) const {
    Rat s = 0;
    for (const Rat& v : values_[agent]) s += v;
    return s;
}

Rat Instance::cross_value(int holder, int observer, std::span<const int> bundle) const {
    if (const auto* nw = std::get_if<NetworkWeights>(&ext_)) {
        Rat s = 0;
        for (int b : bundle) s += values_[observer][b];
        return nw->w[holder][observer] * s;
    }
    const auto& t = std::get<GeneralValues>(ext_).v[holder][observer];
    Rat s = 0;
    for (int b : bundle) s += t[b];
    return s;
}

const Rat& Instance::weight(int giver, int observer) const {
    return weights().w[giver][observer];
}

const NetworkWeights& Instance::weights() const {
    if (const auto* nw = std::get_if<NetworkWeights>(&ext_)) return *nw;
    fail(Errc::GeneralFormUnsupported, "operation needs influence weights");
}

const GeneralValues& Instance::cross_values() const {
    if (const auto* gv = std::get_if<GeneralValues>(&ext_)) return *gv;
    fail(Errc::GeneralFormUnsupported, "instance is in network form");
}

InfluenceVector Instance::influence_vector(int observer) const {
    const auto& w = weights().w;
    InfluenceVector x;
    x.entries.reserve(n_);
    for (int j = 0; j < n_; ++j) x.entries.push_back(w[j][observer]);
    std::sort(x.entries.begin(), x.entries.end());
    return x;
}

} // namespace extfair
