#pragma once

#include "extfair/instance.hpp"
#include "extfair/partitioning.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace extfair {

// Platform-independent uniform draw from [0, k); std::uniform_int_distribution
// is implementation-defined, so streams would differ across standard
// libraries.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t k);

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

struct GenConfig {
    std::uint64_t seed = 1;
    int count = 10;
    int n_lo = 2, n_hi = 4;
    int m_lo = 4, m_hi = 8; // per instance, m is drawn from [max(m_lo, n), m_hi]
    Rat beta = Rat(1, 2);   // self-weight floor, in [0, 1]
    long v_lo = 0, v_hi = 20;
};

void validate(const GenConfig& cfg);

// Deterministic per (cfg.seed, index). Network form; every agent's self
// weight lands in [beta, 1] on a 1/1000 grid and each incoming column sums to
// exactly 1.
Instance generate_instance(const GenConfig& cfg, std::uint64_t index);

// Random general-form instance (cross-valuation tensor with integer entries);
// used by the evaluation paths that exercise the matching route.
Instance generate_general_instance(std::uint64_t seed, std::uint64_t index, int n_lo, int n_hi, int m_lo, int m_hi,
                                   long v_lo, long v_hi);

enum class Strategy { BcExact, BcLpt, CutAndChoose };

const char* strategy_name(Strategy s);

struct ExperimentConfig {
    GenConfig gen;
    std::vector<Strategy> strategies = {Strategy::BcExact};
    PartitionSearchOptions search{};
};

void validate(const ExperimentConfig& cfg);

struct StrategySummary {
    Strategy strategy;
    int agents_evaluated = 0;
    int bound_violations = 0;
    bool have_ratio = false;
    Rat min_ratio = 0;    // over agents with positive EMMS
    Rat median_ratio = 0; // lower median
};

struct ExperimentResult {
    std::string csv; // byte-identical for identical (seed, config)
    std::vector<StrategySummary> summaries;
    bool all_ok = true;

    std::string summary_text() const;
};

inline constexpr const char* kReportSchema = "# extfair-report v1";

// Runs every strategy on every generated instance, checks the advertised
// bound per agent against the exact EMMS oracle, and emits one CSV row per
// (instance, strategy, agent), ordered by those keys regardless of execution
// order.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

} // namespace extfair
