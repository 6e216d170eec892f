#include "extfair/generator.hpp"

#include "extfair/bundle_claiming.hpp"
#include "extfair/error.hpp"
#include "extfair/fairness.hpp"

#include <algorithm>
#include <sstream>

namespace extfair {

std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t k) {
    if (k == 0) fail(Errc::InvalidArgument, "bounded_draw needs k >= 1");
    std::uint64_t threshold = (0 - k) % k;
    for (;;) {
        std::uint64_t r = rng();
        if (r >= threshold) return r % k;
    }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(seed ^ splitmix64(index)); }

void validate(const GenConfig& cfg) {
    if (cfg.count < 0) fail(Errc::BadConfig, "count must be non-negative");
    if (cfg.n_lo < 1 || cfg.n_hi < cfg.n_lo) fail(Errc::BadConfig, "agent range is empty");
    if (cfg.m_hi < cfg.n_hi || cfg.m_hi < cfg.m_lo)
        fail(Errc::BadConfig, "item range must cover at least n items per instance");
    if (cfg.beta < 0 || cfg.beta > 1) fail(Errc::BadConfig, "beta must lie in [0,1]");
    if (cfg.v_lo < 0 || cfg.v_hi < cfg.v_lo) fail(Errc::BadConfig, "value range is empty or negative");
}

Instance generate_instance(const GenConfig& cfg, std::uint64_t index) {
    validate(cfg);
    std::mt19937_64 rng(mix_seed(cfg.seed, index));

    const int n = cfg.n_lo + static_cast<int>(bounded_draw(rng, cfg.n_hi - cfg.n_lo + 1));
    const int m_lo = std::max(cfg.m_lo, n);
    const int m = m_lo + static_cast<int>(bounded_draw(rng, cfg.m_hi - m_lo + 1));

    std::vector<std::vector<Rat>> values(n, std::vector<Rat>(m));
    for (int i = 0; i < n; ++i)
        for (int b = 0; b < m; ++b)
            values[i][b] = Rat(cfg.v_lo + static_cast<long>(bounded_draw(rng, cfg.v_hi - cfg.v_lo + 1)));

    constexpr long grid = 1000;
    std::vector<std::vector<Rat>> w(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i) {
        if (n == 1) {
            w[0][0] = 1;
            break;
        }
        Rat self = cfg.beta + (1 - cfg.beta) * rat_frac(static_cast<long>(bounded_draw(rng, grid + 1)), grid);
        w[i][i] = self;
        Rat rest = 1 - self;
        std::vector<long> cuts;
        cuts.reserve(n);
        cuts.push_back(0);
        for (int t = 0; t < n - 2; ++t) cuts.push_back(static_cast<long>(bounded_draw(rng, grid + 1)));
        cuts.push_back(grid);
        std::sort(cuts.begin(), cuts.end());
        int slot = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            w[j][i] = rest * rat_frac(cuts[slot + 1] - cuts[slot], grid);
            ++slot;
        }
    }
    return Instance::network(std::move(values), NetworkWeights{std::move(w)});
}

Instance generate_general_instance(std::uint64_t seed, std::uint64_t index, int n_lo, int n_hi, int m_lo, int m_hi,
                                   long v_lo, long v_hi) {
    if (n_lo < 1 || n_hi < n_lo || m_lo < 1 || m_hi < m_lo || v_lo < 0 || v_hi < v_lo)
        fail(Errc::BadConfig, "bad general-generator ranges");
    std::mt19937_64 rng(mix_seed(seed, index));
    const int n = n_lo + static_cast<int>(bounded_draw(rng, n_hi - n_lo + 1));
    const int m = m_lo + static_cast<int>(bounded_draw(rng, m_hi - m_lo + 1));
    GeneralValues gv;
    gv.v.assign(n, std::vector<std::vector<Rat>>(n, std::vector<Rat>(m)));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            for (int b = 0; b < m; ++b)
                gv.v[j][i][b] = Rat(v_lo + static_cast<long>(bounded_draw(rng, v_hi - v_lo + 1)));
    return Instance::general(std::move(gv));
}

const char* strategy_name(Strategy s) {
    switch (s) {
    case Strategy::BcExact: return "bc-exact";
    case Strategy::BcLpt: return "bc-lpt";
    case Strategy::CutAndChoose: return "cut-and-choose";
    }
    return "?";
}

void validate(const ExperimentConfig& cfg) {
    validate(cfg.gen);
    if (cfg.strategies.empty()) fail(Errc::BadConfig, "at least one strategy is required");
    for (Strategy s : cfg.strategies)
        if (s == Strategy::CutAndChoose && (cfg.gen.n_lo != 2 || cfg.gen.n_hi != 2))
            fail(Errc::BadConfig, "cut-and-choose needs an agent range fixed to exactly 2");
}

namespace {

Rat bound_factor(Strategy s, const Rat& beta) {
    switch (s) {
    case Strategy::BcExact: return beta / 2;
    case Strategy::BcLpt: return beta / 4;
    case Strategy::CutAndChoose: return Rat(1);
    }
    return Rat(0);
}

struct Row {
    int instance;
    int agent;
    int n, m;
    Strategy strategy;
    Rat emms;
    Rat utility;
    bool have_ratio;
    Rat ratio;
    Rat bound;
    bool bound_ok;
    bool invariants_ok;
};

} // namespace

std::string ExperimentResult::summary_text() const {
    std::ostringstream out;
    for (const StrategySummary& s : summaries) {
        out << "strategy " << strategy_name(s.strategy) << ": agents=" << s.agents_evaluated
            << " bound_violations=" << s.bound_violations;
        if (s.have_ratio)
            out << " min_ratio=" << rat_to_string(s.min_ratio) << " (~" << rat_to_double(s.min_ratio) << ")"
                << " median_ratio=" << rat_to_string(s.median_ratio) << " (~" << rat_to_double(s.median_ratio)
                << ")";
        out << "\n";
    }
    return out.str();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    const int count = cfg.gen.count;
    std::vector<std::vector<Row>> per_instance(count);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (int idx = 0; idx < count; ++idx) {
        Instance inst = generate_instance(cfg.gen, static_cast<std::uint64_t>(idx));
        const int n = inst.agents();

        std::vector<Rat> agent_emms(n);
        for (int i = 0; i < n; ++i) agent_emms[i] = emms(inst, i, EmmsMode::Exact, cfg.search).value;

        std::vector<Row>& rows = per_instance[idx];
        for (Strategy s : cfg.strategies) {
            std::vector<Rat> u;
            bool invariants_ok = true;
            if (s == Strategy::CutAndChoose) {
                u = cut_and_choose(inst, cfg.search).utilities;
            } else {
                BcOptions opts;
                opts.search = cfg.search;
                BcResult res = run_bc(inst, s == Strategy::BcExact ? PartitionSource::Exact : PartitionSource::Lpt,
                                      opts);
                u = res.allocation.utilities;
            }
            Rat factor = bound_factor(s, cfg.gen.beta);
            for (int i = 0; i < n; ++i) {
                Row row;
                row.instance = idx;
                row.agent = i;
                row.n = n;
                row.m = inst.items();
                row.strategy = s;
                row.emms = agent_emms[i];
                row.utility = u[i];
                row.have_ratio = agent_emms[i] > 0;
                row.ratio = row.have_ratio ? Rat(u[i] / agent_emms[i]) : Rat(0);
                row.bound = factor * agent_emms[i];
                row.bound_ok = u[i] >= row.bound;
                row.invariants_ok = invariants_ok;
                rows.push_back(std::move(row));
            }
        }
    }

    ExperimentResult result;
    std::ostringstream csv;
    csv << kReportSchema << "\n";
    csv << "instance,agent,n,m,beta,strategy,emms,utility,ratio,bound,bound_ok,invariants_ok\n";

    std::vector<StrategySummary> summaries;
    for (Strategy s : cfg.strategies) summaries.push_back(StrategySummary{s});
    std::vector<std::vector<Rat>> ratios(cfg.strategies.size());

    for (int idx = 0; idx < count; ++idx) {
        for (const Row& row : per_instance[idx]) {
            csv << row.instance << ',' << row.agent << ',' << row.n << ',' << row.m << ','
                << rat_to_string(cfg.gen.beta) << ',' << strategy_name(row.strategy) << ','
                << rat_to_string(row.emms) << ',' << rat_to_string(row.utility) << ','
                << (row.have_ratio ? rat_to_string(row.ratio) : std::string()) << ',' << rat_to_string(row.bound)
                << ',' << (row.bound_ok ? 1 : 0) << ',' << (row.invariants_ok ? 1 : 0) << "\n";
            size_t si = 0;
            while (cfg.strategies[si] != row.strategy) ++si;
            StrategySummary& sum = summaries[si];
            ++sum.agents_evaluated;
            if (!row.bound_ok) {
                ++sum.bound_violations;
                result.all_ok = false;
            }
            if (row.have_ratio) ratios[si].push_back(row.ratio);
        }
    }

    for (size_t si = 0; si < summaries.size(); ++si) {
        auto& rs = ratios[si];
        if (rs.empty()) continue;
        std::sort(rs.begin(), rs.end());
        summaries[si].have_ratio = true;
        summaries[si].min_ratio = rs.front();
        summaries[si].median_ratio = rs[(rs.size() - 1) / 2];
    }
    result.summaries = std::move(summaries);
    result.csv = csv.str();
    return result;
}

} // namespace extfair
