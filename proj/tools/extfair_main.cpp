#include "extfair/bundle_claiming.hpp"
#include "extfair/error.hpp"
#include "extfair/fairness.hpp"
#include "extfair/generator.hpp"
#include "extfair/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace extfair;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

Strategy parse_strategy(const std::string& s) {
    if (s == "bc-exact") return Strategy::BcExact;
    if (s == "bc-lpt") return Strategy::BcLpt;
    if (s == "cut-and-choose") return Strategy::CutAndChoose;
    fail(Errc::BadConfig, "unknown strategy: " + s);
}

EmmsMode parse_mode(const std::string& s) { return s == "lpt" ? EmmsMode::LptBound : EmmsMode::Exact; }

std::string rat_pretty(const Rat& r) { return rat_to_string(r) + " (~" + std::to_string(rat_to_double(r)) + ")"; }

Rat min_self_weight(const Instance& inst) {
    Rat w = inst.self_weight(0);
    for (int i = 1; i < inst.agents(); ++i) w = std::min(w, inst.self_weight(i));
    return w;
}

Rat strategy_bound_factor(Strategy s, const Instance& inst) {
    switch (s) {
    case Strategy::BcExact: return min_self_weight(inst) / 2;
    case Strategy::BcLpt: return min_self_weight(inst) / 4;
    case Strategy::CutAndChoose: return Rat(1);
    }
    return Rat(0);
}

struct GenArgs {
    GenConfig cfg;
    std::string beta = "1/2";
    std::string out;
    bool general = false;
};

int cmd_gen(GenArgs& a) {
    a.cfg.beta = parse_rational(a.beta);
    fs::create_directories(a.out);
    for (int idx = 0; idx < a.cfg.count; ++idx) {
        Instance inst = a.general
                            ? generate_general_instance(a.cfg.seed, static_cast<std::uint64_t>(idx), a.cfg.n_lo,
                                                        a.cfg.n_hi, a.cfg.m_lo, a.cfg.m_hi, a.cfg.v_lo, a.cfg.v_hi)
                            : generate_instance(a.cfg, static_cast<std::uint64_t>(idx));
        char name[32];
        std::snprintf(name, sizeof(name), "instance_%03d.json", idx);
        fs::path path = fs::path(a.out) / name;
        save_instance(inst, path);
        std::cout << path.string() << "\n";
    }
    return kExitOk;
}

struct EmmsArgs {
    std::string instance_path;
    int agent = -1;
    std::string mode = "exact";
    unsigned long long cap = default_partition_cap();
};

int cmd_emms(EmmsArgs& a) {
    Instance inst = load_instance(a.instance_path);
    PartitionSearchOptions opts;
    opts.cap = a.cap;
    EmmsMode mode = parse_mode(a.mode);
    int lo = a.agent < 0 ? 0 : a.agent;
    int hi = a.agent < 0 ? inst.agents() : a.agent + 1;
    if (lo >= inst.agents()) fail(Errc::InvalidArgument, "agent index out of range");
    for (int i = lo; i < hi; ++i) {
        EmmsValue e = emms(inst, i, mode, opts);
        std::cout << "agent " << i << ": emms" << (e.exact ? "" : " (lpt lower bound)") << " = " << rat_pretty(e.value)
                  << "\n";
    }
    return kExitOk;
}

struct AllocateArgs {
    std::string instance_path;
    std::string strategy = "bc-exact";
    std::string out;
    std::string trace_out;
    unsigned long long cap = default_partition_cap();
};

int cmd_allocate(AllocateArgs& a) {
    Instance inst = load_instance(a.instance_path);
    Strategy s = parse_strategy(a.strategy);
    PartitionSearchOptions search;
    search.cap = a.cap;

    Allocation alloc{Partition{0, 0, {}}, {}, {}};
    if (s == Strategy::CutAndChoose) {
        alloc = cut_and_choose(inst, search);
    } else {
        BcOptions opts;
        opts.search = search;
        BcResult res = run_bc(inst, s == Strategy::BcExact ? PartitionSource::Exact : PartitionSource::Lpt, opts);
        alloc = std::move(res.allocation);
        if (!a.trace_out.empty()) save_json(trace_to_json(res.trace), a.trace_out);
    }
    for (int i = 0; i < inst.agents(); ++i) {
        std::cout << "agent " << i << ": bundle {";
        const ItemSet& bundle = alloc.partition.bundles()[alloc.assignment[i]];
        for (size_t k = 0; k < bundle.size(); ++k) std::cout << (k ? "," : "") << bundle[k];
        std::cout << "} utility = " << rat_pretty(alloc.utilities[i]) << "\n";
    }
    if (!a.out.empty()) save_json(allocation_to_json(alloc, a.strategy, strategy_bound_factor(s, inst)), a.out);
    return kExitOk;
}

struct VerifyArgs {
    std::string instance_path;
    std::string allocation_path;
    std::string alpha; // empty: use the factor stored in the allocation file
    std::string mode = "exact";
    unsigned long long cap = default_partition_cap();
};

int cmd_verify(VerifyArgs& a) {
    Instance inst = load_instance(a.instance_path);
    ParsedAllocation parsed = load_allocation(a.allocation_path);
    Rat alpha = a.alpha.empty() ? parsed.bound_factor : parse_rational(a.alpha);

    Partition p(inst.agents(), inst.items(), parsed.bundles);
    FairnessReport report = check_allocation(inst, p, parsed.assignment, alpha, parse_mode(a.mode),
                                             PartitionSearchOptions{.cap = a.cap});
    for (const AgentFairnessRow& row : report.rows) {
        std::cout << "agent " << row.agent << ": utility=" << rat_to_string(row.utility)
                  << " emms=" << rat_to_string(row.emms) << (row.emms_exact ? "" : " (lpt lower bound)")
                  << " threshold=" << rat_to_string(row.threshold) << " -> " << (row.pass ? "pass" : "FAIL")
                  << "\n    mms=" << rat_to_string(row.mms_raw)
                  << (row.mms_self_scaled ? " self-scaled=" + rat_to_string(*row.mms_self_scaled) : std::string())
                  << " average-share=" << rat_to_string(row.average_share)
                  << " ext-proportional=" << rat_to_string(row.ext_prop_share) << "\n";
    }
    std::cout << (report.all_pass ? "all agents meet" : "some agent misses") << " alpha="
              << rat_to_string(report.alpha) << " of emms\n";
    return report.all_pass ? kExitOk : kExitCheckFailed;
}

struct TraceArgs {
    std::string instance_path;
    std::string strategy = "bc-exact";
    std::string out;
    unsigned long long cap = default_partition_cap();
};

int cmd_trace(TraceArgs& a) {
    Instance inst = load_instance(a.instance_path);
    Strategy s = parse_strategy(a.strategy);
    if (s == Strategy::CutAndChoose) fail(Errc::BadConfig, "trace covers the bundle-claiming strategies only");
    BcOptions opts;
    opts.search.cap = a.cap;
    BcResult res = run_bc(inst, s == Strategy::BcExact ? PartitionSource::Exact : PartitionSource::Lpt, opts);

    int swaps = 0;
    for (const TraceStep& st : res.trace.steps) swaps += static_cast<int>(st.swaps.size());
    std::cout << "steps=" << res.trace.steps.size() << " swaps=" << swaps
              << " leftovers=" << res.trace.leftovers.size() << " -> agent " << res.trace.leftover_recipient
              << (res.trace.invariants_checked ? " (invariants checked)" : "") << "\n";
    nlohmann::json j = trace_to_json(res.trace);
    if (a.out.empty())
        std::cout << json_to_string(j);
    else
        save_json(j, a.out);
    return kExitOk;
}

struct BenchArgs {
    GenConfig cfg;
    std::string beta = "1/2";
    std::vector<std::string> strategies = {"bc-exact"};
    std::string out;
    unsigned long long cap = default_partition_cap();
};

int cmd_bench(BenchArgs& a) {
    ExperimentConfig cfg;
    cfg.gen = a.cfg;
    cfg.gen.beta = parse_rational(a.beta);
    cfg.search.cap = a.cap;
    cfg.strategies.clear();
    for (const std::string& s : a.strategies) cfg.strategies.push_back(parse_strategy(s));

    ExperimentResult result = run_experiment(cfg);
    if (a.out.empty())
        std::cout << result.csv;
    else {
        std::ofstream f(a.out, std::ios::binary);
        f << result.csv;
    }
    std::cerr << result.summary_text();
    return result.all_ok ? kExitOk : kExitCheckFailed;
}

void add_gen_range_flags(CLI::App* cmd, GenConfig& cfg) {
    cmd->add_option("--seed", cfg.seed, "RNG seed");
    cmd->add_option("--count", cfg.count, "number of instances");
    cmd->add_option("--n-lo", cfg.n_lo, "minimum agent count");
    cmd->add_option("--n-hi", cfg.n_hi, "maximum agent count");
    cmd->add_option("--m-lo", cfg.m_lo, "minimum item count (raised to n per instance)");
    cmd->add_option("--m-hi", cfg.m_hi, "maximum item count");
    cmd->add_option("--v-lo", cfg.v_lo, "minimum item value");
    cmd->add_option("--v-hi", cfg.v_hi, "maximum item value");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fair allocation with network externalities"};
    app.require_subcommand(1);

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "generate random instances");
    add_gen_range_flags(gen, gen_args.cfg);
    gen->add_option("--beta", gen_args.beta, "self-weight floor (rational)");
    gen->add_option("--out", gen_args.out, "output directory")->required();
    gen->add_flag("--general", gen_args.general, "emit general-form instances");

    EmmsArgs emms_args;
    CLI::App* emms_cmd = app.add_subcommand("emms", "extended maximin share per agent");
    emms_cmd->add_option("instance", emms_args.instance_path, "instance file")->required();
    emms_cmd->add_option("--agent", emms_args.agent, "single agent index (default: all)");
    emms_cmd->add_option("--mode", emms_args.mode, "exact|lpt")->check(CLI::IsMember({"exact", "lpt"}));
    emms_cmd->add_option("--cap", emms_args.cap, "partition-count cap");

    AllocateArgs alloc_args;
    CLI::App* alloc_cmd = app.add_subcommand("allocate", "run an allocation strategy");
    alloc_cmd->add_option("instance", alloc_args.instance_path, "instance file")->required();
    alloc_cmd->add_option("--strategy", alloc_args.strategy, "bc-exact|bc-lpt|cut-and-choose")
        ->check(CLI::IsMember({"bc-exact", "bc-lpt", "cut-and-choose"}));
    alloc_cmd->add_option("--out", alloc_args.out, "write the allocation as JSON");
    alloc_cmd->add_option("--trace", alloc_args.trace_out, "write the run trace as JSON");
    alloc_cmd->add_option("--cap", alloc_args.cap, "partition-count cap");

    VerifyArgs verify_args;
    CLI::App* verify_cmd = app.add_subcommand("verify", "check an allocation against alpha * emms");
    verify_cmd->add_option("instance", verify_args.instance_path, "instance file")->required();
    verify_cmd->add_option("--allocation", verify_args.allocation_path, "allocation file")->required();
    verify_cmd->add_option("--alpha", verify_args.alpha, "threshold factor (rational); default: stored bound");
    verify_cmd->add_option("--mode", verify_args.mode, "exact|lpt")->check(CLI::IsMember({"exact", "lpt"}));
    verify_cmd->add_option("--cap", verify_args.cap, "partition-count cap");

    TraceArgs trace_args;
    CLI::App* trace_cmd = app.add_subcommand("trace", "run bundle claiming and emit the step trace");
    trace_cmd->add_option("instance", trace_args.instance_path, "instance file")->required();
    trace_cmd->add_option("--strategy", trace_args.strategy, "bc-exact|bc-lpt")
        ->check(CLI::IsMember({"bc-exact", "bc-lpt"}));
    trace_cmd->add_option("--out", trace_args.out, "trace file (default: stdout)");
    trace_cmd->add_option("--cap", trace_args.cap, "partition-count cap");

    BenchArgs bench_args;
    CLI::App* bench_cmd = app.add_subcommand("bench", "seeded experiment sweep with a CSV report");
    add_gen_range_flags(bench_cmd, bench_args.cfg);
    bench_cmd->add_option("--beta", bench_args.beta, "self-weight floor (rational)");
    bench_cmd->add_option("--strategy", bench_args.strategies, "strategies to run (repeatable)")
        ->check(CLI::IsMember({"bc-exact", "bc-lpt", "cut-and-choose"}));
    bench_cmd->add_option("--out", bench_args.out, "CSV file (default: stdout)");
    bench_cmd->add_option("--cap", bench_args.cap, "partition-count cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_args);
        if (emms_cmd->parsed()) return cmd_emms(emms_args);
        if (alloc_cmd->parsed()) return cmd_allocate(alloc_args);
        if (verify_cmd->parsed()) return cmd_verify(verify_args);
        if (trace_cmd->parsed()) return cmd_trace(trace_args);
        if (bench_cmd->parsed()) return cmd_bench(bench_args);
    } catch (const Error& e) {
        std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
        return e.code() == Errc::InvariantBroken ? kExitCheckFailed : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
