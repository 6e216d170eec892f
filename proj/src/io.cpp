#include "extfair/io.hpp"

#include "extfair/error.hpp"

#include <fstream>

namespace extfair {

using nlohmann::json;

namespace {

Rat rat_from_json(const json& j, const char* what) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    if (j.is_number())
        fail(Errc::ParseError,
             std::string(what) + ": non-integer JSON numbers are inexact; encode rationals as strings");
    fail(Errc::ParseError, std::string(what) + ": expected a rational string or integer");
}

std::vector<std::vector<Rat>> matrix_from_json(const json& j, const char* what) {
    if (!j.is_array()) fail(Errc::ParseError, std::string(what) + ": expected an array of rows");
    std::vector<std::vector<Rat>> out;
    for (const auto& row : j) {
        if (!row.is_array()) fail(Errc::ParseError, std::string(what) + ": expected an array row");
        std::vector<Rat> r;
        for (const auto& cell : row) r.push_back(rat_from_json(cell, what));
        out.push_back(std::move(r));
    }
    return out;
}

int int_field(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer())
        fail(Errc::ParseError, std::string("missing integer field '") + key + "'");
    return j.at(key).get<int>();
}

} // namespace

Instance parse_instance_json(const json& j) {
    if (!j.is_object()) fail(Errc::ParseError, "instance file must hold a JSON object");
    std::string model = j.value("model", "network");
    int n = int_field(j, "n");
    int m = int_field(j, "m");
    if (n < 1 || m < 1) fail(Errc::ParseError, "n and m must be positive");

    if (model == "network") {
        if (!j.contains("values")) fail(Errc::ParseError, "missing 'values'");
        if (!j.contains("weights")) fail(Errc::ParseError, "missing 'weights'");
        auto values = matrix_from_json(j.at("values"), "values");
        auto weights = matrix_from_json(j.at("weights"), "weights");
        if (static_cast<int>(values.size()) != n) fail(Errc::ParseError, "'values' must have n rows");
        for (const auto& row : values)
            if (static_cast<int>(row.size()) != m) fail(Errc::ParseError, "'values' rows must have m entries");
        if (static_cast<int>(weights.size()) != n) fail(Errc::ParseError, "'weights' must be n x n");
        for (const auto& row : weights)
            if (static_cast<int>(row.size()) != n) fail(Errc::ParseError, "'weights' must be n x n");
        return Instance::network(std::move(values), NetworkWeights{std::move(weights)});
    }
    if (model == "general") {
        if (!j.contains("cross_values")) fail(Errc::ParseError, "missing 'cross_values'");
        const json& t = j.at("cross_values");
        if (!t.is_array() || static_cast<int>(t.size()) != n)
            fail(Errc::ParseError, "'cross_values' must have n holder slices");
        GeneralValues gv;
        for (const auto& slice : t) gv.v.push_back(matrix_from_json(slice, "cross_values"));
        for (const auto& slice : gv.v) {
            if (static_cast<int>(slice.size()) != n) fail(Errc::ParseError, "'cross_values' must be n x n x m");
            for (const auto& row : slice)
                if (static_cast<int>(row.size()) != m) fail(Errc::ParseError, "'cross_values' must be n x n x m");
        }
        if (j.contains("values")) {
            auto values = matrix_from_json(j.at("values"), "values");
            for (int i = 0; i < n; ++i)
                if (values.at(i) != gv.v[i][i])
                    fail(Errc::ParseError, "'values' disagrees with the cross_values diagonal");
        }
        return Instance::general(std::move(gv));
    }
    fail(Errc::ParseError, "unknown model '" + model + "'");
}

Instance load_instance(const std::filesystem::path& path) {
    return parse_instance_json(load_json(path));
}

json instance_to_json(const Instance& inst) {
    json j;
    j["model"] = inst.is_network() ? "network" : "general";
    j["n"] = inst.agents();
    j["m"] = inst.items();
    json values = json::array();
    for (int i = 0; i < inst.agents(); ++i) {
        json row = json::array();
        for (int b = 0; b < inst.items(); ++b) row.push_back(rat_to_string(inst.value(i, b)));
        values.push_back(std::move(row));
    }
    j["values"] = std::move(values);
    if (inst.is_network()) {
        json w = json::array();
        for (int g = 0; g < inst.agents(); ++g) {
            json row = json::array();
            for (int i = 0; i < inst.agents(); ++i) row.push_back(rat_to_string(inst.weight(g, i)));
            w.push_back(std::move(row));
        }
        j["weights"] = std::move(w);
    } else {
        json t = json::array();
        for (int g = 0; g < inst.agents(); ++g) {
            json slice = json::array();
            for (int i = 0; i < inst.agents(); ++i) {
                json row = json::array();
                for (int b = 0; b < inst.items(); ++b)
                    row.push_back(rat_to_string(inst.cross_values().v[g][i][b]));
                slice.push_back(std::move(row));
            }
            t.push_back(std::move(slice));
        }
        j["cross_values"] = std::move(t);
    }
    return j;
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
    save_json(instance_to_json(inst), path);
}

json allocation_to_json(const Allocation& alloc, const std::string& strategy, const Rat& bound_factor) {
    json j;
    j["strategy"] = strategy;
    j["bound_factor"] = rat_to_string(bound_factor);
    j["bundles"] = alloc.partition.bundles();
    j["assignment"] = alloc.assignment;
    json u = json::array();
    for (const Rat& r : alloc.utilities) u.push_back(rat_to_string(r));
    j["utilities"] = std::move(u);
    return j;
}

ParsedAllocation parse_allocation_json(const json& j) {
    if (!j.is_object()) fail(Errc::ParseError, "allocation file must hold a JSON object");
    ParsedAllocation out;
    out.strategy = j.value("strategy", "");
    out.bound_factor = j.contains("bound_factor") ? rat_from_json(j.at("bound_factor"), "bound_factor") : Rat(0);
    if (!j.contains("bundles") || !j.at("bundles").is_array()) fail(Errc::ParseError, "missing 'bundles'");
    for (const auto& b : j.at("bundles")) {
        if (!b.is_array()) fail(Errc::ParseError, "'bundles' entries must be arrays");
        ItemSet items;
        for (const auto& it : b) {
            if (!it.is_number_integer()) fail(Errc::ParseError, "bundle items must be integers");
            items.push_back(it.get<int>());
        }
        out.bundles.push_back(std::move(items));
    }
    if (!j.contains("assignment") || !j.at("assignment").is_array()) fail(Errc::ParseError, "missing 'assignment'");
    for (const auto& a : j.at("assignment")) {
        if (!a.is_number_integer()) fail(Errc::ParseError, "assignment entries must be integers");
        out.assignment.push_back(a.get<int>());
    }
    return out;
}

ParsedAllocation load_allocation(const std::filesystem::path& path) {
    return parse_allocation_json(load_json(path));
}

namespace {

json mapping_to_json(const std::map<int, int>& mapping) {
    json m = json::object();
    for (const auto& [sat, pos] : mapping)
        m[std::to_string(sat)] = pos == kFloating ? json("F") : json(pos);
    return m;
}

json report_to_json(const SatisfactionReport& rep) {
    json r;
    json levels = json::array();
    for (const LevelCheck& lc : rep.levels) {
        levels.push_back({{"level", lc.level},
                          {"mapped_value", rat_to_string(lc.mapped_value)},
                          {"lower_ok", lc.lower_ok},
                          {"upper_ok", lc.upper_ok}});
    }
    r["levels"] = std::move(levels);
    r["floating_value"] = rat_to_string(rep.floating_value);
    r["floating_ok"] = rep.floating_ok;
    r["zero_expectation"] = rep.zero_expectation;
    r["external_value"] = rat_to_string(rep.external_value);
    r["external_floor"] = rat_to_string(rep.external_floor);
    r["external_ok"] = rep.external_ok;
    return r;
}

} // namespace

json trace_to_json(const Trace& trace) {
    json j;
    j["strategy"] = trace.source_kind == PartitionSource::Exact ? "bc-exact" : "bc-lpt";
    json sources = json::array();
    for (const AgentSourceInfo& s : trace.sources) {
        json vs = json::array();
        for (const Rat& v : s.v) vs.push_back(rat_to_string(v));
        sources.push_back({{"agent", s.agent},
                           {"bundles", s.source.bundles()},
                           {"sorted_values", std::move(vs)},
                           {"objective", rat_to_string(s.objective)}});
    }
    j["sources"] = std::move(sources);

    json steps = json::array();
    for (const TraceStep& st : trace.steps) {
        json step;
        step["step"] = st.step;
        json cands = json::array();
        for (const auto& [agent, items] : st.candidates) cands.push_back({{"agent", agent}, {"items", items}});
        step["candidates"] = std::move(cands);
        step["chosen"] = st.chosen_agent;
        step["allocated"] = st.allocated;
        json swaps = json::array();
        for (const SwapEvent& ev : st.swaps)
            swaps.push_back({{"agent", ev.agent},
                             {"moved_satisfied", ev.moved_satisfied},
                             {"to_level", ev.to_level},
                             {"evicted", ev.evicted}});
        step["swaps"] = std::move(swaps);
        json snaps = json::array();
        for (const auto& sn : st.snapshots)
            snaps.push_back({{"agent", sn.agent},
                             {"level", sn.level},
                             {"expectation", rat_to_string(sn.expectation_value)},
                             {"mapping", mapping_to_json(sn.mapping)}});
        step["snapshots"] = std::move(snaps);
        json checks = json::array();
        for (const StepCheck& c : st.checks)
            checks.push_back({{"agent", c.agent},
                              {"satisfaction", report_to_json(c.satisfaction)},
                              {"pool_value", rat_to_string(c.pool_value)},
                              {"feasible_ok", c.feasible_ok},
                              {"level_ok", c.level_ok}});
        step["checks"] = std::move(checks);
        steps.push_back(std::move(step));
    }
    j["steps"] = std::move(steps);
    j["leftovers"] = trace.leftovers;
    j["leftover_recipient"] = trace.leftover_recipient;
    j["invariants_checked"] = trace.invariants_checked;
    return j;
}

std::string json_to_string(const json& j) { return j.dump(2) + "\n"; }

void save_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(Errc::ParseError, "cannot open '" + path.string() + "' for writing");
    out << json_to_string(j);
    if (!out) fail(Errc::ParseError, "failed writing '" + path.string() + "'");
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::ParseError, "cannot open '" + path.string() + "'");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) fail(Errc::ParseError, "invalid JSON in '" + path.string() + "'");
    return j;
}

} // namespace extfair
