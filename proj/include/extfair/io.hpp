#pragma once

#include "extfair/allocation.hpp"
#include "extfair/bundle_claiming.hpp"
#include "extfair/instance.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace extfair {

// Instance files: {"model": "network"|"general", "n": int, "m": int,
// "values": n x m, "weights": n x n (network), "cross_values": n x n x m
// (general)}. Rationals are "p/q" or decimal strings; integer JSON numbers
// are accepted, non-integer numbers are rejected as inexact.
Instance parse_instance_json(const nlohmann::json& j);
Instance load_instance(const std::filesystem::path& path);

nlohmann::json instance_to_json(const Instance& inst);
void save_instance(const Instance& inst, const std::filesystem::path& path);

nlohmann::json allocation_to_json(const Allocation& alloc, const std::string& strategy, const Rat& bound_factor);

struct ParsedAllocation {
    std::vector<ItemSet> bundles;
    std::vector<int> assignment;
    std::string strategy;
    Rat bound_factor;
};
ParsedAllocation parse_allocation_json(const nlohmann::json& j);
ParsedAllocation load_allocation(const std::filesystem::path& path);

nlohmann::json trace_to_json(const Trace& trace);

std::string json_to_string(const nlohmann::json& j);
void save_json(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json load_json(const std::filesystem::path& path);

} // namespace extfair
