#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "matchmech/metrics.hpp"
#include "matchmech/model.hpp"
#include "matchmech/oracle.hpp"
#include "matchmech/simharness.hpp"

namespace matchmech {

using Json = nlohmann::ordered_json;

/// Malformed or schema-violating input document.
class FormatError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json read_json_file(const std::filesystem::path& path);
/// Writes `doc` indented by two spaces with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& doc);

// {"categories":[{"id":..,"doctors":[..],"patients":[{"id":..,"prefs":[..]}]}]}
// Unknown fields are rejected.
ProblemInstance parse_instance(const Json& doc);
Json to_json(const ProblemInstance& instance);

// {"categories":[{"id":..,"owners":[[doctor,patient],..]}]}
Endowment parse_endowment(const Json& doc);
Json to_json(const Endowment& endowment);

struct AllocationDocument {
    Allocation allocation;
    std::optional<Endowment> endowment;
    std::optional<std::uint64_t> seed;
};

// {"categories":[{"id":..,"pairs":[[patient,doctor],..],"unmatched_patients":[..],
//  "unmatched_doctors":[..]}],"endowment":<endowment or null>,"seed":<u64 or null>}
AllocationDocument parse_allocation(const Json& doc);
Json to_json(const AllocationDocument& doc);

Json to_json(const Coalition& coalition);
Json to_json(const Misreport& misreport);
Json to_json(const ProbeReport& report);
Json to_json(const MetricsReport& report);
Json to_json(const std::vector<Violation>& violations);

/// Header `scenario,row,mechanism,variation,trial,seed,tel,nba,runtime_us`.
void write_csv(std::ostream& out, const ExperimentResult& result);
Json summary_json(const std::vector<ConfigSummary>& summary);

}  // namespace matchmech
