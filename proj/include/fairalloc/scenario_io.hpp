#ifndef FAIRALLOC_SCENARIO_IO_HPP
#define FAIRALLOC_SCENARIO_IO_HPP

#include <filesystem>
#include <string>

#include "fairalloc/analysis.hpp"
#include "fairalloc/solver.hpp"
#include "fairalloc/types.hpp"

namespace fairalloc {

// Scenario documents are JSON with schema_version "1". Parsing is strict:
// unknown keys anywhere in the document are rejected, and every numeric
// constraint of the domain types is re-validated on load.

/// Raised for an unsupported schema_version (a distinct failure class from
/// malformed JSON and constraint violations).
class VersionError : public std::runtime_error {
public:
    explicit VersionError(const std::string& message) : std::runtime_error(message) {}
};

/// Parses and validates a scenario document from text.
/// Throws nlohmann::json::parse_error, VersionError, or ValidationError.
Scenario parse_scenario(const std::string& text);

/// Reads the file and parses it. Throws std::runtime_error on I/O failure.
Scenario load_scenario(const std::filesystem::path& path);

/// Serializes a Scenario back to a schema-version-1 document. Numbers carry
/// 17 significant digits so load(serialize(s)) reproduces s exactly.
std::string serialize_scenario(const Scenario& scenario);

// Report serialization. JSON carries every field under stable key names;
// CSV emits the pinned tabular layouts. All numbers use 17 significant
// digits; lines end with LF.

std::string to_json(const EvaluationReport& report, const Scenario& scenario);
std::string to_json(const SolutionReport& report, const Scenario& scenario);
std::string to_json(const WelfareLossReport& report, const Scenario& scenario);
std::string to_json(const std::vector<FrontierPoint>& points);
std::string to_json(const OracleResult& result, const Scenario& scenario);

/// Header: group,ra,rt,bias_b,health,utility
std::string to_csv(const EvaluationReport& report, const Scenario& scenario);
std::string to_csv(const SolutionReport& report, const Scenario& scenario);
/// Header: group,delta_ra,delta_rt,delta_h,delta_u
std::string to_csv(const WelfareLossReport& report, const Scenario& scenario);
/// Header: disparity_cap,objective,realized_disparity
std::string to_csv(const std::vector<FrontierPoint>& points);
std::string to_csv(const OracleResult& result, const Scenario& scenario);

/// One number rendered with 17 significant digits ("inf"/"-inf" for infinities).
std::string format_number(double value);

} // namespace fairalloc

#endif // FAIRALLOC_SCENARIO_IO_HPP
