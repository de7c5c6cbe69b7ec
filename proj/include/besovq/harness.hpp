#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace besovq::harness {

/// One verification suite of the acceptance gate.
struct TraceRow {
    int id = 0;
    std::string name;
    std::string statement;
    std::string suite;
};

/// The acceptance suites, in gate order.
const std::vector<TraceRow>& traceability_rows();

/// Rows joined with results from `results` (the acceptance binary's JSON); rows with no
/// result read "not yet run".
nlohmann::json traceability_report(const std::optional<nlohmann::json>& results);
std::string traceability_markdown(const nlohmann::json& report);

struct Assertion {
    std::string metric;
    std::string op;
    double value = 0.0;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> grid;
    std::optional<double> beta, p, q, gamma1, gamma2, m, m_prime, t_final;
    std::optional<int> iters;
};

/// Plan JSON with flag overrides merged in and defaults filled; throws on unknown scenario
/// or malformed fields.
nlohmann::json resolve_plan(const std::string& scenario, const nlohmann::json& plan, const Overrides& ov);

struct PlanOutcome {
    int status = 0;
    std::map<std::string, double> metrics;
    std::vector<std::string> failures;
    std::vector<std::string> files;
    nlohmann::json manifest;
};

bool evaluate(const Assertion& a, double value);

/// Runs a resolved plan, writes its artifacts and manifest.json under plan["out"].
/// status is 0 iff every assertion holds.
PlanOutcome run_plan(const nlohmann::json& plan);

}  // namespace besovq::harness
