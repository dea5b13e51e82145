#pragma once
// Scenario ingestion and report generation behind the command line tool.
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "eaesc/space_calculus.hpp"

namespace eaesc::cli {

using Json = nlohmann::ordered_json;

struct Flags {
    int verify_window = 50;
    std::string numeric_tolerance = "1/1000000000";
    bool realize = true;  // cross-check EqualNonempty verdicts in the operator model
};

struct Report {
    Json json;
    std::string text;
    bool pass = false;
    int exit_code = 0;  // 0 pass, 1 expectation failed, 2 schema error, 3 computation error
};

// Throws SchemaError with a position (line:col or JSON pointer).
Json parse_text(const std::string& text, const std::string& origin);
space::SpaceScenario parse_space(const Json& j);
Json space_to_json(const space::SpaceScenario& s);

Report run_space(const space::SpaceScenario& s, const Flags& f);
Report run_json(const Json& j, const Flags& f);   // dispatches on "kind"
Report run_file(const std::string& path, const Flags& f);
Report run_builtin(const std::string& name, const Flags& f);

// Error report for a failure before any computation ran.
Report error_report(const std::string& origin, const std::string& kind, const std::string& message, int exit_code);

std::vector<std::string> list_scenarios();
std::optional<Json> builtin_json(const std::string& name);
std::optional<std::string> describe(const std::string& op);
std::vector<std::string> describable_ops();

// Operator-model realization of an atom-level pair at index k: returns
// false when some atom has no model.
struct Realization {
    bool realizable = false;
    bool verified = false;
    std::string x_shape, y_shape;
};
Realization realize_pair(const space::Desc& x, const space::Desc& y, const space::RelationTable& rel, long k,
                         int window, unsigned long long seed);

}  // namespace eaesc::cli
