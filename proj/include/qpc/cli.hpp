#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "qpc/report.hpp"

namespace qpc {

// One requested check. `subject` is a case label, relation id or empty.
struct SuiteEntry {
    std::string module, check, subject;
    nlohmann::json parameters = nlohmann::json::object();
    bool skip = false;
};

struct SuiteConfig {
    std::vector<SuiteEntry> suites;
    std::string output;  // report path, empty for stdout only
    int digits = 120;
    std::uint64_t seed = 1;
    bool timing = false;  // wall times make reruns differ, so opt in
};

// Throws ConfigError on unknown modules, checks, cases, relations, or
// digits below 60 on a numeric check.
SuiteConfig config_from_json(const nlohmann::json& j);
void validate(const SuiteConfig& c);
// classical, quantum, nekrasov, polygons, all
SuiteConfig named_suite(const std::string& name, int digits = 120, std::uint64_t seed = 1);

struct RunResult {
    nlohmann::json report;
    int exit_code = 0;  // 0 all pass, 1 some check failed
};

// Entries run concurrently; results are merged in config order.
RunResult run(const SuiteConfig& config);

// (module, check) pairs accepted in configs
std::vector<std::pair<std::string, std::string>> known_checks();
// Where a check comes from and what it compares. Throws UnknownCheck.
std::string explain(const std::string& check_id);

}  // namespace qpc
