#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace qpc {

// One line of a verification report.
struct CheckResult {
    std::string subject;  // case label, relation id, ...
    std::string check;
    bool pass = false;
    std::string tag;  // paper | derived | control | corrected | printed
    std::string detail;
};

nlohmann::json to_json(const CheckResult& r);
nlohmann::json to_json(const std::vector<CheckResult>& rs);
bool all_pass(const std::vector<CheckResult>& rs);

}  // namespace qpc
