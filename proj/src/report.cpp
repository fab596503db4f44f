#include "qpc/report.hpp"

#include <algorithm>

namespace qpc {

nlohmann::json to_json(const CheckResult& r) {
    nlohmann::json j{{"subject", r.subject}, {"check", r.check}, {"status", r.pass ? "pass" : "fail"}, {"tag", r.tag}};
    if (!r.detail.empty()) j["detail"] = r.detail;
    return j;
}

nlohmann::json to_json(const std::vector<CheckResult>& rs) {
    auto arr = nlohmann::json::array();
    for (const auto& r : rs) arr.push_back(to_json(r));
    return arr;
}

bool all_pass(const std::vector<CheckResult>& rs) {
    return std::all_of(rs.begin(), rs.end(), [](const CheckResult& r) { return r.pass; });
}

}  // namespace qpc
