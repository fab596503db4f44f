#include <gtest/gtest.h>

#include "qpc/cli.hpp"
#include "qpc/errors.hpp"

using namespace qpc;
using json = nlohmann::json;

TEST(Cli, Explain) {
    EXPECT_NE(explain("bilintau").find("tau1bar tau1und"), std::string::npos);
    EXPECT_NE(explain("prop-quantP").find("proposition"), std::string::npos);
    EXPECT_THROW(explain("bogus"), UnknownCheck);
    // every registered check can be explained
    for (const auto& [m, c] : known_checks()) EXPECT_NO_THROW(explain(c)) << m << "/" << c;
}

TEST(Cli, ConfigValidation) {
    auto cfg = [](json suites, int digits = 120) { return json{{"digits", digits}, {"suites", suites}}; };
    EXPECT_THROW(config_from_json(cfg(json::array({{{"module", "xc"}, {"check", "relations"}, {"case", "A9"}}}))),
                 ConfigError);
    EXPECT_THROW(config_from_json(cfg(json::array({{{"module", "xc"}, {"check", "nope"}, {"case", "A6"}}}))),
                 ConfigError);
    EXPECT_THROW(config_from_json(cfg(json::array({{{"module", "nek"}, {"check", "bilinear"}, {"relation", "FT2T2"}}}))),
                 ConfigError);
    EXPECT_THROW(config_from_json(cfg(json::array({{{"module", "nek"}, {"check", "bilinear"}, {"relation", "FT1T3"}}}), 50)),
                 ConfigError);
    EXPECT_THROW(config_from_json(json{{"digits", 120}}), ConfigError);
    EXPECT_THROW(config_from_json(json::array()), ConfigError);
    EXPECT_THROW(named_suite("bogus"), ConfigError);
    auto ok = config_from_json(cfg(json::array({{{"module", "poly"}, {"check", "polygons"}}})));
    EXPECT_EQ(ok.suites.size(), 1u);
}

TEST(Cli, RunStatusesAndDeterminism) {
    json j{{"seed", 42},
           {"suites", json::array({{{"module", "poly"}, {"check", "polygons"}},
                                   {{"module", "xc"}, {"check", "relations"}, {"case", "A6"}, {"skip", true}},
                                   {{"module", "nek"}, {"check", "series"}, {"parameters", {{"order", 3}}}},
                                   {{"module", "nek"}, {"check", "bilinear"}, {"relation", "FT1T3"}}})}};
    SuiteConfig c = config_from_json(j);
    RunResult a = run(c), b = run(c);
    EXPECT_EQ(a.report.dump(), b.report.dump());
    std::string st;
    for (const auto& ch : a.report["checks"]) st += ch["check"].get<std::string>() + "=" + ch["status"].get<std::string>() + (ch.contains("error") ? ch["error"].get<std::string>() : "") + " ";
    EXPECT_EQ(a.exit_code, 0) << st;
    const auto& checks = a.report["checks"];
    EXPECT_EQ(checks[0]["status"], "pass");
    EXPECT_EQ(checks[1]["status"], "skipped");
    // drawn point is recorded and replays
    json pt = checks[3]["data"]["point"];
    ASSERT_EQ(pt.size(), 3u);
    json replay{{"suites", json::array({{{"module", "nek"},
                                         {"check", "bilinear"},
                                         {"relation", "FT1T3"},
                                         {"parameters", {{"point", pt}}}}})}};
    RunResult r = run(config_from_json(replay));
    EXPECT_EQ(r.report["checks"][0]["data"], checks[3]["data"]);
    // another seed draws another point
    c.seed = 43;
    EXPECT_NE(run(c).report["checks"][3]["data"]["point"], pt);
}

TEST(Cli, FailingCheckGivesExitOne) {
    json j{{"suites", json::array({{{"module", "nek"}, {"check", "bilinear"}, {"relation", "FT1T1"},
                                    {"parameters", {{"point", {"3", "2/5", "3/7"}}, {"order", "1"}}}}})}};
    RunResult r = run(config_from_json(j));
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_EQ(r.report["summary"]["fail"], 1);
}
