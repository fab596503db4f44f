#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qpc/acluster.hpp"
#include "qpc/cli.hpp"
#include "qpc/errors.hpp"
#include "qpc/nekrasov.hpp"
#include "qpc/polygons.hpp"
#include "qpc/qreduce.hpp"
#include "qpc/quiver.hpp"
#include "qpc/xcluster.hpp"

using namespace qpc;
using json = nlohmann::json;

namespace {

struct Globals {
    bool as_json = false;
    std::uint64_t seed = 1;
    int digits = 120;
    std::string order;
};

mpq_class rational(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw ConfigError("bad rational '" + s + "'");
    q.canonicalize();
    return q;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

// "x,y;x,y;..."
std::vector<LatticePoint> parse_vertices(const std::string& s) {
    std::vector<LatticePoint> pts;
    for (const auto& p : split(s, ';')) {
        auto xy = split(p, ',');
        if (xy.size() != 2) throw ConfigError("vertex '" + p + "' is not x,y");
        pts.push_back({std::stol(xy[0]), std::stol(xy[1])});
    }
    return pts;
}

int run_config(const SuiteConfig& cfg, const Globals& g) {
    RunResult r = run(cfg);
    if (g.as_json) {
        std::cout << r.report.dump(2) << '\n';
        return r.exit_code;
    }
    for (const auto& c : r.report["checks"]) {
        std::cout << c["status"].get<std::string>() << "  " << c["module"].get<std::string>() << "/"
                  << c["check"].get<std::string>() << (c.contains("case") ? " " + c["case"].get<std::string>() : "")
                  << '\n';
        if (c.contains("error")) std::cout << "    error: " << c["error"].get<std::string>() << '\n';
        for (const auto& x : c["results"])
            std::cout << "    " << (x["status"] == "pass" ? "PASS " : "FAIL ") << x["subject"].get<std::string>() << ": "
                      << x["check"].get<std::string>() << " [" << x["tag"].get<std::string>() << "]"
                      << (x.contains("detail") ? "  " + x["detail"].get<std::string>() : "") << '\n';
    }
    const auto& s = r.report["summary"];
    std::cout << "pass " << s["pass"] << ", fail " << s["fail"] << ", skipped " << s["skipped"]
              << (cfg.output.empty() ? "" : " -> " + cfg.output) << '\n';
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-Painleve cluster toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_flag("--json", g.as_json, "machine-readable output");
    app.add_option("--seed", g.seed, "seed for drawn specialization points");
    app.add_option("--digits", g.digits, "working precision in decimal digits");
    app.add_option("--order", g.order, "series order (integer or fraction)");
    std::function<int()> action;

    // quiver
    auto* quiver = app.add_subcommand("quiver", "built-in quivers");
    quiver->require_subcommand(1);
    std::string qlabel;
    auto* qshow = quiver->add_subcommand("show", "print a quiver as JSON");
    qshow->add_option("label", qlabel)->required();
    qshow->callback([&] { action = [&] { std::cout << to_json(catalog(qlabel)).dump(2) << '\n'; return 0; }; });
    quiver->add_subcommand("list", "list labels")->callback([&] {
        action = [&] {
            for (const auto& l : catalog_labels()) std::cout << l << '\n';
            return 0;
        };
    });

    // xc
    auto* xc = app.add_subcommand("xc", "X-cluster dynamics");
    xc->require_subcommand(1);
    std::string xcase, xword, xcheck;
    int steps = 1;
    auto* xev = xc->add_subcommand("evolve", "apply a word to the initial seed");
    xev->add_option("case", xcase)->required();
    xev->add_option("word", xword)->required();
    xev->add_option("--steps", steps);
    xev->callback([&] {
        action = [&] {
            const PainleveCase& c = painleve_case(xcase);
            GroupWord w = c.word(xword);
            XSeed s = XSeed::initial(c.quiver);
            json orbit = json::array();
            for (int k = 1; k <= steps; ++k) {
                s = apply_word(s, w);
                json vars = json::array();
                for (const auto& v : s.vars) vars.push_back(v.str());
                orbit.push_back({{"step", k}, {"y", vars}});
            }
            json out{{"case", xcase}, {"word", xword}, {"orbit", orbit}};
            if (g.as_json) {
                std::cout << out.dump(2) << '\n';
            } else {
                for (const auto& st : orbit) {
                    std::cout << "step " << st["step"] << '\n';
                    int i = 1;
                    for (const auto& v : st["y"]) std::cout << "  y" << i++ << " = " << v.get<std::string>() << '\n';
                }
            }
            return 0;
        };
    });
    auto* xver = xc->add_subcommand("verify", "relations|forms|coords|alternates|hamiltonian|equation|autonomous");
    xver->add_option("check", xcheck)->required();
    xver->add_option("case", xcase)->required();
    xver->callback([&] {
        action = [&] {
            SuiteConfig cfg;
            cfg.digits = g.digits;
            cfg.seed = g.seed;
            cfg.suites.push_back({"xc", xcheck, xcase});
            return run_config(cfg, g);
        };
    });

    // tau
    auto* tau = app.add_subcommand("tau", "A-cluster tau variables");
    tau->require_subcommand(1);
    std::string tcase;
    int rows = 6;
    auto* tev = tau->add_subcommand("evolve", "orbit of the A7' tau seed under T");
    tev->add_option("case", tcase)->required()->check(CLI::IsMember({"A7p"}));
    tev->add_option("--rows", rows)->check(CLI::IsMember({6, 8}));
    tev->add_option("--steps", steps);
    tev->callback([&] {
        action = [&] {
            TauSeed s = a7p_tau_seed(rows);
            GroupWord T = painleve_case("A7p").generators.at("T");
            json orbit = json::array();
            for (int k = 1; k <= steps; ++k) {
                s = apply_word(s, T);
                json j = to_json(s);
                j["step"] = k;
                orbit.push_back(j);
            }
            std::cout << json{{"case", tcase}, {"rows", rows}, {"orbit", orbit}}.dump(2) << '\n';
            return 0;
        };
    });
    std::string tcheck;
    auto* tver = tau->add_subcommand("verify", "bilinear");
    tver->add_option("check", tcheck)->required()->check(CLI::IsMember({"bilinear"}));
    tver->callback([&] {
        action = [&] {
            SuiteConfig cfg;
            cfg.suites.push_back({"tau", "bilintau", ""});
            return run_config(cfg, g);
        };
    });

    // qt
    auto* qt = app.add_subcommand("qt", "quantum torus layer");
    qt->require_subcommand(1);
    std::string qcheck, qrel;
    auto* qver = qt->add_subcommand("verify", "toda|prop|compat|reduce|quant-y|quant-tau");
    qver->add_option("check", qcheck)->required();
    qver->add_option("relation", qrel, "T1T1|T1T2|T1T3|T1T4 for reduce");
    qver->callback([&] {
        action = [&]() -> int {
            if (qcheck == "reduce" && !qrel.empty()) {
                json out = json::array();
                for (const auto& id : quantum_tau_reduce(qrel)) out.push_back(to_json(id));
                std::cout << out.dump(2) << '\n';
                return 0;
            }
            SuiteConfig cfg;
            cfg.suites.push_back({"qt", qcheck == "prop" ? "prop-quantP" : qcheck, ""});
            return run_config(cfg, g);
        };
    });

    // nek
    auto* nek = app.add_subcommand("nek", "Nekrasov series and bilinear checks");
    nek->require_subcommand(1);
    std::string u = "3", q1 = "2/5", q2 = "3/7", point, nrel;
    auto* nser = nek->add_subcommand("series", "exact instanton series");
    nser->add_option("--u", u);
    nser->add_option("--q1", q1);
    nser->add_option("--q2", q2);
    nser->callback([&] {
        action = [&] {
            int order = g.order.empty() ? 5 : std::stoi(g.order);
            NekSeries s = inst_series(rational(u), rational(q1), rational(q2), order);
            std::cout << (g.as_json ? to_json(s).dump(2) + "\n" : to_csv(s));
            return 0;
        };
    });
    auto* nver = nek->add_subcommand("verify", "FT1T1|FT1T2|FT1T3|FT1T4-plus|FT1T4-minus|classical-tau");
    nver->add_option("relation", nrel)->required();
    nver->add_option("--point", point, "u,q1,q2 (u,q,s for classical-tau); drawn from --seed if absent");
    nver->callback([&] {
        action = [&] {
            SuiteEntry e{"nek", nrel == "classical-tau" ? "classical-tau" : "bilinear", nrel == "classical-tau" ? "" : nrel};
            if (!point.empty()) e.parameters["point"] = split(point, ',');
            if (!g.order.empty()) e.parameters["order"] = g.order;
            SuiteConfig cfg;
            cfg.digits = g.digits;
            cfg.seed = g.seed;
            cfg.suites.push_back(e);
            return run_config(cfg, g);
        };
    });

    // poly
    auto* poly = app.add_subcommand("poly", "reflexive polygons");
    poly->require_subcommand(1);
    std::string vertices, plabel;
    auto* pcl = poly->add_subcommand("classify", "label of a polygon up to SA(2,Z)");
    pcl->add_option("--vertices", vertices, "x,y;x,y;...")->required();
    pcl->callback([&] {
        action = [&] {
            LatticePolygon p(parse_vertices(vertices));
            auto c = classify(p);
            json out = to_json(p);
            out["label"] = c ? json(*c) : json(nullptr);
            if (g.as_json)
                std::cout << out.dump(2) << '\n';
            else
                std::cout << (c ? *c : "not reflexive") << '\n';
            return 0;
        };
    });
    auto* pinv = poly->add_subcommand("invariants", "2S, B, g of a label or of --vertices");
    pinv->add_option("label", plabel);
    pinv->add_option("--vertices", vertices);
    pinv->callback([&] {
        action = [&] {
            if (plabel.empty() && vertices.empty()) {
                std::cout << polygon_catalog_json().dump(2) << '\n';
                return 0;
            }
            LatticePolygon p = plabel.empty() ? LatticePolygon(parse_vertices(vertices)) : polygon(plabel);
            std::cout << to_json(p).dump(g.as_json ? 2 : -1) << '\n';
            return 0;
        };
    });
    auto* pq = poly->add_subcommand("quiver", "quiver of a catalog polygon");
    pq->add_option("label", plabel)->required();
    pq->callback([&] { action = [&] { std::cout << quiver_for_polygon(plabel) << '\n'; return 0; }; });
    poly->add_subcommand("catalog", "all 16 polygons as JSON")->callback([&] {
        action = [&] { std::cout << polygon_catalog_json().dump(2) << '\n'; return 0; };
    });

    // verify
    auto* ver = app.add_subcommand("verify", "run a named suite or a JSON config");
    std::string suite, config, out;
    bool timing = false;
    ver->add_option("--suite", suite, "classical|quantum|nekrasov|polygons|all");
    ver->add_option("--config", config, "JSON suite config");
    ver->add_option("--out", out, "report path");
    ver->add_flag("--timing", timing, "record wall times in the report");
    ver->callback([&] {
        action = [&] {
            SuiteConfig cfg;
            if (!config.empty()) {
                std::ifstream f(config);
                if (!f) throw ConfigError("cannot read " + config);
                json j;
                try {
                    j = json::parse(f);
                } catch (const json::exception& e) {
                    throw ConfigError(e.what());
                }
                cfg = config_from_json(j);
            } else if (!suite.empty()) {
                cfg = named_suite(suite, g.digits, g.seed);
            } else {
                throw ConfigError("give --suite or --config");
            }
            if (!out.empty()) cfg.output = out;
            if (timing) cfg.timing = true;
            return run_config(cfg, g);
        };
    });

    // explain
    auto* ex = app.add_subcommand("explain", "where a check comes from");
    std::string check_id;
    ex->add_option("check", check_id)->required();
    ex->callback([&] { action = [&] { std::cout << explain(check_id) << '\n'; return 0; }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    try {
        return action();
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
