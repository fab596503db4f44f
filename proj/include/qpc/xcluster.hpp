#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpc/quiver.hpp"
#include "qpc/ratexpr.hpp"
#include "qpc/report.hpp"

namespace qpc {

struct XSeed {
    Quiver quiver;
    std::vector<RatExpr> vars;

    // vars[i] = y_{i+1}
    static XSeed initial(const Quiver& q);
};

// y1..yn
Symbol y_symbol(int i);

XSeed mutate_seed(const XSeed& s, int j);
XSeed apply_word(const XSeed& s, const GroupWord& w);
bool same_seed(const XSeed& a, const XSeed& b);

// Evaluates e with every generator in `values` replaced; fractional powers
// are resolved term by term through RatExpr::pow_product.
RatExpr evaluate_on(const RatExpr& e, const std::map<Symbol, RatExpr>& values);

// values map y_{i+1} -> vars[i]
std::map<Symbol, RatExpr> seed_values(const std::vector<RatExpr>& vars);

// y_n <- (y_1 ... y_{n-1})^{-1}
std::map<Symbol, RatExpr> q_one_constraint(int n);

struct NamedExpr {
    std::string name;
    RatExpr expr;
};

struct PainleveCase {
    struct Relation {
        std::string lhs, rhs, tag;
    };
    struct CoxeterClaim {
        std::string name, type;
        std::vector<std::string> generators;
        std::string tag;  // "printed": expected not to hold
    };
    struct CoordImage {
        std::string word;
        std::map<std::string, RatExpr> images;
        std::string tag;
    };
    struct Autonomous {
        std::string word;
        std::vector<NamedExpr> defs;
        std::map<std::string, RatExpr> images;
    };
    struct Hamiltonian {
        std::vector<NamedExpr> defs;
        RatExpr H;
        std::vector<std::string> flows;
        std::optional<RatExpr> corrected;
    };
    struct ScalarEquation {
        std::string word;
        RatExpr residual;  // in coords; <name>bar / <name>und are images under word / its inverse
    };

    std::string label;
    Quiver quiver;
    std::vector<std::pair<std::string, std::string>> generator_text;
    std::map<std::string, GroupWord> generators;
    std::vector<Relation> relations;
    std::vector<CoxeterClaim> coxeter;
    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> commuting;
    std::vector<std::pair<std::string, std::vector<RatExpr>>> closed_forms;
    std::vector<NamedExpr> coords;
    std::vector<NamedExpr> alternates;
    std::vector<CoordImage> coord_images;
    std::optional<ScalarEquation> scalar_equation;
    std::optional<Autonomous> autonomous;
    Hamiltonian hamiltonian;

    int size() const { return quiver.size(); }
    GroupWord word(const std::string& text) const;
    // Same case with one generator redefined; later generators that refer
    // to it are rebuilt.
    PainleveCase with_generator(const std::string& name, const std::string& text) const;
};

PainleveCase painleve_case_from_json(const std::string& label, const nlohmann::json& j);
std::vector<std::string> painleve_labels();
const PainleveCase& painleve_case(const std::string& label);

bool verify_relation(const PainleveCase& c, const GroupWord& lhs, const GroupWord& rhs);
// Exact action on numbers: y values at a rational point.
std::vector<mpq_class> apply_word_numeric(const Quiver& q, std::vector<mpq_class> v, const GroupWord& w);
// Smallest m in 1..max_order with w^m = e on the symbolic seed, or 0.
int word_order(const PainleveCase& c, const GroupWord& w, int max_order = 6);

// Coxeter matrix (0 = infinite) of a named affine Dynkin type.
std::vector<std::vector<int>> coxeter_matrix(const std::string& type);
bool coxeter_isomorphic(const std::vector<std::vector<int>>& a, const std::vector<std::vector<int>>& b);

// Printed relations, stabilizer property, braid relations of the claimed
// Weyl groups and commutation between them.
std::vector<CheckResult> verify_relations(const PainleveCase& c);
std::vector<CheckResult> verify_closed_forms(const PainleveCase& c);

// Images of every coordinate under w, written in a basis chosen from the
// coordinates (listed order, first independent ones).
std::map<std::string, RatExpr> casimir_track(const PainleveCase& c, const GroupWord& w);
std::vector<CheckResult> verify_coord_images(const PainleveCase& c);
std::vector<CheckResult> verify_alternates(const PainleveCase& c);

// H o g - H, optionally after y_n <- (y_1...y_{n-1})^{-1}.
RatExpr hamiltonian_residual(const PainleveCase& c, const GroupWord& g, bool impose_q_one = true);
RatExpr hamiltonian_residual(const PainleveCase& c, const RatExpr& H, const GroupWord& g, bool impose_q_one = true);
std::vector<CheckResult> verify_hamiltonian(const PainleveCase& c);

RatExpr scalar_equation_residual(const PainleveCase& c);
std::vector<CheckResult> verify_scalar_equation(const PainleveCase& c);
std::vector<CheckResult> verify_autonomous(const PainleveCase& c);

}  // namespace qpc
