#include "qpc/json_io.hpp"

#include "qpc/errors.hpp"

namespace qpc {

nlohmann::json poly_to_json(const Poly& p) {
    auto arr = nlohmann::json::array();
    for (const auto& t : p.terms()) {
        auto exps = nlohmann::json::object();
        for (const auto& [s, e] : t.mono.entries()) exps[s.name()] = e.str();
        arr.push_back({t.coeff.get_str(), exps});
    }
    return arr;
}

Poly poly_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ParseError("polynomial must be a JSON array");
    std::vector<Term> terms;
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2) throw ParseError("term must be [coeff, {gen: exp}]");
        mpq_class c;
        if (c.set_str(item[0].get<std::string>(), 10) != 0) throw ParseError("bad coefficient");
        c.canonicalize();
        Monomial m;
        for (const auto& [name, e] : item[1].items()) m = m * Monomial::var(Symbol(name), Frac::parse(e.get<std::string>()));
        terms.push_back({std::move(m), std::move(c)});
    }
    return Poly::from_terms(std::move(terms));
}

nlohmann::json to_json(const RatExpr& e) {
    auto [num, den] = e.num_den();
    return {{"num", poly_to_json(num)}, {"den", poly_to_json(den)}};
}

RatExpr ratexpr_from_json(const nlohmann::json& j) {
    Poly den = poly_from_json(j.at("den"));
    if (den.is_zero()) throw DivisionByZero("zero denominator in JSON");
    return RatExpr::from_poly(poly_from_json(j.at("num"))) / RatExpr::from_poly(den);
}

}  // namespace qpc
