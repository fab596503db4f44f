#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qpc/frac.hpp"
#include "qpc/poly.hpp"
#include "qpc/symbol.hpp"

namespace qpc {

// A multi-term polynomial normalized to zero content and leading
// coefficient 1. Shared between expressions; never mutated.
struct Factor {
    Poly poly;
    std::size_t hash;
};
using FactorPtr = std::shared_ptr<const Factor>;

int factor_compare(const FactorPtr& a, const FactorPtr& b);

// Exact rational function with rational exponents, stored in factored form
//     coeff * mono * prod_k P_k^{e_k}
// where the P_k are normalized Factors with integer e_k. Fractions are only
// reduced by trial division; equality goes through subtraction.
class RatExpr {
public:
    using FactorPower = std::pair<FactorPtr, long>;

    RatExpr() = default;  // zero
    RatExpr(long c);      // NOLINT: integer constants convert implicitly
    explicit RatExpr(const mpq_class& c);
    static RatExpr var(Symbol s, Frac e = 1);
    static RatExpr var(const std::string& name, Frac e = 1) { return var(Symbol(name), e); }
    static RatExpr monomial(const mpq_class& c, Monomial m);
    static RatExpr from_poly(const Poly& p);

    const mpq_class& coeff() const { return coeff_; }
    const Monomial& mono() const { return mono_; }
    const std::vector<FactorPower>& factors() const { return factors_; }

    bool is_zero() const { return coeff_ == 0; }
    bool is_monomial() const { return factors_.empty(); }
    bool is_constant() const { return factors_.empty() && mono_.is_one(); }
    // No multi-term factor in the denominator.
    bool is_laurent() const;

    RatExpr operator-() const;
    RatExpr operator+(const RatExpr& o) const;
    RatExpr operator-(const RatExpr& o) const;
    RatExpr operator*(const RatExpr& o) const;
    RatExpr operator/(const RatExpr& o) const;
    RatExpr& operator+=(const RatExpr& o) { return *this = *this + o; }
    RatExpr& operator-=(const RatExpr& o) { return *this = *this - o; }
    RatExpr& operator*=(const RatExpr& o) { return *this = *this * o; }
    RatExpr& operator/=(const RatExpr& o) { return *this = *this / o; }

    RatExpr inv() const;
    // Integer powers always work. Fractional powers need every factor
    // exponent times r to be an integer and a rational coefficient root.
    RatExpr pow(const Frac& r) const;

    // Sum with a shared common part pulled out first; the remaining
    // polynomial is trial-divided by the common denominators and by hints.
    static RatExpr sum(const std::vector<RatExpr>& terms, const std::vector<FactorPtr>& hints = {});
    // prod x_i^{r_i} with exponents combined before the integrality check,
    // so (x*y)^{1/2} works when x and y share a squared factor overall.
    static RatExpr pow_product(const std::vector<std::pair<RatExpr, Frac>>& items);

    // Try to cancel positive factors against negative ones by exact division.
    RatExpr cancel() const;

    // Simultaneous substitution of generators.
    RatExpr substitute(const std::map<Symbol, RatExpr>& repl) const;
    RatExpr substitute(Symbol gen, const RatExpr& repl) const { return substitute({{gen, repl}}); }
    RatExpr substitute(const std::string& gen, const RatExpr& repl) const {
        return substitute(Symbol(gen), repl);
    }

    // Exact evaluation. Throws NonEvaluableRoot / DenominatorVanishes /
    // UnboundGenerator.
    mpq_class specialize(const std::map<Symbol, mpq_class>& point) const;

    std::set<Symbol> symbols() const;
    bool depends_on(Symbol s) const;

    // Expanded numerator and denominator; den has leading coefficient 1 in
    // rendering order and zero content.
    std::pair<Poly, Poly> num_den() const;

    std::string str() const;
    static RatExpr parse(const std::string& text);

private:
    void normalize_factors();
    mpq_class coeff_;
    Monomial mono_;
    std::vector<FactorPower> factors_;
};

bool equals(const RatExpr& a, const RatExpr& b);

std::ostream& operator<<(std::ostream& os, const RatExpr& e);

// Canonical text helpers shared with other renderers.
std::string render_poly(const Poly& p);
std::string render_coeff(const mpq_class& c);
// Rendering order: descending lex with generators ordered by natural name.
int render_compare(const Monomial& a, const Monomial& b);

// Exact rational root: c^r, or throws NonEvaluableRoot.
mpq_class rational_power(const mpq_class& c, const Frac& r);

}  // namespace qpc
