#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpc/frac.hpp"
#include "qpc/symbol.hpp"

namespace qpc {

// Exponent vector with rational entries, sparse and sorted by symbol id.
class Monomial {
public:
    using Entry = std::pair<Symbol, Frac>;

    Monomial() = default;
    static Monomial var(Symbol s, Frac e = 1);

    const std::vector<Entry>& entries() const { return exps_; }
    bool is_one() const { return exps_.empty(); }
    Frac exponent(Symbol s) const;

    Monomial operator*(const Monomial& o) const;
    Monomial operator/(const Monomial& o) const;
    Monomial pow(const Frac& r) const;

    // Componentwise min/max (absent entries count as zero).
    static Monomial min(const Monomial& a, const Monomial& b);
    static Monomial max(const Monomial& a, const Monomial& b);

    bool all_integer() const;
    bool all_nonnegative() const;

    friend bool operator==(const Monomial&, const Monomial&) = default;
    // Lexicographic by symbol id; a group order on exponent vectors.
    static int lex_compare(const Monomial& a, const Monomial& b);

    std::size_t hash() const;

private:
    std::vector<Entry> exps_;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct Term {
    Monomial mono;
    mpq_class coeff;
};

// Finite sum of rational-coefficient terms, kept sorted descending by lex
// order with no zero coefficients and no repeated exponent vectors.
class Poly {
public:
    Poly() = default;
    explicit Poly(const mpq_class& c);
    explicit Poly(Monomial m, mpq_class c = 1);
    static Poly from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }
    const Term& leading() const { return terms_.front(); }
    std::size_t size() const { return terms_.size(); }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly scaled(const mpq_class& c, const Monomial& m = {}) const;
    Poly pow(unsigned k) const;

    // Exact quotient if o divides this in the Laurent ring, else nullopt.
    std::optional<Poly> divide_exact(const Poly& o) const;

    // Componentwise minimum exponent over all terms.
    Monomial content() const;

    friend bool operator==(const Poly& a, const Poly& b);
    std::size_t hash() const;

private:
    void canonicalize();
    std::vector<Term> terms_;
};

}  // namespace qpc
