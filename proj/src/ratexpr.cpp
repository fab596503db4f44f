#include "qpc/ratexpr.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>

#include "qpc/errors.hpp"
#include "qpc/expr_parse.hpp"

namespace qpc {

namespace {

int poly_compare(const Poly& a, const Poly& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Term& x = a.terms()[i];
        const Term& y = b.terms()[i];
        if (int c = Monomial::lex_compare(x.mono, y.mono)) return c;
        if (x.coeff != y.coeff) return x.coeff < y.coeff ? -1 : 1;
    }
    return 0;
}

// p = c * m * f with f normalized, or f empty when p is a single term.
struct Split {
    mpq_class c;
    Monomial m;
    std::optional<Poly> f;
};

Split split_poly(const Poly& p) {
    const Term& lead = p.leading();
    if (p.size() == 1) return {lead.coeff, lead.mono, std::nullopt};
    Monomial m = p.content();
    mpq_class c = lead.coeff;
    return {c, m, p.scaled(1 / c, Monomial{} / m)};
}

FactorPtr make_factor(Poly f) {
    std::size_t h = f.hash();
    return std::make_shared<const Factor>(Factor{std::move(f), h});
}

using FactorPower = RatExpr::FactorPower;

template <class Op>
std::vector<FactorPower> merge_factors(const std::vector<FactorPower>& a, const std::vector<FactorPower>& b,
                                       Op op) {
    std::vector<FactorPower> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        int c;
        if (i == a.size()) c = 1;
        else if (j == b.size()) c = -1;
        else c = factor_compare(a[i].first, b[j].first);
        long v;
        const FactorPtr* f;
        if (c < 0) {
            f = &a[i].first;
            v = op(a[i++].second, 0L);
        } else if (c > 0) {
            f = &b[j].first;
            v = op(0L, b[j++].second);
        } else {
            f = &a[i].first;
            v = op(a[i++].second, b[j++].second);
        }
        if (v != 0) out.emplace_back(*f, v);
    }
    return out;
}

mpq_class int_power(const mpq_class& c, long n) {
    if (n == 0) return 1;
    if (c == 0) {
        if (n < 0) throw DivisionByZero("0 to a negative power");
        return 0;
    }
    unsigned long k = static_cast<unsigned long>(n < 0 ? -n : n);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), c.get_num_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), c.get_den_mpz_t(), k);
    mpq_class r(num, den);
    r.canonicalize();
    return n < 0 ? mpq_class(1 / r) : r;
}

bool exact_root(const mpz_class& v, unsigned long k, mpz_class& out) {
    return mpz_root(out.get_mpz_t(), v.get_mpz_t(), k) != 0;
}

struct PowerCache {
    std::unordered_map<const Factor*, std::vector<Poly>> table;
    const Poly& get(const FactorPtr& f, long k) {
        auto& pows = table[f.get()];
        if (pows.empty()) pows.push_back(Poly(mpq_class(1)));
        while (static_cast<long>(pows.size()) <= k) pows.push_back(pows.back() * f->poly);
        return pows[static_cast<std::size_t>(k)];
    }
};

// Key for ordering generators by name when rendering.
std::vector<std::pair<const std::string*, Frac>> render_key(const Monomial& m) {
    std::vector<std::pair<const std::string*, Frac>> k;
    k.reserve(m.entries().size());
    for (const auto& [s, e] : m.entries()) k.emplace_back(&s.name(), e);
    std::sort(k.begin(), k.end(), [](const auto& x, const auto& y) { return natural_less(*x.first, *y.first); });
    return k;
}

int render_key_compare(const std::vector<std::pair<const std::string*, Frac>>& a,
                       const std::vector<std::pair<const std::string*, Frac>>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        int c;
        if (i == a.size()) c = 1;
        else if (j == b.size()) c = -1;
        else if (natural_less(*a[i].first, *b[j].first)) c = -1;
        else if (natural_less(*b[j].first, *a[i].first)) c = 1;
        else c = 0;
        if (c < 0) return a[i].second.sign();
        if (c > 0) return -b[j].second.sign();
        if (a[i].second != b[j].second) return a[i].second < b[j].second ? -1 : 1;
        ++i;
        ++j;
    }
    return 0;
}

std::string render_mono(const Monomial& m) {
    std::string out;
    for (const auto& [name, e] : render_key(m)) {
        if (!out.empty()) out += '*';
        out += *name;
        if (e != Frac(1)) out += "^" + e.str();
    }
    return out;
}

std::string render_term(const mpq_class& c, const Monomial& m) {
    if (m.is_one()) return render_coeff(c);
    if (c == 1) return render_mono(m);
    if (c == -1) return "-" + render_mono(m);
    return render_coeff(c) + "*" + render_mono(m);
}

}  // namespace

int factor_compare(const FactorPtr& a, const FactorPtr& b) {
    if (a.get() == b.get()) return 0;
    if (a->hash != b->hash) return a->hash < b->hash ? -1 : 1;
    return poly_compare(a->poly, b->poly);
}

RatExpr::RatExpr(long c) : coeff_(c) {}

RatExpr::RatExpr(const mpq_class& c) : coeff_(c) {}

RatExpr RatExpr::var(Symbol s, Frac e) { return monomial(1, Monomial::var(s, e)); }

RatExpr RatExpr::monomial(const mpq_class& c, Monomial m) {
    RatExpr r;
    r.coeff_ = c;
    if (c != 0) r.mono_ = std::move(m);
    return r;
}

RatExpr RatExpr::from_poly(const Poly& p) {
    RatExpr r;
    if (p.is_zero()) return r;
    Split s = split_poly(p);
    r.coeff_ = s.c;
    r.mono_ = std::move(s.m);
    if (s.f) r.factors_.emplace_back(make_factor(std::move(*s.f)), 1);
    return r;
}

void RatExpr::normalize_factors() {
    std::sort(factors_.begin(), factors_.end(),
              [](const FactorPower& a, const FactorPower& b) { return factor_compare(a.first, b.first) < 0; });
    std::vector<FactorPower> out;
    out.reserve(factors_.size());
    for (auto& fp : factors_) {
        if (!out.empty() && factor_compare(out.back().first, fp.first) == 0) {
            out.back().second += fp.second;
        } else {
            if (!out.empty() && out.back().second == 0) out.pop_back();
            out.push_back(std::move(fp));
        }
    }
    if (!out.empty() && out.back().second == 0) out.pop_back();
    factors_ = std::move(out);
}

bool RatExpr::is_laurent() const {
    return std::all_of(factors_.begin(), factors_.end(), [](const FactorPower& f) { return f.second > 0; });
}

RatExpr RatExpr::operator-() const {
    RatExpr r = *this;
    r.coeff_ = -r.coeff_;
    return r;
}

RatExpr RatExpr::operator+(const RatExpr& o) const { return sum({*this, o}); }

RatExpr RatExpr::operator-(const RatExpr& o) const { return sum({*this, -o}); }

RatExpr RatExpr::operator*(const RatExpr& o) const {
    if (is_zero() || o.is_zero()) return {};
    RatExpr r;
    r.coeff_ = coeff_ * o.coeff_;
    r.mono_ = mono_ * o.mono_;
    r.factors_ = merge_factors(factors_, o.factors_, [](long x, long y) { return x + y; });
    return r;
}

RatExpr RatExpr::inv() const {
    if (is_zero()) throw DivisionByZero("inverse of zero");
    RatExpr r;
    r.coeff_ = 1 / coeff_;
    r.mono_ = Monomial{} / mono_;
    r.factors_ = factors_;
    for (auto& f : r.factors_) f.second = -f.second;
    return r;
}

RatExpr RatExpr::operator/(const RatExpr& o) const {
    if (o.is_zero()) throw DivisionByZero("division by zero expression");
    return *this * o.inv();
}

mpq_class rational_power(const mpq_class& c, const Frac& r) {
    if (r.is_integer()) return int_power(c, r.num());
    if (c == 0) {
        if (r.sign() < 0) throw DivisionByZero("0 to a negative power");
        return 0;
    }
    auto k = static_cast<unsigned long>(r.den());
    bool negative = c < 0;
    if (negative && k % 2 == 0)
        throw NonEvaluableRoot("even root of negative " + c.get_str());
    mpz_class num = abs(c.get_num()), den = c.get_den(), rn, rd;
    if (!exact_root(num, k, rn) || !exact_root(den, k, rd))
        throw NonEvaluableRoot(c.get_str() + "^" + r.str() + " is not rational");
    mpq_class root(negative ? mpz_class(-rn) : rn, rd);
    root.canonicalize();
    return int_power(root, r.num());
}

RatExpr RatExpr::pow(const Frac& r) const {
    if (is_zero()) {
        if (r.sign() < 0) throw DivisionByZero("0 to a negative power");
        return r.is_zero() ? RatExpr(1) : RatExpr();
    }
    RatExpr out;
    for (const auto& [f, e] : factors_) {
        Frac fe = Frac(e) * r;
        if (!fe.is_integer())
            throw NonMonomialFractionalPower("(" + render_poly(f->poly) + ")^" + Frac(e).str() + " to the power " +
                                             r.str());
        if (fe.num() != 0) out.factors_.emplace_back(f, fe.num());
    }
    out.coeff_ = rational_power(coeff_, r);
    out.mono_ = mono_.pow(r);
    return out;
}

RatExpr RatExpr::pow_product(const std::vector<std::pair<RatExpr, Frac>>& items) {
    RatExpr out(1);
    std::vector<std::pair<FactorPtr, Frac>> acc;
    for (const auto& [x, r] : items) {
        if (r.is_zero()) continue;
        if (x.is_zero()) {
            if (r.sign() < 0) throw DivisionByZero("0 to a negative power");
            return {};
        }
        out.coeff_ *= rational_power(x.coeff_, r);
        out.mono_ = out.mono_ * x.mono_.pow(r);
        for (const auto& [f, e] : x.factors_) acc.emplace_back(f, Frac(e) * r);
    }
    std::sort(acc.begin(), acc.end(),
              [](const auto& a, const auto& b) { return factor_compare(a.first, b.first) < 0; });
    for (std::size_t i = 0; i < acc.size();) {
        Frac e = acc[i].second;
        std::size_t j = i + 1;
        while (j < acc.size() && factor_compare(acc[i].first, acc[j].first) == 0) e += acc[j++].second;
        if (!e.is_integer())
            throw NonMonomialFractionalPower("(" + render_poly(acc[i].first->poly) + ")^" + e.str());
        if (!e.is_zero()) out.factors_.emplace_back(acc[i].first, e.num());
        i = j;
    }
    return out;
}

RatExpr RatExpr::sum(const std::vector<RatExpr>& terms, const std::vector<FactorPtr>& hints) {
    std::vector<const RatExpr*> live;
    live.reserve(terms.size());
    for (const auto& t : terms)
        if (!t.is_zero()) live.push_back(&t);
    if (live.empty()) return {};
    if (live.size() == 1) return *live.front();

    // Common part g: least exponent of every monomial generator and of every
    // factor, absent entries counting as zero.
    Monomial gm = live.front()->mono_;
    std::vector<FactorPower> gf = live.front()->factors_;
    for (std::size_t i = 1; i < live.size(); ++i) {
        gm = Monomial::min(gm, live[i]->mono_);
        gf = merge_factors(gf, live[i]->factors_, [](long x, long y) { return std::min(x, y); });
    }

    PowerCache cache;
    Poly total;
    for (const RatExpr* t : live) {
        Poly acc(t->mono_ / gm, t->coeff_);
        auto rest = merge_factors(t->factors_, gf, [](long x, long y) { return x - y; });
        for (const auto& [f, e] : rest) acc = acc * cache.get(f, e);
        total = total + acc;
    }
    if (total.is_zero()) return {};

    Split s = split_poly(total);
    RatExpr out;
    out.coeff_ = s.c;
    out.mono_ = gm * s.m;
    out.factors_ = std::move(gf);
    if (s.f) {
        Poly f = std::move(*s.f);
        for (auto& [d, e] : out.factors_) {
            while (e < 0 && f.size() > 1) {
                auto q = f.divide_exact(d->poly);
                if (!q) break;
                f = std::move(*q);
                ++e;
            }
        }
        std::vector<FactorPower> extra;
        for (const auto& h : hints) {
            while (f.size() > 1) {
                auto q = f.divide_exact(h->poly);
                if (!q) break;
                f = std::move(*q);
                extra.emplace_back(h, 1);
            }
        }
        if (f.size() > 1) extra.emplace_back(make_factor(std::move(f)), 1);
        out.factors_.insert(out.factors_.end(), extra.begin(), extra.end());
        out.normalize_factors();
    }
    return out;
}

RatExpr RatExpr::cancel() const {
    RatExpr r = *this;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < r.factors_.size() && !changed; ++i) {
            if (r.factors_[i].second <= 0) continue;
            for (std::size_t j = 0; j < r.factors_.size() && !changed; ++j) {
                if (r.factors_[j].second >= 0) continue;
                const Poly& num = r.factors_[i].first->poly;
                const Poly& den = r.factors_[j].first->poly;
                // num = den * q  or  den = num * q
                bool forward = true;
                auto q = num.divide_exact(den);
                if (!q) {
                    forward = false;
                    q = den.divide_exact(num);
                }
                if (!q) continue;
                RatExpr quotient = from_poly(*q);
                r.factors_[i].second -= 1;
                r.factors_[j].second += 1;
                r = r * (forward ? quotient : quotient.inv());
                r.normalize_factors();
                changed = true;
            }
        }
    }
    return r;
}

RatExpr RatExpr::substitute(const std::map<Symbol, RatExpr>& repl) const {
    if (is_zero()) return {};
    std::map<std::pair<Symbol, Frac>, RatExpr> cache;
    auto power_of = [&](Symbol s, const Frac& e) -> const RatExpr& {
        auto key = std::make_pair(s, e);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        auto r = repl.find(s);
        RatExpr v;
        if (r == repl.end()) {
            v = var(s, e);
        } else {
            if (!e.is_integer() && !r->second.is_monomial())
                throw FractionalPowerOfNonMonomial(s.name() + "^" + e.str() + " <- " + r->second.str());
            v = r->second.pow(e);
        }
        return cache.emplace(key, std::move(v)).first->second;
    };
    auto touches = [&](const Monomial& m) {
        return std::any_of(m.entries().begin(), m.entries().end(),
                           [&](const Monomial::Entry& en) { return repl.count(en.first) != 0; });
    };

    RatExpr out(coeff_);
    for (const auto& [s, e] : mono_.entries()) out = out * power_of(s, e);
    for (const auto& [f, e] : factors_) {
        bool hit = std::any_of(f->poly.terms().begin(), f->poly.terms().end(),
                               [&](const Term& t) { return touches(t.mono); });
        if (!hit) {
            RatExpr kept(1);
            kept.factors_.emplace_back(f, e);
            out = out * kept;
            continue;
        }
        std::vector<RatExpr> parts;
        parts.reserve(f->poly.size());
        for (const auto& t : f->poly.terms()) {
            RatExpr term(t.coeff);
            for (const auto& [s, te] : t.mono.entries()) term = term * power_of(s, te);
            parts.push_back(std::move(term));
        }
        RatExpr value = sum(parts);
        if (value.is_zero() && e < 0) throw DivisionByZero("substitution makes a denominator vanish");
        out = out * value.pow(Frac(e));
    }
    return out;
}

mpq_class RatExpr::specialize(const std::map<Symbol, mpq_class>& point) const {
    if (is_zero()) return 0;
    auto value_of = [&](Symbol s) -> const mpq_class& {
        auto it = point.find(s);
        if (it == point.end()) throw UnboundGenerator(s.name());
        return it->second;
    };
    auto eval_mono = [&](const Monomial& m) {
        mpq_class v = 1;
        for (const auto& [s, e] : m.entries()) {
            const mpq_class& x = value_of(s);
            if (x == 0 && e.sign() < 0) throw DenominatorVanishes(s.name() + " = 0");
            v *= rational_power(x, e);
        }
        return v;
    };
    mpq_class v = coeff_ * eval_mono(mono_);
    for (const auto& [f, e] : factors_) {
        mpq_class fv = 0;
        for (const auto& t : f->poly.terms()) fv += t.coeff * eval_mono(t.mono);
        if (fv == 0 && e < 0) throw DenominatorVanishes("(" + render_poly(f->poly) + ") = 0");
        v *= int_power(fv, e);
    }
    return v;
}

std::set<Symbol> RatExpr::symbols() const {
    std::set<Symbol> out;
    for (const auto& en : mono_.entries()) out.insert(en.first);
    for (const auto& [f, e] : factors_)
        for (const auto& t : f->poly.terms())
            for (const auto& en : t.mono.entries()) out.insert(en.first);
    return out;
}

bool RatExpr::depends_on(Symbol s) const { return symbols().count(s) != 0; }

std::pair<Poly, Poly> RatExpr::num_den() const {
    Poly num(mono_, coeff_);
    Poly den(mpq_class(1));
    for (const auto& [f, e] : factors_) {
        if (e > 0) num = num * f->poly.pow(static_cast<unsigned>(e));
        else den = den * f->poly.pow(static_cast<unsigned>(-e));
    }
    if (den.size() > 1) {
        const Term* lead = &den.terms().front();
        auto lead_key = render_key(lead->mono);
        for (const auto& t : den.terms()) {
            auto k = render_key(t.mono);
            if (render_key_compare(k, lead_key) > 0) {
                lead = &t;
                lead_key = std::move(k);
            }
        }
        if (lead->coeff != 1) {
            mpq_class c = 1 / lead->coeff;
            num = num.scaled(c);
            den = den.scaled(c);
        }
    }
    return {std::move(num), std::move(den)};
}

int render_compare(const Monomial& a, const Monomial& b) { return render_key_compare(render_key(a), render_key(b)); }

std::string render_coeff(const mpq_class& c) { return c.get_str(); }

std::string render_poly(const Poly& p) {
    if (p.is_zero()) return "0";
    std::vector<std::pair<std::vector<std::pair<const std::string*, Frac>>, const Term*>> keyed;
    keyed.reserve(p.size());
    for (const auto& t : p.terms()) keyed.emplace_back(render_key(t.mono), &t);
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& x, const auto& y) { return render_key_compare(x.first, y.first) > 0; });
    std::string out;
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        const Term& t = *keyed[i].second;
        if (i == 0) {
            out += render_term(t.coeff, t.mono);
        } else if (t.coeff < 0) {
            out += " - " + render_term(-t.coeff, t.mono);
        } else {
            out += " + " + render_term(t.coeff, t.mono);
        }
    }
    return out;
}

std::string RatExpr::str() const {
    if (is_zero()) return "0";
    auto [num, den] = num_den();
    std::string n = render_poly(num);
    if (den.size() == 1 && den.leading().mono.is_one() && den.leading().coeff == 1) return n;
    if (num.size() > 1) n = "(" + n + ")";
    return n + "/(" + render_poly(den) + ")";
}

namespace {

struct RatOps {
    RatExpr number(const mpq_class& v) const { return RatExpr(v); }
    RatExpr symbol(const std::string& n) const { return RatExpr::var(n); }
    RatExpr add(const std::vector<RatExpr>& xs) const { return RatExpr::sum(xs); }
    RatExpr mul(const RatExpr& a, const RatExpr& b) const { return a * b; }
    RatExpr div(const RatExpr& a, const RatExpr& b) const { return a / b; }
    RatExpr neg(const RatExpr& a) const { return -a; }
    RatExpr pow(const RatExpr& a, const Frac& e) const { return a.pow(e); }
};

}  // namespace

RatExpr RatExpr::parse(const std::string& text) { return eval_ast<RatExpr>(parse_ast(text), RatOps{}); }

bool equals(const RatExpr& a, const RatExpr& b) { return (a - b).is_zero(); }

std::ostream& operator<<(std::ostream& os, const RatExpr& e) { return os << e.str(); }

}  // namespace qpc
