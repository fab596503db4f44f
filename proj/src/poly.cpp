#include "qpc/poly.hpp"

#include <algorithm>
#include <unordered_map>

namespace qpc {

Monomial Monomial::var(Symbol s, Frac e) {
    Monomial m;
    if (!e.is_zero()) m.exps_.emplace_back(s, e);
    return m;
}

Frac Monomial::exponent(Symbol s) const {
    auto it = std::lower_bound(exps_.begin(), exps_.end(), s,
                               [](const Entry& e, Symbol k) { return e.first < k; });
    return (it != exps_.end() && it->first == s) ? it->second : Frac(0);
}

namespace {

template <class Op>
void merge(const std::vector<Monomial::Entry>& a, const std::vector<Monomial::Entry>& b,
               Op op, std::vector<Monomial::Entry>& out) {
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        Frac v;
        Symbol s;
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            s = a[i].first;
            v = op(a[i].second, Frac(0));
            ++i;
        } else if (i == a.size() || b[j].first < a[i].first) {
            s = b[j].first;
            v = op(Frac(0), b[j].second);
            ++j;
        } else {
            s = a[i].first;
            v = op(a[i].second, b[j].second);
            ++i;
            ++j;
        }
        if (!v.is_zero()) out.emplace_back(s, v);
    }
}

}  // namespace

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    r.exps_.reserve(exps_.size() + o.exps_.size());
    merge(exps_, o.exps_, [](const Frac& x, const Frac& y) { return x + y; }, r.exps_);
    return r;
}

Monomial Monomial::operator/(const Monomial& o) const {
    Monomial r;
    r.exps_.reserve(exps_.size() + o.exps_.size());
    merge(exps_, o.exps_, [](const Frac& x, const Frac& y) { return x - y; }, r.exps_);
    return r;
}

Monomial Monomial::pow(const Frac& e) const {
    Monomial r;
    if (e.is_zero()) return r;
    r.exps_.reserve(exps_.size());
    for (const auto& [s, v] : exps_) r.exps_.emplace_back(s, v * e);
    return r;
}

Monomial Monomial::min(const Monomial& a, const Monomial& b) {
    Monomial r;
    merge(a.exps_, b.exps_, [](const Frac& x, const Frac& y) { return x < y ? x : y; }, r.exps_);
    return r;
}

Monomial Monomial::max(const Monomial& a, const Monomial& b) {
    Monomial r;
    merge(a.exps_, b.exps_, [](const Frac& x, const Frac& y) { return x < y ? y : x; }, r.exps_);
    return r;
}

bool Monomial::all_integer() const {
    return std::all_of(exps_.begin(), exps_.end(), [](const Entry& e) { return e.second.is_integer(); });
}

bool Monomial::all_nonnegative() const {
    return std::all_of(exps_.begin(), exps_.end(), [](const Entry& e) { return e.second.sign() >= 0; });
}

int Monomial::lex_compare(const Monomial& a, const Monomial& b) {
    std::size_t i = 0, j = 0;
    while (i < a.exps_.size() || j < b.exps_.size()) {
        if (j == b.exps_.size() || (i < a.exps_.size() && a.exps_[i].first < b.exps_[j].first))
            return a.exps_[i].second.sign();
        if (i == a.exps_.size() || b.exps_[j].first < a.exps_[i].first)
            return -b.exps_[j].second.sign();
        auto c = a.exps_[i].second <=> b.exps_[j].second;
        if (c != 0) return c < 0 ? -1 : 1;
        ++i;
        ++j;
    }
    return 0;
}

std::size_t Monomial::hash() const {
    std::size_t h = 1469598103934665603ULL;
    for (const auto& [s, v] : exps_) {
        h ^= s.id() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= v.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

Poly::Poly(const mpq_class& c) {
    if (c != 0) terms_.push_back({Monomial{}, c});
}

Poly::Poly(Monomial m, mpq_class c) {
    if (c != 0) terms_.push_back({std::move(m), std::move(c)});
}

Poly Poly::from_terms(std::vector<Term> terms) {
    Poly p;
    p.terms_ = std::move(terms);
    p.canonicalize();
    return p;
}

void Poly::canonicalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
        return Monomial::lex_compare(a.mono, b.mono) > 0;
    });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!out.empty() && out.back().mono == t.mono) {
            out.back().coeff += t.coeff;
        } else {
            if (!out.empty() && out.back().coeff == 0) out.pop_back();
            out.push_back(std::move(t));
        }
    }
    if (!out.empty() && out.back().coeff == 0) out.pop_back();
    terms_ = std::move(out);
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        int c;
        if (i == terms_.size()) c = -1;
        else if (j == o.terms_.size()) c = 1;
        else c = Monomial::lex_compare(terms_[i].mono, o.terms_[j].mono);
        if (c > 0) {
            out.push_back(terms_[i++]);
        } else if (c < 0) {
            out.push_back(o.terms_[j++]);
        } else {
            mpq_class s = terms_[i].coeff + o.terms_[j].coeff;
            if (s != 0) out.push_back({terms_[i].mono, s});
            ++i;
            ++j;
        }
    }
    Poly r;
    r.terms_ = std::move(out);
    return r;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return {};
    if (o.terms_.size() == 1) return scaled(o.terms_[0].coeff, o.terms_[0].mono);
    if (terms_.size() == 1) return o.scaled(terms_[0].coeff, terms_[0].mono);
    std::unordered_map<Monomial, mpq_class, MonomialHash> acc;
    acc.reserve(terms_.size() * o.terms_.size());
    mpq_class tmp;
    for (const auto& a : terms_) {
        for (const auto& b : o.terms_) {
            tmp = a.coeff * b.coeff;
            auto [it, fresh] = acc.try_emplace(a.mono * b.mono, tmp);
            if (!fresh) it->second += tmp;
        }
    }
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (c != 0) out.push_back({m, c});
    Poly r;
    r.terms_ = std::move(out);
    std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& x, const Term& y) {
        return Monomial::lex_compare(x.mono, y.mono) > 0;
    });
    return r;
}

Poly Poly::scaled(const mpq_class& c, const Monomial& m) const {
    if (c == 0) return {};
    Poly r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coeff * c});
    // multiplying by a monomial preserves a translation-invariant order
    return r;
}

Poly Poly::pow(unsigned k) const {
    Poly result(mpq_class(1));
    Poly base = *this;
    while (k) {
        if (k & 1U) result = result * base;
        k >>= 1U;
        if (k) base = base * base;
    }
    return result;
}

Monomial Poly::content() const {
    if (terms_.empty()) return {};
    Monomial m = terms_.front().mono;
    for (std::size_t i = 1; i < terms_.size(); ++i) m = Monomial::min(m, terms_[i].mono);
    return m;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
    if (d.is_zero()) return std::nullopt;
    if (is_zero()) return Poly{};
    if (d.terms_.size() == 1) return scaled(1 / d.terms_[0].coeff, Monomial{} / d.terms_[0].mono);

    // Newton polytopes add under multiplication, so each coordinate of a
    // quotient exponent lies in [min P - min D, max P - max D]. Any leading
    // quotient term outside that box proves non-divisibility; the box also
    // bounds the loop.
    Monomial pmin = content(), dmin = d.content();
    Monomial pmax = terms_.front().mono, dmax = d.terms_.front().mono;
    for (const auto& t : terms_) pmax = Monomial::max(pmax, t.mono);
    for (const auto& t : d.terms_) dmax = Monomial::max(dmax, t.mono);
    Monomial lo = pmin / dmin, hi = pmax / dmax;
    auto in_box = [&](const Monomial& t) {
        for (const auto& [s, v] : lo.entries())
            if (t.exponent(s) < v) return false;
        for (const auto& [s, v] : hi.entries())
            if (t.exponent(s) > v) return false;
        for (const auto& [s, v] : t.entries())
            if (v < lo.exponent(s) || v > hi.exponent(s)) return false;
        return true;
    };

    Poly rem = *this;
    std::vector<Term> quot;
    const Term& lead = d.terms_.front();
    mpq_class inv_lead = 1 / lead.coeff;
    while (!rem.is_zero()) {
        const Term& r = rem.terms_.front();
        Monomial qm = r.mono / lead.mono;
        if (!in_box(qm)) return std::nullopt;
        mpq_class qc = r.coeff * inv_lead;
        rem = rem - d.scaled(qc, qm);
        quot.push_back({std::move(qm), std::move(qc)});
    }
    Poly q;
    q.terms_ = std::move(quot);  // produced in strictly decreasing order
    return q;
}

bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].coeff != b.terms_[i].coeff || !(a.terms_[i].mono == b.terms_[i].mono))
            return false;
    return true;
}

std::size_t Poly::hash() const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& t : terms_) {
        h ^= t.mono.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        std::size_t ch = mpz_get_ui(t.coeff.get_num_mpz_t()) * 31 + mpz_get_ui(t.coeff.get_den_mpz_t()) +
                         static_cast<std::size_t>(mpz_sgn(t.coeff.get_num_mpz_t()) + 1);
        h ^= ch + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

}  // namespace qpc
