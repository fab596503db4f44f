#include "qpc/nekrasov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <map>
#include <sstream>

#include "qpc/errors.hpp"

namespace qpc {

// ---- partitions -----------------------------------------------------------

Partition::Partition(std::vector<int> p) : parts(std::move(p)) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] <= 0) throw IndexOutOfRange("partition parts must be positive");
        if (i > 0 && parts[i] > parts[i - 1]) throw IndexOutOfRange("partition parts must be weakly decreasing");
    }
}

int Partition::size() const {
    int s = 0;
    for (int p : parts) s += p;
    return s;
}

int Partition::row(int i) const { return i >= 1 && i <= length() ? parts[i - 1] : 0; }

int Partition::col(int j) const {
    int c = 0;
    for (int p : parts)
        if (p >= j) ++c;
    return c;
}

std::string Partition::str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
    return s + "]";
}

std::vector<Partition> partitions(int n) {
    if (n < 0) throw IndexOutOfRange("negative partition size");
    std::vector<Partition> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rest, int maxp) {
        if (rest == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int k = std::min(rest, maxp); k >= 1; --k) {
            cur.push_back(k);
            rec(rest - k, k);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

int arm(const Partition& l, Box s) { return l.row(s.i) - s.j; }
int leg(const Partition& l, Box s) { return l.col(s.j) - s.i; }

std::pair<int, int> arm_leg(const Partition& lambda, const Partition& mu, Box s) {
    return {arm(mu, s), leg(lambda, s)};
}

namespace {

mpq_class ipow(const mpq_class& b, long e) {
    if (e == 0) return 1;
    if (b == 0) {
        if (e < 0) throw DivisionByZero("0 to a negative power");
        return 0;
    }
    mpz_class n, d;
    unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(n.get_mpz_t(), b.get_num_mpz_t(), k);
    mpz_pow_ui(d.get_mpz_t(), b.get_den_mpz_t(), k);
    mpq_class r = e > 0 ? mpq_class(n, d) : mpq_class(d, n);
    r.canonicalize();
    return r;
}

// powers q^k cached on demand
class Powers {
public:
    explicit Powers(mpq_class q) : q_(std::move(q)) {}
    const mpq_class& operator()(long k) {
        auto it = cache_.find(k);
        if (it == cache_.end()) it = cache_.emplace(k, ipow(q_, k)).first;
        return it->second;
    }

private:
    mpq_class q_;
    std::map<long, mpq_class> cache_;
};

// product over the two Nlm box sets; zero factor means a pole of 1/N
mpq_class nek_weight(const Partition& l, const Partition& m, const mpq_class& u, Powers& p1, Powers& p2) {
    mpq_class r = 1;
    for (int i = 1; i <= l.length(); ++i)
        for (int j = 1; j <= l.row(i); ++j) {
            auto [a, g] = arm_leg(l, m, {i, j});
            r *= 1 - u * p2(-a - 1) * p1(g);
        }
    for (int i = 1; i <= m.length(); ++i)
        for (int j = 1; j <= m.row(i); ++j) {
            r *= 1 - u * p2(arm(l, {i, j})) * p1(-leg(m, {i, j}) - 1);
        }
    return r;
}

}  // namespace

mpq_class nek_weight(const Partition& l, const Partition& m, const mpq_class& u, const mpq_class& q1,
                     const mpq_class& q2) {
    Powers p1(q1), p2(q2);
    return nek_weight(l, m, u, p1, p2);
}

NekSeries inst_series(const mpq_class& u, const mpq_class& q1, const mpq_class& q2, int order) {
    if (order < 0) throw IndexOutOfRange("negative order");
    if (u == 0 || q1 == 0 || q2 == 0) throw PoleAtPoint("u, q1, q2 must be nonzero");
    const mpq_class ui = 1 / u;
    std::vector<std::vector<Partition>> parts;
    for (int k = 0; k <= order; ++k) parts.push_back(partitions(k));
    // one task per total size; exact arithmetic makes the result independent of scheduling
    auto level = [&](int k) {
        Powers p1(q1), p2(q2);
        mpq_class sum = 0;
        for (int k1 = 0; k1 <= k; ++k1)
            for (const auto& l1 : parts[k1])
                for (const auto& l2 : parts[k - k1]) {
                    mpq_class d = nek_weight(l1, l1, 1, p1, p2) * nek_weight(l1, l2, u, p1, p2) *
                                  nek_weight(l2, l1, ui, p1, p2) * nek_weight(l2, l2, 1, p1, p2);
                    if (d == 0) throw PoleAtPoint("pair (" + l1.str() + ", " + l2.str() + ")");
                    sum += 1 / d;
                }
        return sum;
    };
    std::vector<std::future<mpq_class>> jobs;
    for (int k = 1; k <= order; ++k) jobs.push_back(std::async(std::launch::async, level, k));
    NekSeries s{u, q1, q2, {mpq_class(1)}};
    for (auto& j : jobs) s.coeffs.push_back(j.get());
    return s;
}

std::string to_csv(const NekSeries& s) {
    std::string out = "order,numerator,denominator\n";
    for (std::size_t k = 0; k < s.coeffs.size(); ++k)
        out += std::to_string(k) + "," + s.coeffs[k].get_num().get_str() + "," + s.coeffs[k].get_den().get_str() + "\n";
    return out;
}

nlohmann::json to_json(const NekSeries& s) {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& x : s.coeffs) c.push_back(x.get_str());
    return {{"u", s.u.get_str()}, {"q1", s.q1.get_str()}, {"q2", s.q2.get_str()}, {"coeffs", c}};
}

// ---- Real -----------------------------------------------------------------

mpfr_prec_t bits_for_digits(int digits) {
    if (digits < 1) throw ConfigError("digits must be positive");
    return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 16;
}

Real::Real(mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
}

Real::Real(const mpq_class& q, mpfr_prec_t bits, mpfr_rnd_t rnd) {
    mpfr_init2(v_, bits);
    mpfr_set_q(v_, q.get_mpq_t(), rnd);
}

Real::Real(double d, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_d(v_, d, MPFR_RNDN);
}

Real::Real(const Real& o) {
    mpfr_init2(v_, o.prec());
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
    if (this != &o) {
        mpfr_set_prec(v_, o.prec());
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

Real& Real::operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}

Real::~Real() { mpfr_clear(v_); }

std::string Real::str(int digits) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

// ---- PrecisionReal --------------------------------------------------------

namespace {

constexpr mpfr_prec_t kErrBits = 64;

Real abs_up(const Real& x) {
    Real r(kErrBits);
    mpfr_abs(r.get(), x.get(), MPFR_RNDU);
    return r;
}

Real add_up(const Real& a, const Real& b) {
    Real r(kErrBits);
    mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDU);
    return r;
}

Real mul_up(const Real& a, const Real& b) {
    Real r(kErrBits);
    mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDU);
    return r;
}

// |v| 2^{1-p}: one correctly rounded operation, doubled for slack
Real rounding(const Real& v) {
    Real r = abs_up(v);
    mpfr_mul_2si(r.get(), r.get(), 1 - static_cast<long>(v.prec()), MPFR_RNDU);
    return r;
}

mpfr_prec_t joint(const PrecisionReal& a, const PrecisionReal& b) { return std::max(a.prec(), b.prec()); }

}  // namespace

PrecisionReal::PrecisionReal() : value(64), err(kErrBits) {}
PrecisionReal::PrecisionReal(Real v, Real e) : value(std::move(v)), err(std::move(e)) {}

PrecisionReal PrecisionReal::exact(const mpq_class& q, mpfr_prec_t bits) {
    Real v(q, bits);
    return {v, rounding(v)};
}

PrecisionReal PrecisionReal::operator-() const {
    PrecisionReal r = *this;
    mpfr_neg(r.value.get(), r.value.get(), MPFR_RNDN);
    return r;
}

PrecisionReal operator+(const PrecisionReal& a, const PrecisionReal& b) {
    Real v(joint(a, b));
    mpfr_add(v.get(), a.value.get(), b.value.get(), MPFR_RNDN);
    Real e = add_up(add_up(a.err, b.err), rounding(v));
    return {std::move(v), std::move(e)};
}

PrecisionReal operator-(const PrecisionReal& a, const PrecisionReal& b) { return a + (-b); }

PrecisionReal operator*(const PrecisionReal& a, const PrecisionReal& b) {
    Real v(joint(a, b));
    mpfr_mul(v.get(), a.value.get(), b.value.get(), MPFR_RNDN);
    Real e = add_up(mul_up(abs_up(a.value), b.err), mul_up(abs_up(b.value), a.err));
    e = add_up(add_up(e, mul_up(a.err, b.err)), rounding(v));
    return {std::move(v), std::move(e)};
}

PrecisionReal PrecisionReal::inv() const {
    Real lo(kErrBits);
    mpfr_abs(lo.get(), value.get(), MPFR_RNDD);
    mpfr_sub(lo.get(), lo.get(), err.get(), MPFR_RNDD);
    if (mpfr_sgn(lo.get()) <= 0) throw DivisionByZero("enclosure contains zero");
    Real v(prec());
    mpfr_ui_div(v.get(), 1, value.get(), MPFR_RNDN);
    // err / (|x| (|x| - err))
    Real d(kErrBits);
    mpfr_abs(d.get(), value.get(), MPFR_RNDD);
    mpfr_mul(d.get(), d.get(), lo.get(), MPFR_RNDD);
    Real e(kErrBits);
    mpfr_div(e.get(), err.get(), d.get(), MPFR_RNDU);
    e = add_up(e, rounding(v));
    return {std::move(v), std::move(e)};
}

PrecisionReal operator/(const PrecisionReal& a, const PrecisionReal& b) { return a * b.inv(); }

PrecisionReal exp(const PrecisionReal& x) {
    Real v(x.prec());
    mpfr_exp(v.get(), x.value.get(), MPFR_RNDN);
    // e^{x+d} - e^x = e^x (e^d - 1), e^x <= 2|v|
    Real m(kErrBits);
    mpfr_expm1(m.get(), x.err.get(), MPFR_RNDU);
    Real e = mul_up(abs_up(v), m);
    mpfr_mul_2si(e.get(), e.get(), 1, MPFR_RNDU);
    e = add_up(e, rounding(v));
    return {std::move(v), std::move(e)};
}

PrecisionReal log(const PrecisionReal& x) {
    Real lo(kErrBits);
    mpfr_sub(lo.get(), x.value.get(), x.err.get(), MPFR_RNDD);
    if (mpfr_sgn(lo.get()) <= 0) throw DivisionByZero("log of an enclosure reaching zero");
    Real v(x.prec());
    mpfr_log(v.get(), x.value.get(), MPFR_RNDN);
    Real e(kErrBits);
    mpfr_div(e.get(), x.err.get(), lo.get(), MPFR_RNDU);
    e = add_up(add_up(e, rounding(v)), Real(std::ldexp(1.0, 1 - static_cast<int>(x.prec())), kErrBits));
    return {std::move(v), std::move(e)};
}

PrecisionReal pow(const mpq_class& b, const mpq_class& e, mpfr_prec_t bits) {
    if (e.get_den() == 1) {
        if (!e.get_num().fits_slong_p()) throw ExponentOverflow("power exponent");
        return PrecisionReal::exact(ipow(b, e.get_num().get_si()), bits);
    }
    if (b <= 0) throw StructuralMismatch("fractional power of a non-positive base");
    if (b == 1) return PrecisionReal::exact(1, bits);
    return exp(PrecisionReal::exact(e, bits) * log(PrecisionReal::exact(b, bits)));
}

Real abs_diff(const PrecisionReal& a, const PrecisionReal& b) {
    Real d(joint(a, b));
    mpfr_sub(d.get(), a.value.get(), b.value.get(), MPFR_RNDN);
    return abs_up(d);
}

nlohmann::json to_json(const PrecisionReal& x, int digits) {
    return {{"value", x.value.str(digits)}, {"err", x.err.str(6)}};
}

// ---- Pochhammer -----------------------------------------------------------

namespace {

mpq_class qabs(const mpq_class& x) { return x < 0 ? mpq_class(-x) : x; }

// exp(-sum_m x^m/m prod_k 1/(1 - t_k^m)) for |x| <= 1/2 and all |t_k| < 1
PrecisionReal expsum(const mpq_class& x, const std::vector<mpq_class>& t, mpfr_prec_t bits, int* terms) {
    const mpfr_prec_t wp = bits + 32;
    const std::size_t N = t.size();
    // B = prod 1/(1 - |t_k|) bounds every product factor
    Real B(mpq_class(1), kErrBits);
    Real slack(mpq_class(0), kErrBits);  // sum_k 1/(1 - |t_k|)
    for (const auto& tk : t) {
        Real d(mpq_class(1 - qabs(tk)), kErrBits, MPFR_RNDD);
        Real r(kErrBits);
        mpfr_ui_div(r.get(), 1, d.get(), MPFR_RNDU);
        B = mul_up(B, r);
        slack = add_up(slack, r);
    }
    Real ax(qabs(x), kErrBits, MPFR_RNDU);
    Real one_minus(mpq_class(1 - qabs(x)), kErrBits, MPFR_RNDD);
    Real target(kErrBits);
    mpfr_set_ui_2exp(target.get(), 1, -static_cast<long>(bits) - 8, MPFR_RNDD);

    Real X(x, wp), xm(x, wp), S(wp), term(wp), den(wp), tmp(wp);
    std::vector<Real> T, tm;
    for (const auto& tk : t) T.emplace_back(tk, wp), tm.emplace_back(tk, wp);
    Real abs_sum(kErrBits), round_err(kErrBits), axm = ax, tail(kErrBits);
    long m = 1;
    for (;; ++m) {
        mpfr_div_si(term.get(), xm.get(), m, MPFR_RNDN);
        for (std::size_t k = 0; k < N; ++k) {
            mpfr_ui_sub(den.get(), 1, tm[k].get(), MPFR_RNDN);
            mpfr_div(term.get(), term.get(), den.get(), MPFR_RNDN);
        }
        mpfr_add(S.get(), S.get(), term.get(), MPFR_RNDN);
        // relative error of this term: 2m + 4 + sum_k (2m/(1-|t_k|) + 4) units of 2^-wp, doubled
        Real rel(kErrBits);
        mpfr_mul_ui(rel.get(), slack.get(), 2 * m, MPFR_RNDU);
        mpfr_add_ui(rel.get(), rel.get(), 2 * m + 4 + 4 * N, MPFR_RNDU);
        mpfr_mul_2si(rel.get(), rel.get(), 1 - static_cast<long>(wp), MPFR_RNDU);
        Real at = abs_up(term);
        round_err = add_up(round_err, mul_up(at, rel));
        abs_sum = add_up(abs_sum, at);
        // tail after m: B |x|^{m+1} / ((m+1)(1-|x|))
        axm = mul_up(axm, ax);
        mpfr_mul(tail.get(), B.get(), axm.get(), MPFR_RNDU);
        mpfr_div_ui(tail.get(), tail.get(), m + 1, MPFR_RNDU);
        mpfr_div(tail.get(), tail.get(), one_minus.get(), MPFR_RNDU);
        if (tail <= target || mpfr_zero_p(X.get())) break;
        if (m > 1000000) throw TruncationBudgetExceeded("Pochhammer exponential sum does not converge");
        mpfr_mul(xm.get(), xm.get(), X.get(), MPFR_RNDN);
        for (std::size_t k = 0; k < N; ++k) mpfr_mul(tm[k].get(), tm[k].get(), T[k].get(), MPFR_RNDN);
    }
    if (terms) *terms = std::max(*terms, static_cast<int>(m));
    // each partial sum rounding adds at most |S_m| 2^-wp <= abs_sum 2^-wp
    Real acc = abs_sum;
    mpfr_mul_ui(acc.get(), acc.get(), m + 1, MPFR_RNDU);
    mpfr_mul_2si(acc.get(), acc.get(), 1 - static_cast<long>(wp), MPFR_RNDU);
    Real e = add_up(add_up(round_err, acc), tail);
    mpfr_neg(S.get(), S.get(), MPFR_RNDN);
    PrecisionReal r = exp(PrecisionReal(std::move(S), std::move(e)));
    Real v(bits);
    mpfr_set(v.get(), r.value.get(), MPFR_RNDN);
    Real ee = add_up(r.err, rounding(v));
    return {std::move(v), std::move(ee)};
}

// (x; t) = (x; t_2..t_N)(x t_1; t) peels factors until |x| <= 1/2
PrecisionReal poch_inside(const mpq_class& x, const std::vector<mpq_class>& t, mpfr_prec_t bits, int* terms) {
    if (t.empty()) return PrecisionReal::exact(1 - x, bits);
    if (qabs(x) <= mpq_class(1, 2)) return expsum(x, t, bits, terms);
    std::vector<mpq_class> rest(t.begin() + 1, t.end());
    return poch_inside(x, rest, bits, terms) * poch_inside(x * t[0], t, bits, terms);
}

}  // namespace

PrecisionReal pochhammer(const mpq_class& x, const std::vector<mpq_class>& bases, mpfr_prec_t bits, int* terms) {
    if (x == 0) return PrecisionReal::exact(1, bits);
    mpq_class y = x;
    std::vector<mpq_class> t = bases;
    bool invert = false;
    for (auto& tk : t) {
        if (qabs(tk) == 1) throw BaseOnUnitCircle("base " + tk.get_str());
        // (y; t^-1, ...) = (y t; t, ...)^-1
        if (qabs(tk) > 1) {
            tk = 1 / tk;
            y *= tk;
            invert = !invert;
        }
    }
    PrecisionReal r = poch_inside(y, t, bits, terms);
    return invert ? r.inv() : r;
}

PrecisionReal Cq(const mpq_class& u, const mpq_class& t1, const mpq_class& t2, mpfr_prec_t bits) {
    if (u == 0) throw PoleAtPoint("C_q at u = 0");
    return pochhammer(u, {t1, t2}, bits) * pochhammer(1 / u, {t1, t2}, bits);
}

PrecisionReal cq(const mpq_class& u, const mpq_class& Z, const mpq_class& t1, const mpq_class& t2,
                 mpfr_prec_t bits) {
    if (u <= 0 || Z <= 0 || t1 <= 0 || t2 <= 0) throw StructuralMismatch("c_q needs positive u, Z, t1, t2");
    if (t1 == 1 || t2 == 1) throw BaseOnUnitCircle("c_q with a unit base");
    auto L = [&](const mpq_class& v) { return log(PrecisionReal::exact(v, bits)); };
    PrecisionReal lu = L(u);
    PrecisionReal num = L(Z) * lu * lu;
    PrecisionReal den = PrecisionReal::exact(4, bits) * L(t1) * L(t2);
    return exp(-(num / den));
}

std::pair<mpq_class, mpq_class> block_params(int kind, const mpq_class& q1, const mpq_class& q2) {
    if (kind == 1) return {q1 * q1, q2 / q1};
    if (kind == 2) return {q1 / q2, q2 * q2};
    throw IndexOutOfRange("block kind " + std::to_string(kind));
}

BlockSeries block_series(int kind, const mpq_class& u, const mpq_class& q1, const mpq_class& q2, int order,
                         mpfr_prec_t bits) {
    auto [t1, t2] = block_params(kind, q1, q2);
    return {Cq(u, t1, t2, bits), inst_series(u, t1, t2, order)};
}

// ---- bilinear relations ---------------------------------------------------

namespace {

const Symbol kIndex("n");

mpq_class at(const RatExpr& e, const Frac& n) {
    return e.specialize({{kIndex, mpq_class(n.num(), n.den())}});
}

Frac to_frac(const mpq_class& q) {
    if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) throw ExponentOverflow(q.get_str());
    return Frac(q.get_num().get_si(), q.get_den().get_si());
}

long to_int(const mpq_class& q, const char* what) {
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
        throw StructuralMismatch(std::string("non-integer ") + what + " " + q.get_str());
    return q.get_num().get_si();
}

mpq_class shift(const QShift& s, const Frac& n, const mpq_class& q1, const mpq_class& q2) {
    return ipow(q1, to_int(at(s.e1, n), "q1 exponent")) * ipow(q2, to_int(at(s.e2, n), "q2 exponent"));
}

struct Cache {
    mpfr_prec_t bits;
    std::map<std::pair<int, std::string>, PrecisionReal> C;
    std::map<std::pair<int, std::string>, NekSeries> F;
    int poch_terms = 0, f_order = 0;

    const PrecisionReal& prefactor(int kind, const mpq_class& x, const mpq_class& q1, const mpq_class& q2) {
        auto key = std::make_pair(kind, x.get_str());
        auto it = C.find(key);
        if (it == C.end()) {
            auto [t1, t2] = block_params(kind, q1, q2);
            PrecisionReal c = pochhammer(x, {t1, t2}, bits, &poch_terms) * pochhammer(1 / x, {t1, t2}, bits, &poch_terms);
            it = C.emplace(key, std::move(c)).first;
        }
        return it->second;
    }

    const NekSeries& series(int kind, const mpq_class& x, const mpq_class& q1, const mpq_class& q2, int order) {
        auto key = std::make_pair(kind, x.get_str());
        auto it = F.find(key);
        if (it == F.end() || static_cast<int>(it->second.coeffs.size()) <= order) {
            auto [t1, t2] = block_params(kind, q1, q2);
            F[key] = inst_series(x, t1, t2, order);
            it = F.find(key);
        }
        f_order = std::max(f_order, order);
        return it->second;
    }
};

// exponent -> accumulated value for one side
using Side = std::map<Frac, PrecisionReal>;

void accumulate(Side& out, const SumDescriptor& sd, const NekPoint& pt, const Frac& max_order, Cache& cache,
                Frac& max_abs_n) {
    for (const auto& b : sd.blocks)
        if (b.normalized) throw StructuralMismatch("numeric check expects roman F blocks");
    if (sd.step <= Frac(0)) throw StructuralMismatch("index step must be positive");
    auto zexp = [&](const Frac& n) { return to_frac(at(sd.prefactor.z, n)); };
    auto term = [&](const Frac& n) {
        const Frac z0 = zexp(n);
        if (z0 > max_order) return;
        max_abs_n = std::max(max_abs_n, n.abs());
        const int K = static_cast<int>((max_order - z0).floor());
        const mpfr_prec_t bits = cache.bits;
        PrecisionReal w = PrecisionReal::exact(sd.coeff, bits);
        w = w * pow(pt.u, at(sd.prefactor.u, n), bits) * pow(pt.q1, at(sd.prefactor.q1, n), bits) *
            pow(pt.q2, at(sd.prefactor.q2, n), bits);
        // exact product of the block series, coefficients up to Z^K
        std::vector<mpq_class> prod{mpq_class(1)};
        prod.resize(K + 1, 0);
        for (const auto& b : sd.blocks) {
            const mpq_class x = pt.u * shift(b.u, n, pt.q1, pt.q2);
            const mpq_class c = shift(b.z, n, pt.q1, pt.q2);
            w = w * cache.prefactor(b.kind, x, pt.q1, pt.q2);
            const NekSeries& s = cache.series(b.kind, x, pt.q1, pt.q2, K);
            std::vector<mpq_class> next(K + 1, 0);
            mpq_class cj = 1;
            for (int j = 0; j <= K; ++j, cj *= c)
                for (int i = 0; i + j <= K; ++i) next[i + j] += prod[i] * s.coeffs[j] * cj;
            prod = std::move(next);
        }
        for (int j = 0; j <= K; ++j) {
            if (prod[j] == 0) continue;
            PrecisionReal v = w * PrecisionReal::exact(prod[j], bits);
            Frac e = z0 + Frac(j);
            auto it = out.find(e);
            if (it == out.end())
                out.emplace(e, std::move(v));
            else
                it->second = it->second + v;
        }
    };
    // 2n^2-type exponents are convex in n: walk outward until they exceed max_order for good
    for (int dir : {1, -1}) {
        Frac prev;
        bool first = true;
        for (long k = dir == 1 ? 0 : -1;; k += dir) {
            if (std::abs(k) > 100000) throw TruncationBudgetExceeded("index sum does not terminate");
            Frac n = sd.offset + sd.step * Frac(k);
            Frac z = zexp(n);
            term(n);
            if (z > max_order && !first && z > prev) break;
            prev = z;
            first = false;
        }
    }
}

Side evaluate(const std::vector<SumDescriptor>& sums, const NekPoint& pt, const Frac& max_order, Cache& cache,
              Frac& max_abs_n) {
    Side s;
    for (const auto& sd : sums) accumulate(s, sd, pt, max_order, cache, max_abs_n);
    return s;
}

BilinearReport run(const Identity& id, const NekPoint& pt, const Frac& max_order, int digits, double target,
                   std::string tag) {
    if (pt.u <= 0 || pt.q1 <= 0 || pt.q2 <= 0) throw StructuralMismatch("parameter point must be positive");
    BilinearReport r;
    r.relation = id.relation;
    r.tag = std::move(tag);
    r.point = pt;
    r.max_order = max_order;
    r.digits = digits;
    Cache cache{bits_for_digits(digits), {}, {}, 0, 0};
    Side L = evaluate(id.lhs, pt, max_order, cache, r.max_abs_n);
    Side R = evaluate(id.rhs, pt, max_order, cache, r.max_abs_n);
    std::vector<Frac> keys;
    for (const auto& [e, v] : L) keys.push_back(e);
    for (const auto& [e, v] : R) keys.push_back(e);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    const PrecisionReal zero = PrecisionReal::exact(0, cache.bits);
    r.pass = true;
    r.budget = Real(kErrBits);
    const Real tgt(target, kErrBits);
    for (const auto& e : keys) {
        OrderCheck c;
        c.exponent = e;
        c.lhs = L.count(e) ? L.at(e) : zero;
        c.rhs = R.count(e) ? R.at(e) : zero;
        c.residual = abs_diff(c.lhs, c.rhs);
        c.budget = add_up(c.lhs.err, c.rhs.err);
        if (tgt < c.budget)
            throw TruncationBudgetExceeded(id.relation + " at Z^" + e.str() + ": budget " + c.budget.str(6));
        c.pass = c.residual <= c.budget;
        r.pass = r.pass && c.pass;
        if (r.budget < c.budget) r.budget = c.budget;
        r.orders.push_back(std::move(c));
    }
    r.f_order = cache.f_order;
    r.poch_terms = cache.poch_terms;
    return r;
}

}  // namespace

BilinearReport verify_identity(const Identity& id, const NekPoint& pt, const Frac& max_order, int digits,
                               double target) {
    return run(id, pt, max_order, digits, target, "derived");
}

BilinearReport verify_conjecture(const std::string& relation, const NekPoint& pt, const Frac& max_order, int digits,
                                 double target) {
    return run(conjecture_display(relation), pt, max_order, digits, target, "printed");
}

BilinearReport verify_corrupted(const Identity& id, const NekPoint& pt, const Frac& max_order, int digits,
                                double target) {
    Identity bad = id;
    if (bad.rhs.empty()) throw StructuralMismatch("identity without right-hand side");
    bad.rhs[0].coeff = -bad.rhs[0].coeff;
    return run(bad, pt, max_order, digits, target, "control");
}

nlohmann::json to_json(const BilinearReport& r) {
    nlohmann::json orders = nlohmann::json::array();
    for (const auto& c : r.orders)
        orders.push_back({{"exponent", c.exponent.str()},
                          {"class", (c.exponent - Frac(c.exponent.floor())).str()},
                          {"lhs", to_json(c.lhs)},
                          {"rhs", to_json(c.rhs)},
                          {"residual", c.residual.str(6)},
                          {"budget", c.budget.str(6)},
                          {"pass", c.pass}});
    return {{"relation", r.relation},
            {"tag", r.tag},
            {"point", {{"u", r.point.u.get_str()}, {"q1", r.point.q1.get_str()}, {"q2", r.point.q2.get_str()}}},
            {"max_order", r.max_order.str()},
            {"digits", r.digits},
            {"truncation", {{"max_abs_n", r.max_abs_n.str()}, {"f_order", r.f_order}, {"poch_terms", r.poch_terms}}},
            {"budget", r.budget.str(6)},
            {"orders", orders},
            {"pass", r.pass}};
}

// ---- classical tau --------------------------------------------------------

namespace {

// one family of products A_m B_m' in a bilinear equation, s-power m + m' + shift
struct Family {
    int sign;
    int tau_a, tau_b;  // 1 or 3
    bool shifted;      // evaluated at (q^-1 Z, q Z)
    Frac zhalf;        // extra Z power (1/2 for the Z^{1/2} term)
};

// Z exponent of one tau factor: (sigma + m + h)^2 with h = 0 (tau1) or 1/2 (tau3)
Frac half(int tau) { return tau == 3 ? Frac(1, 2) : Frac(0); }

// pair exponent minus 2 sigma^2 + 2 sigma P with P the total s-power
Frac remainder(const Family& f, int m, int mp) {
    Frac a = Frac(m) + half(f.tau_a), b = Frac(mp) + half(f.tau_b);
    return a * a + b * b + f.zhalf;
}

// partner index for total s-power P; (i s^{1/2})^2 adds one power of s
int partner(const Family& f, int P, int m) { return P - m - (f.tau_a == 3 ? 1 : 0); }

}  // namespace

TauReport classical_tau_check(const TauPoint& pt, int M, int N, int digits, const std::vector<mpq_class>& sample_Z) {
    if (pt.u <= 0 || pt.q <= 0 || pt.s <= 0) throw StructuralMismatch("tau point must be positive");
    if (pt.q == 1) throw BaseOnUnitCircle("q = 1");
    if (M < 0 || N < 0) throw IndexOutOfRange("negative cutoff");
    const mpfr_prec_t bits = bits_for_digits(digits);
    TauReport rep;
    rep.point = pt;
    rep.m_cutoff = M;
    rep.z_order = N;
    rep.digits = digits;
    rep.budget = Real(kErrBits);
    const mpq_class qi = 1 / pt.q;
    // sigma = log u / (2 log q), so sF(u q^{2m}) carries Z^{(sigma+m)^2}
    const PrecisionReal sigma =
        log(PrecisionReal::exact(pt.u, bits)) / (PrecisionReal::exact(2, bits) * log(PrecisionReal::exact(pt.q, bits)));
    const PrecisionReal logq = log(PrecisionReal::exact(pt.q, bits));

    std::map<std::pair<int, int>, PrecisionReal> Ccache;
    std::map<std::pair<int, int>, NekSeries> Fcache;
    auto arg = [&](int tau, int m) -> mpq_class { return pt.u * ipow(pt.q, 2 * m + (tau == 3 ? 1 : 0)); };
    auto C = [&](int tau, int m) -> const PrecisionReal& {
        auto key = std::make_pair(tau, m);
        auto it = Ccache.find(key);
        if (it == Ccache.end()) it = Ccache.emplace(key, Cq(arg(tau, m), pt.q, qi, bits)).first;
        return it->second;
    };
    auto F = [&](int tau, int m, int order) -> const NekSeries& {
        auto key = std::make_pair(tau, m);
        auto it = Fcache.find(key);
        if (it == Fcache.end() || static_cast<int>(it->second.coeffs.size()) <= order) {
            Fcache[key] = inst_series(arg(tau, m), pt.q, qi, order);
            it = Fcache.find(key);
        }
        return it->second;
    };
    // Z exponent (sigma + m + h)^2 as a real, for the q^{...} factors of shifted pairs
    auto expo = [&](int tau, int m) {
        PrecisionReal a = sigma + PrecisionReal::exact(mpq_class(m) + (tau == 3 ? mpq_class(1, 2) : mpq_class(0)), bits);
        return a * a;
    };

    // equation 1: tau1(q^-1 Z) tau1(q Z) - tau1^2 - Z^{1/2} tau3^2, with tau3^2 = -s T(uq)^2
    // equation 2: tau3 likewise, divided by i^2 s
    const std::vector<std::vector<Family>> eqs{
        {{1, 1, 1, true, Frac(0)}, {-1, 1, 1, false, Frac(0)}, {1, 3, 3, false, Frac(1, 2)}},
        {{1, 3, 3, true, Frac(0)}, {-1, 3, 3, false, Frac(0)}, {1, 1, 1, false, Frac(1, 2)}}};
    const int W = M + N + 8;
    rep.pass = true;
    for (int e = 0; e < 2; ++e) {
        const auto& fams = eqs[e];
        for (int P = -2 * M - 1; P <= 2 * M + 1; ++P) {
            // minimal remainder over all integer pairs, and whether every pair within N of it has |m| <= M
            Frac rmin;
            bool have = false;
            for (const auto& f : fams)
                for (int m = -W; m <= W; ++m) {
                    Frac r = remainder(f, m, partner(f, P, m));
                    if (!have || r < rmin) rmin = r, have = true;
                }
            bool complete = true;
            for (const auto& f : fams)
                for (int m = -W; m <= W; ++m) {
                    int mp = partner(f, P, m);
                    if (remainder(f, m, mp) <= rmin + Frac(N) && (std::abs(m) > M || std::abs(mp) > M)) complete = false;
                }
            if (!complete) continue;
            if (e == 0) rep.complete_powers.push_back(P);
            std::map<Frac, PrecisionReal> acc;
            for (const auto& f : fams)
                for (int m = -M; m <= M; ++m) {
                    int mp = partner(f, P, m);
                    if (std::abs(mp) > M) continue;
                    Frac r0 = remainder(f, m, mp);
                    if (r0 > rmin + Frac(N)) continue;
                    const int K = static_cast<int>((rmin + Frac(N) - r0).floor());
                    PrecisionReal w = PrecisionReal::exact(f.sign, bits) * C(f.tau_a, m) * C(f.tau_b, mp);
                    const auto& sa = F(f.tau_a, m, K);
                    const auto& sb = F(f.tau_b, mp, K);
                    std::vector<mpq_class> prod(K + 1, 0);
                    for (int i = 0; i <= K; ++i)
                        for (int j = 0; i + j <= K; ++j) {
                            mpq_class c = sa.coeffs[i] * sb.coeffs[j];
                            // Z -> q^-1 Z in the first factor, q Z in the second
                            if (f.shifted) c *= ipow(pt.q, j - i);
                            prod[i + j] += c;
                        }
                    if (f.shifted) w = w * exp(logq * (expo(f.tau_b, mp) - expo(f.tau_a, m)));
                    for (int j = 0; j <= K; ++j) {
                        PrecisionReal v = w * PrecisionReal::exact(prod[j], bits);
                        Frac key = r0 + Frac(j);
                        auto it = acc.find(key);
                        if (it == acc.end())
                            acc.emplace(key, std::move(v));
                        else
                            it->second = it->second + v;
                    }
                }
            for (auto& [z, v] : acc) {
                TauCoefficient c;
                c.equation = e + 1;
                c.s_power = P;
                c.z_rel = z;
                c.pass = abs_diff(v, PrecisionReal::exact(0, bits)) <= v.err;
                if (rep.budget < v.err) rep.budget = v.err;
                c.residual = std::move(v);
                rep.pass = rep.pass && c.pass;
                rep.coeffs.push_back(std::move(c));
            }
        }
    }
    if (rep.complete_powers.empty()) rep.pass = false;

    // truncated numeric sums at sample points, for every cutoff up to M
    for (const auto& Z : sample_Z) {
        if (Z <= 0) throw StructuralMismatch("sample Z must be positive");
        const PrecisionReal logZ = log(PrecisionReal::exact(Z, bits));
        const PrecisionReal logs = log(PrecisionReal::exact(pt.s, bits));
        // s^{m + h} (c Z)^{(sigma+m+h)^2} C F(c Z) with c = q^dir
        auto block = [&](int tau, int m, int dir) {
            PrecisionReal h = PrecisionReal::exact(mpq_class(m) + (tau == 3 ? mpq_class(1, 2) : mpq_class(0)), bits);
            PrecisionReal lz = logZ + PrecisionReal::exact(dir, bits) * logq;
            PrecisionReal v = exp(logs * h + lz * expo(tau, m)) * C(tau, m);
            const auto& s = F(tau, m, N);
            PrecisionReal zc = exp(lz);
            PrecisionReal sum = PrecisionReal::exact(0, bits), zj = PrecisionReal::exact(1, bits);
            for (int j = 0; j <= N; ++j, zj = zj * zc) sum = sum + PrecisionReal::exact(s.coeffs[j], bits) * zj;
            return v * sum;
        };
        for (int cut = 0; cut <= M; ++cut) {
            auto T = [&](int tau, int dir) {
                PrecisionReal t = PrecisionReal::exact(0, bits);
                for (int m = -cut; m <= cut; ++m) t = t + block(tau, m, dir);
                return t;
            };
            PrecisionReal t1 = T(1, 0), t3 = T(3, 0);
            PrecisionReal zh = exp(logZ * PrecisionReal::exact(mpq_class(1, 2), bits));
            // tau3 = i T3 with T3 real, so tau3^2 = -T3^2
            PrecisionReal r1 = T(1, -1) * T(1, 1) - t1 * t1 + zh * t3 * t3;
            PrecisionReal r2 = T(3, -1) * T(3, 1) - t3 * t3 + zh * t1 * t1;
            rep.samples.push_back({Z, cut, std::fabs(r1.value.to_double()), std::fabs(r2.value.to_double()),
                                   std::fabs((t1 * t1).value.to_double())});
        }
    }
    return rep;
}

nlohmann::json to_json(const TauReport& r) {
    nlohmann::json coeffs = nlohmann::json::array(), samples = nlohmann::json::array();
    for (const auto& c : r.coeffs)
        coeffs.push_back({{"equation", c.equation},
                          {"s_power", c.s_power},
                          {"z_rel", c.z_rel.str()},
                          {"residual", to_json(c.residual, 6)},
                          {"pass", c.pass}});
    for (const auto& s : r.samples)
        samples.push_back({{"Z", s.Z.get_str()},
                           {"m_cutoff", s.m_cutoff},
                           {"residual1", s.residual1},
                           {"residual2", s.residual2},
                           {"scale", s.scale},
                           {"certified", false}});
    return {{"point", {{"u", r.point.u.get_str()}, {"q", r.point.q.get_str()}, {"s", r.point.s.get_str()}}},
            {"m_cutoff", r.m_cutoff},
            {"z_order", r.z_order},
            {"digits", r.digits},
            {"complete_s_powers", r.complete_powers},
            {"budget", r.budget.str(6)},
            {"coefficients", coeffs},
            {"samples", samples},
            {"pass", r.pass}};
}

}  // namespace qpc

namespace qpc {

namespace {

std::string point_str(const NekPoint& p) {
    return "(u,q1,q2)=(" + p.u.get_str() + "," + p.q1.get_str() + "," + p.q2.get_str() + ")";
}

std::string budget_detail(const BilinearReport& r) {
    std::string d = point_str(r.point) + " orders<=" + r.max_order.str() + " budget " + r.budget.str(3);
    for (const auto& c : r.orders)
        if (!c.pass) {
            d += "; first miss at Z^" + c.exponent.str() + ": residual " + c.residual.str(4);
            break;
        }
    return d;
}

}  // namespace

std::vector<CheckResult> verify_nekrasov(int digits) {
    std::vector<CheckResult> out;
    const std::vector<NekPoint> pts{{3, mpq_class(2, 5), mpq_class(3, 7)},
                                    {mpq_class(11, 2), mpq_class(1, 3), mpq_class(5, 7)},
                                    {mpq_class(13, 5), mpq_class(3, 4), mpq_class(2, 7)}};
    for (const auto& p : pts) {
        bool sym = inst_series(p.u, p.q1, p.q2, 5).coeffs == inst_series(1 / p.u, p.q1, p.q2, 5).coeffs;
        out.push_back({"inst_series", "u <-> 1/u symmetry through Z^5", sym, "derived", point_str(p)});
    }
    // printed displays, and the identities reduced from the quantum tau ansatz
    const std::vector<std::pair<std::string, std::string>> rels{{"FT1T3", "T1T3"},
                                                                {"FT1T2", "T1T2"},
                                                                {"FT1T1", "T1T1"},
                                                                {"FT1T4-plus", "T1T4"},
                                                                {"FT1T4-minus", "T1T4"}};
    for (const auto& [shown, rel] : rels) {
        const Frac order = rel == "T1T3" || rel == "T1T4" ? Frac(17, 8) : Frac(5, 2);
        const Identity reduced = class_sum(quantum_tau_reduce(rel));
        for (const auto& p : pts) {
            auto run_check = [&](const std::string& check, const std::string& tag, auto&& fn, bool expect) {
                try {
                    BilinearReport r = fn();
                    out.push_back({shown, check, r.pass == expect, tag, budget_detail(r)});
                } catch (const Error& e) {
                    out.push_back({shown, check, false, tag, e.what()});
                }
            };
            run_check("printed display holds coefficientwise", "printed",
                      [&] { return verify_conjecture(shown, p, order, digits); }, true);
            if (shown != "FT1T4-minus")
                run_check("reduced identity holds coefficientwise", "derived",
                          [&] { return verify_identity(reduced, p, order, digits); }, true);
            run_check("sign-corrupted display fails", "control",
                      [&] { return verify_corrupted(conjecture_display(shown), p, order, digits); }, false);
        }
    }
    try {
        TauReport t = classical_tau_check({3, mpq_class(2, 7), mpq_class(5, 3)}, 3, 4, digits);
        out.push_back({"tau", "bilinear tau equations at q1 q2 = 1, m-cutoff 3, Z-order 4", t.pass, "paper",
                       std::to_string(t.coeffs.size()) + " coefficients over " +
                           std::to_string(t.complete_powers.size()) + " s-powers, budget " + t.budget.str(3)});
    } catch (const Error& e) {
        out.push_back({"tau", "bilinear tau equations at q1 q2 = 1, m-cutoff 3, Z-order 4", false, "paper", e.what()});
    }
    return out;
}

}  // namespace qpc
