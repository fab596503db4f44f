#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "qpc/frac.hpp"
#include "qpc/qreduce.hpp"
#include "qpc/report.hpp"

namespace qpc {

// ---- partitions -----------------------------------------------------------

struct Partition {
    std::vector<int> parts;  // weakly decreasing, positive

    Partition() = default;
    explicit Partition(std::vector<int> p);

    int size() const;
    int length() const { return static_cast<int>(parts.size()); }
    int row(int i) const;  // lambda_i, 1-based, 0 past the end
    int col(int j) const;  // lambda'_j
    std::string str() const;

    friend bool operator==(const Partition&, const Partition&) = default;
};

std::vector<Partition> partitions(int n);

struct Box {
    int i = 1, j = 1;  // row, column, 1-based
};

int arm(const Partition& l, Box s);  // l_i - j, negative outside l
int leg(const Partition& l, Box s);  // l'_j - i
// (a_mu(s), l_lambda(s)), the pair entering the first Nlm factor
std::pair<int, int> arm_leg(const Partition& lambda, const Partition& mu, Box s);

mpq_class nek_weight(const Partition& l, const Partition& m, const mpq_class& u, const mpq_class& q1,
                     const mpq_class& q2);

// Instanton series, exact coefficients of Z^k for k = 0..order.
struct NekSeries {
    mpq_class u, q1, q2;
    std::vector<mpq_class> coeffs;
};

NekSeries inst_series(const mpq_class& u, const mpq_class& q1, const mpq_class& q2, int order);
std::string to_csv(const NekSeries& s);
nlohmann::json to_json(const NekSeries& s);

// ---- certified multiprecision reals ---------------------------------------

mpfr_prec_t bits_for_digits(int digits);

// RAII wrapper over mpfr_t.
class Real {
public:
    explicit Real(mpfr_prec_t bits = 64);
    Real(const mpq_class& q, mpfr_prec_t bits, mpfr_rnd_t rnd = MPFR_RNDN);
    Real(double d, mpfr_prec_t bits);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    std::string str(int digits = 20) const;

    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_); }

private:
    mpfr_t v_;
};

// value with |true - value| <= err; err is kept at 64 bits rounded upward
struct PrecisionReal {
    Real value, err;

    PrecisionReal();
    PrecisionReal(Real v, Real e);
    static PrecisionReal exact(const mpq_class& q, mpfr_prec_t bits);

    mpfr_prec_t prec() const { return value.prec(); }
    PrecisionReal operator-() const;
    PrecisionReal inv() const;
    friend PrecisionReal operator+(const PrecisionReal& a, const PrecisionReal& b);
    friend PrecisionReal operator-(const PrecisionReal& a, const PrecisionReal& b);
    friend PrecisionReal operator*(const PrecisionReal& a, const PrecisionReal& b);
    friend PrecisionReal operator/(const PrecisionReal& a, const PrecisionReal& b);
};

PrecisionReal exp(const PrecisionReal& x);
PrecisionReal log(const PrecisionReal& x);
// b^e for rational b > 0 (any b when e is an integer)
PrecisionReal pow(const mpq_class& b, const mpq_class& e, mpfr_prec_t bits);
// |a - b| rounded up
Real abs_diff(const PrecisionReal& a, const PrecisionReal& b);
nlohmann::json to_json(const PrecisionReal& x, int digits = 30);

// ---- q-functions ----------------------------------------------------------

// (x; t_1..t_N)_inf through the exponential-sum form, bases outside the unit
// disk flipped first. `terms` receives the longest exponential sum used.
PrecisionReal pochhammer(const mpq_class& x, const std::vector<mpq_class>& bases, mpfr_prec_t bits,
                         int* terms = nullptr);
// C_q(u; t1, t2) = (u; t1, t2)(u^-1; t1, t2)
PrecisionReal Cq(const mpq_class& u, const mpq_class& t1, const mpq_class& t2, mpfr_prec_t bits);
// c_q(u|Z) = exp(-log Z (log u)^2 / (4 log t1 log t2)), u, Z, t > 0
PrecisionReal cq(const mpq_class& u, const mpq_class& Z, const mpq_class& t1, const mpq_class& t2,
                 mpfr_prec_t bits);

// (t1, t2) of F^(kind): kind 1 (q1^2, q1^-1 q2), kind 2 (q1 q2^-1, q2^2)
std::pair<mpq_class, mpq_class> block_params(int kind, const mpq_class& q1, const mpq_class& q2);

// F^(kind)(u|Z) = C_q(u) * sum_k coeffs[k] Z^k, prefactor numeric, series exact
struct BlockSeries {
    PrecisionReal C;
    NekSeries series;
};
BlockSeries block_series(int kind, const mpq_class& u, const mpq_class& q1, const mpq_class& q2, int order,
                         mpfr_prec_t bits);

// ---- bilinear relations ---------------------------------------------------

struct NekPoint {
    mpq_class u, q1, q2;
};

// one power Z^exponent of both sides
struct OrderCheck {
    Frac exponent;
    PrecisionReal lhs, rhs;
    Real residual, budget;
    bool pass = false;
};

struct BilinearReport {
    std::string relation, tag;
    NekPoint point;
    Frac max_order;
    int digits = 0;
    std::vector<OrderCheck> orders;
    Frac max_abs_n;     // largest |n| with a term below max_order
    int f_order = 0;    // highest instanton order used
    int poch_terms = 0; // longest exponential sum
    Real budget;        // largest per-order budget
    bool pass = false;
};

// Compares both sides of `id` coefficientwise in Z up to max_order. The
// transcendental part (C_q and fractional powers) is evaluated at `digits`,
// everything else stays exact. Throws TruncationBudgetExceeded if some
// budget exceeds `target`.
BilinearReport verify_identity(const Identity& id, const NekPoint& pt, const Frac& max_order, int digits,
                               double target = 1e-40);
// the printed shape, see conjecture_display
BilinearReport verify_conjecture(const std::string& relation, const NekPoint& pt, const Frac& max_order,
                                 int digits, double target = 1e-40);
// the same check with the first right-hand sum sign-flipped
BilinearReport verify_corrupted(const Identity& id, const NekPoint& pt, const Frac& max_order, int digits,
                                double target = 1e-40);
nlohmann::json to_json(const BilinearReport& r);

// ---- classical tau functions at q1 q2 = 1 --------------------------------

struct TauPoint {
    mpq_class u, q, s;
};

// coefficient of s^s_power Z^{2 sigma^2 + 2 sigma s_power + z_rel}
struct TauCoefficient {
    int equation = 1;
    int s_power = 0;
    Frac z_rel;
    PrecisionReal residual;
    bool pass = false;
};

// residual of the truncated sums at a sample point; not certified since
// the tails of the instanton series are not bounded
struct TauSample {
    mpq_class Z;
    int m_cutoff = 0;
    double residual1 = 0, residual2 = 0, scale = 0;
};

struct TauReport {
    TauPoint point;
    int m_cutoff = 0, z_order = 0, digits = 0;
    std::vector<int> complete_powers;  // s-powers fully determined by the cutoff
    std::vector<TauCoefficient> coeffs;
    std::vector<TauSample> samples;
    Real budget;
    bool pass = false;
};

// tau1 = T(u, s; q|Z), tau3 = i s^{1/2} T(u q, s; q|Z) with
// T = sum_{|m|<=M} s^m sF(u q^{2m}; q, q^-1|Z)
TauReport classical_tau_check(const TauPoint& pt, int m_cutoff, int z_order, int digits,
                              const std::vector<mpq_class>& sample_Z = {});
nlohmann::json to_json(const TauReport& r);

std::vector<CheckResult> verify_nekrasov(int digits = 120);

}  // namespace qpc
