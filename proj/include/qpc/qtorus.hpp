#pragma once

#include <json.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qpc/quiver.hpp"
#include "qpc/ratexpr.hpp"
#include "qpc/report.hpp"

namespace qpc {

// Generators g_a with g_a g_b = p^{lambda(a,b)} g_b g_a. The core generators
// commute with each other and are placed first in the normal order.
class SkewContext {
public:
    SkewContext(const std::vector<std::string>& generators, const std::vector<std::vector<Frac>>& lambda,
                const std::vector<std::string>& core, const std::string& p = "p");

    // lambda(i, j) = -2 eps_ij on y_1..y_n
    static std::shared_ptr<const SkewContext> from_exchange(const Quiver& q, const std::vector<std::string>& core);

    int size() const { return static_cast<int>(gens_.size()); }
    int core_size() const { return core_size_; }
    bool in_core(int i) const { return i < core_size_; }
    int index(const std::string& name) const;  // UnknownLabel
    Symbol gen(int i) const { return gens_[i]; }
    Symbol p() const { return p_; }
    const Frac& lambda(int i, int j) const { return lambda_[i][j]; }

private:
    std::vector<Symbol> gens_;
    std::vector<std::vector<Frac>> lambda_;
    int core_size_ = 0;
    Symbol p_;
};

using SkewContextPtr = std::shared_ptr<const SkewContext>;

// Sum of parts f * N(e): f a commutative rational function of the core
// generators and p, written on the left; N(e) the normal-ordered monomial
// in the outer generators. Denominators only ever live in f.
class SkewFraction {
public:
    using Exps = std::vector<Frac>;  // outer generators only

    SkewFraction() = default;
    explicit SkewFraction(SkewContextPtr ctx);
    // core function (may mention p); anything else throws NonCoreDenominator
    SkewFraction(SkewContextPtr ctx, const RatExpr& core_function);
    static SkewFraction gen(SkewContextPtr ctx, const std::string& name, Frac e = 1);
    static SkewFraction constant(SkewContextPtr ctx, long c);
    // Noncommutative text form: products are taken left to right.
    static SkewFraction parse(SkewContextPtr ctx, const std::string& text);

    const SkewContextPtr& context() const { return ctx_; }
    const std::map<Exps, RatExpr>& parts() const { return parts_; }

    bool is_zero() const { return parts_.empty(); }
    bool is_single() const { return parts_.size() == 1; }
    // every part free of multi-term factors in the denominator
    bool is_element() const;

    SkewFraction operator-() const;
    SkewFraction operator+(const SkewFraction& o) const;
    SkewFraction operator-(const SkewFraction& o) const;
    SkewFraction operator*(const SkewFraction& o) const;
    SkewFraction& operator+=(const SkewFraction& o) { return *this = *this + o; }
    SkewFraction& operator*=(const SkewFraction& o) { return *this = *this * o; }

    // single part only
    SkewFraction inv() const;
    // integer powers of anything invertible when negative; fractional
    // powers of a single part whose core function is a monomial
    SkewFraction pow(const Frac& r) const;

    // Image under the homomorphism sending each generator (or the listed
    // ones) to the given element. Fractional generator powers need
    // single-part images; core functions need core images or a monomial
    // denominator. With unit != 1 the images are those of g^unit.
    SkewFraction map(const std::map<std::string, SkewFraction>& images, const Frac& unit = Frac(1)) const;

    // substitute into the coefficient functions only (central symbols)
    SkewFraction substitute_scalars(const std::map<Symbol, RatExpr>& values) const;

    // p = 1: commutative expression in the generators
    RatExpr classical() const;

    std::string str() const;

private:
    void add_part(const Exps& e, const RatExpr& f);
    SkewContextPtr ctx_;
    std::map<Exps, RatExpr> parts_;
};

bool skew_equal(const SkewFraction& a, const SkewFraction& b);
// a b - p^{k} b a == 0
bool skew_commute(const SkewFraction& a, const SkewFraction& b, const Frac& k);

// Sets the central element c (given in any form equal to a single normal
// monomial times a p-power) to 1 by eliminating the outer generator `pivot`.
SkewFraction impose_central_one(const SkewFraction& x, const SkewFraction& central, const std::string& pivot);

// Quantum seed: roots[i] = Y_i^{1/root_order[i]} for the current cluster.
struct QuantumSeed {
    SkewContextPtr ctx;
    Quiver quiver;
    std::vector<SkewFraction> roots;
    std::vector<int> root_order;

    static QuantumSeed initial(SkewContextPtr ctx, const Quiver& q, const std::vector<std::string>& names, int order);
    SkewFraction y(int i) const { return roots[i].pow(root_order[i]); }
};

QuantumSeed quantum_mutate(const QuantumSeed& s, int j);
QuantumSeed apply_word(const QuantumSeed& s, const GroupWord& w);
// R_i R_k = p^{-2 eps_ik / (d_i d_k)} R_k R_i for the seed's own quiver
bool quantum_relations_hold(const QuantumSeed& s);

// ---- the A7' quantum layer
SkewContextPtr a7p_y_context();
QuantumSeed a7p_quantum_seed();
SkewContextPtr a7p_tau_context();
SkewContextPtr a7p_parameter_context();

struct CompatResult {
    bool compatible;
    std::string orientation;  // which product gives -4 [I | 0]
    IntMatrix product;
};
CompatResult compat_check(const ExtQuiver& b);

// T images of the quantum taus and their inverses
std::map<std::string, SkewFraction> tau_flow_forward(const SkewContextPtr& ctx);
std::map<std::string, SkewFraction> tau_flow_backward(const SkewContextPtr& ctx);

std::vector<CheckResult> verify_quantum_y_layer();
std::vector<CheckResult> verify_quantum_toda();
std::vector<CheckResult> verify_compat();
std::vector<CheckResult> verify_quantum_tau_layer();
std::vector<CheckResult> verify_parameter_flow();

}  // namespace qpc
