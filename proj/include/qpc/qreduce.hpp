#pragma once

#include <gmpxx.h>
#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "qpc/ratexpr.hpp"
#include "qpc/report.hpp"

namespace qpc {

// Reduction of the quantum T-function ansatz
//   T1 = a sum_m s^m F2(u q2^{4m}|Z),  T2 = ab sum_m s^m F2(u q2^{4m}|q2^2 Z),
//   T3, T4 the same with a factor i and m in Z + 1/2,
// to scalar bilinear identities between blocks. Exponents are polynomials
// in the summation indices, kept as RatExpr.

// q1^e1 q2^e2
struct QShift {
    RatExpr e1, e2;
};

// Block F^{(kind)}(u * shift_u | Z * shift_z). Kind 1 has parameters
// (q1^2, q1^-1 q2), kind 2 has (q1 q2^-1, q2^2). `normalized` carries the
// Gaussian c_q factor.
struct Block {
    int kind = 2;
    QShift u, z;
    bool normalized = true;
};

// u^u q1^q1 q2^q2 Z^z
struct ScalarMono {
    RatExpr u, q1, q2, z;
};

// coeff * i^ipow * a^a b^b s^s * mono * blocks, summed over indices
// index_k in Z + offset_k
struct OpTerm {
    mpq_class coeff = 1;
    int ipow = 0;
    int a = 0, b = 0;
    RatExpr s;
    ScalarMono mono;
    std::vector<Block> blocks;
    std::vector<std::pair<Symbol, Frac>> indices;
};

OpTerm tau_ansatz(int i, const std::string& index);
OpTerm scalar_term(const mpq_class& c, const ScalarMono& m);
// normal-ordered product: a, b, s moved left through blocks and scalars
OpTerm multiply(const OpTerm& l, const OpTerm& r);
// parameter flow Z -> q2^{2 dir} Z, a -> a b^{dir}
OpTerm parameter_flow(const OpTerm& t, int dir);

// sum over n in step*Z + offset of coeff * prefactor(n) * blocks(n), roman F
struct SumDescriptor {
    mpq_class coeff = 1;
    Frac offset, step = 1;
    ScalarMono prefactor;
    std::vector<Block> blocks;
};

struct Identity {
    std::string relation;
    std::string s_class;  // which residue of the total s-power
    std::vector<SumDescriptor> lhs, rhs;
};

// relation in {T1T1, T1T2, T1T3, T1T4}; one identity per s-power class
std::vector<Identity> quantum_tau_reduce(const std::string& relation);
// Both classes added and sums over Z and Z + 1/2 merged into (1/2)Z. The
// classes are separated again by the fractional power of Z, so nothing is
// lost.
Identity class_sum(const std::vector<Identity>& ids);
// printed shapes: FT1T1, FT1T2, FT1T3, FT1T4-plus, FT1T4-minus
Identity conjecture_display(const std::string& name);

// Equal up to an overall monomial and sign, exchanging sides, n -> -n and
// rescaling u and Z by monomials in q1, q2. On failure `why` says where.
bool same_identity(const Identity& a, const Identity& b, std::string* why = nullptr);

std::string str(const SumDescriptor& s);
std::string str(const Identity& id);
nlohmann::json to_json(const Identity& id);

std::vector<CheckResult> verify_reduction();

}  // namespace qpc
