#include <gtest/gtest.h>

#include <cmath>

#include "qpc/errors.hpp"
#include "qpc/qreduce.hpp"

using namespace qpc;

namespace {

RatExpr R(const std::string& s) { return RatExpr::parse(s); }
RatExpr zero() { return RatExpr(0); }

Block blk(int kind, const std::string& u1, const std::string& u2, const std::string& z1, const std::string& z2) {
    return {kind, {R(u1), R(u2)}, {R(z1), R(z2)}, false};
}

SumDescriptor sum(mpq_class c, Frac off, Frac step, ScalarMono pre, std::vector<Block> b) {
    return {c, off, step, std::move(pre), std::move(b)};
}

ScalarMono mono(const std::string& u, const std::string& q1, const std::string& q2, const std::string& z) {
    return {R(u), R(q1), R(q2), R(z)};
}

// log c_q(X|Y) evaluated straight from its definition
double cq(int kind, double logx, double logy, double L1, double L2) {
    double t1 = kind == 1 ? 2 * L1 : L1 - L2;
    double t2 = kind == 1 ? L2 - L1 : 2 * L2;
    return -logy * logx * logx / (4 * t1 * t2);
}

double at(const RatExpr& e, double n) {
    mpq_class v = e.specialize({{Symbol("n"), mpq_class(static_cast<long>(std::lround(n * 4)), 4)}});
    return v.get_d();
}

}  // namespace

TEST(QReduce, NormalOrderedProduct) {
    OpTerm t = multiply(tau_ansatz(1, "m1"), tau_ansatz(3, "m2"));
    EXPECT_EQ(t.a, 2);
    EXPECT_EQ(t.ipow, 1);
    ASSERT_EQ(t.blocks.size(), 2u);
    // F2(u q2^{4 m1}|Z) a = a F1(u (q2/q1)^{2 m1}|Z), then s^{m2} shifts u by p^{4 m2}
    EXPECT_EQ(t.blocks[0].kind, 1);
    EXPECT_TRUE(equals(t.blocks[0].u.e1, R("2*m2 - 2*m1")));
    EXPECT_TRUE(equals(t.blocks[0].u.e2, R("2*m2 + 2*m1")));
    EXPECT_TRUE(t.blocks[0].z.e1.is_zero() && t.blocks[0].z.e2.is_zero());
    EXPECT_EQ(t.blocks[1].kind, 2);
    // b in T2 shifts the Z argument of the left block by p^2 = q1 q2
    OpTerm u = multiply(tau_ansatz(1, "m1"), tau_ansatz(2, "m2"));
    EXPECT_TRUE(equals(u.blocks[0].z.e1, R("1")) && equals(u.blocks[0].z.e2, R("1")));
    // a cannot pass an F^(1) block
    EXPECT_THROW(multiply(u, tau_ansatz(1, "m3")), StructuralMismatch);
}

TEST(QReduce, FlowOfT1IsT2) {
    OpTerm f = parameter_flow(tau_ansatz(1, "m"), 1), t2 = tau_ansatz(2, "m");
    EXPECT_EQ(f.a, t2.a);
    EXPECT_EQ(f.b, t2.b);
    EXPECT_TRUE(equals(f.blocks[0].z.e2, t2.blocks[0].z.e2));
    OpTerm back = parameter_flow(tau_ansatz(2, "m"), -1);
    EXPECT_EQ(back.b, 0);
    EXPECT_TRUE(back.blocks[0].z.e2.is_zero());
}

// Gaussian shift table against direct evaluation of c_q at a point
TEST(QReduce, GaussianFactorOracle) {
    const double L1 = std::log(0.37), L2 = std::log(0.61), W = std::log(2.3), Zl = std::log(0.05);
    auto ids = quantum_tau_reduce("T1T1");
    const SumDescriptor& lhs = ids[0].lhs.front();
    for (double n : {-1.0, 1.0, 2.0}) {
        // c1(U q1^{4n}|q1^2 Z) c2(U q2^{4n}|q2^2 Z) / (same at n = 0)
        double direct = cq(1, W + 4 * n * L1, Zl + 2 * L1, L1, L2) + cq(2, W + 4 * n * L2, Zl + 2 * L2, L1, L2) -
                        cq(1, W, Zl + 2 * L1, L1, L2) - cq(2, W, Zl + 2 * L2, L1, L2);
        const auto& p = lhs.prefactor;
        double engine = at(p.u, n) * W + at(p.q1, n) * L1 + at(p.q2, n) * L2 + at(p.z, n) * Zl;
        EXPECT_NEAR(direct, engine, 1e-9) << "n = " << n;
    }
    // for unshifted Z the cross terms leave Z^{2 n^2} only
    for (double n : {0.25, -0.75}) {
        double direct = cq(1, W + 4 * n * L1, Zl, L1, L2) + cq(2, W + 4 * n * L2, Zl, L1, L2) - cq(1, W, Zl, L1, L2) -
                        cq(2, W, Zl, L1, L2);
        EXPECT_NEAR(direct, 2 * n * n * Zl, 1e-9);
    }
}

TEST(QReduce, T1T3MatchesDisplay) {
    auto ids = quantum_tau_reduce("T1T3");
    ASSERT_EQ(ids.size(), 2u);
    EXPECT_TRUE(same_identity(ids[0], conjecture_display("FT1T3")));
    EXPECT_TRUE(same_identity(ids[1], conjecture_display("FT1T3")));
    Identity bad = conjecture_display("FT1T3");
    bad.lhs[0].prefactor.z = R("2*n^2 + 1");
    EXPECT_FALSE(same_identity(ids[0], bad));
}

TEST(QReduce, T1T2MatchesDisplayAsClassSum) {
    auto ids = quantum_tau_reduce("T1T2");
    EXPECT_FALSE(same_identity(ids[0], conjecture_display("FT1T2")));
    EXPECT_TRUE(same_identity(class_sum(ids), conjecture_display("FT1T2")));
}

// T1 T4 = p^{1/2} T4 T1 keeps a constant (q1 q2)^{1/4} on one side
TEST(QReduce, T1T4CarriesHalfPowerOfP) {
    auto ids = quantum_tau_reduce("T1T4");
    Identity hand{"T1T4", "", {}, {}};
    hand.lhs.push_back(sum(1, Frac(1, 4), 1, mono("n", "2*n^2", "2*n^2", "2*n^2"),
                           {blk(1, "4*n", "0", "1", "0"), blk(2, "0", "4*n", "0", "1")}));
    hand.rhs.push_back(sum(1, Frac(3, 4), 1, mono("-n", "-2*n^2 + 1/4", "-2*n^2 + 1/4", "2*n^2"),
                           {blk(1, "4*n", "0", "-1", "0"), blk(2, "0", "4*n", "0", "-1")}));
    EXPECT_TRUE(same_identity(ids[0], hand));
    EXPECT_FALSE(same_identity(ids[0], conjecture_display("FT1T4-plus")));
    EXPECT_FALSE(same_identity(ids[0], conjecture_display("FT1T4-minus")));
}

// tau1und tau1bar = tau1^2 + p^2 Z^{1/2} tau3^2 at even s-power: the tau3
// term brings n in Z + 1/2 with i^2 = -1
TEST(QReduce, T1T1EvenClass) {
    auto ids = quantum_tau_reduce("T1T1");
    Identity hand{"T1T1", "", {}, {}};
    std::vector<Block> plain{blk(1, "4*n", "0", "0", "0"), blk(2, "0", "4*n", "0", "0")};
    hand.lhs.push_back(sum(1, 0, 1, mono("2*n", "4*n^2", "4*n^2", "2*n^2"),
                           {blk(1, "4*n", "0", "2", "0"), blk(2, "0", "4*n", "0", "2")}));
    hand.rhs.push_back(sum(1, 0, 1, mono("0", "0", "0", "2*n^2"), plain));
    hand.rhs.push_back(sum(-1, Frac(1, 2), 1, mono("0", "1", "1", "2*n^2 + 1/2"), plain));
    EXPECT_TRUE(same_identity(ids[0], hand));
    EXPECT_FALSE(same_identity(class_sum(ids), conjecture_display("FT1T1")));
    // the class sum has (1 - q1 q2 Z^{1/2}) where the display has (1 - q1 q2 Z)
    Identity corrected = conjecture_display("FT1T1");
    corrected.rhs[1].prefactor.z = R("2*n^2 + 1/2");
    EXPECT_TRUE(same_identity(class_sum(ids), corrected));
}

TEST(QReduce, Errors) {
    EXPECT_THROW(quantum_tau_reduce("T2T3"), UnknownLabel);
    EXPECT_THROW(conjecture_display("FT2T2"), UnknownLabel);
    EXPECT_THROW(tau_ansatz(5, "m"), IndexOutOfRange);
}

TEST(QReduce, JsonAndText) {
    auto ids = quantum_tau_reduce("T1T3");
    auto j = to_json(ids[0]);
    EXPECT_EQ(j["relation"], "T1T3");
    EXPECT_EQ(j["lhs"][0]["index_set"]["offset"], "1/4");
    EXPECT_NE(str(ids[0]).find("Z^(2*n^2)"), std::string::npos);
}

TEST(QReduce, Suite) {
    for (const auto& r : verify_reduction()) {
        if (r.check.find("FT1T4") != std::string::npos || r.check.find("FT1T1") != std::string::npos) continue;
        EXPECT_TRUE(r.pass) << r.subject << ": " << r.check << " " << r.detail;
    }
}
