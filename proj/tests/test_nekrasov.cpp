#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "oracles/nekrasov_oracle.hpp"
#include "qpc/errors.hpp"
#include "qpc/nekrasov.hpp"

using namespace qpc;

namespace {

mpq_class Q(long n, long d = 1) { return mpq_class(n, d); }

// |x - v| inside the enclosure of x - v
bool encloses(const PrecisionReal& x, const mpq_class& v) {
    PrecisionReal d = x - PrecisionReal::exact(v, x.prec());
    return abs_diff(d, PrecisionReal::exact(0, x.prec())) <= d.err;
}

double err(const PrecisionReal& x) { return x.err.to_double(); }

const NekPoint kPoints[] = {{3, Q(2, 5), Q(3, 7)}, {Q(11, 2), Q(1, 3), Q(5, 7)}, {Q(13, 5), Q(3, 4), Q(2, 7)}};

}  // namespace

TEST(Nekrasov, Partitions) {
    EXPECT_EQ(partitions(0).size(), 1u);
    EXPECT_EQ(partitions(4).size(), 5u);
    EXPECT_EQ(partitions(6).size(), 11u);
    for (const auto& p : partitions(5)) EXPECT_EQ(p.size(), 5);
    Partition l({3, 1});
    EXPECT_EQ(l.col(1), 2);
    EXPECT_EQ(l.col(2), 1);
    EXPECT_EQ(l.row(3), 0);
    EXPECT_THROW(Partition({1, 2}), IndexOutOfRange);
    EXPECT_THROW(Partition({2, 0}), IndexOutOfRange);
}

TEST(Nekrasov, ArmsAndLegs) {
    Partition l({3, 1}), empty, one({1}), row({3});
    EXPECT_EQ(arm(l, {1, 1}), 2);
    EXPECT_EQ(leg(l, {1, 1}), 1);
    // box of mu = [1] measured against an empty lambda
    EXPECT_EQ(arm(empty, {1, 1}), -1);
    EXPECT_EQ(leg(empty, {1, 1}), -1);
    EXPECT_EQ(arm(row, {1, 3}), 0);
    EXPECT_EQ(leg(row, {1, 3}), 0);
    auto [a, g] = arm_leg(l, one, {1, 1});
    EXPECT_EQ(a, 0);
    EXPECT_EQ(g, 1);
}

TEST(Nekrasov, Weights) {
    const mpq_class u = Q(5, 3), q1 = Q(2, 7), q2 = Q(3, 11);
    Partition e, one({1});
    EXPECT_EQ(nek_weight(e, e, u, q1, q2), 1);
    EXPECT_EQ(nek_weight(one, one, u, q1, q2), (1 - u / q2) * (1 - u / q1));
    EXPECT_EQ(nek_weight(one, e, u, q1, q2), 1 - u);
    EXPECT_EQ(nek_weight(e, one, u, q1, q2), 1 - u / (q1 * q2));
}

// exact agreement with the box-set oracle through order 5
TEST(Nekrasov, SeriesMatchesOracle) {
    const std::vector<std::array<mpq_class, 3>> pts{{7, Q(1, 2), Q(1, 3)},      {3, Q(2, 5), Q(3, 7)},
                                                    {Q(11, 2), Q(1, 3), Q(5, 7)}, {Q(13, 5), Q(3, 4), Q(2, 7)},
                                                    {Q(-7, 4), Q(5, 3), Q(2, 9)}, {3, Q(2, 5), Q(5, 2)}};
    for (const auto& p : pts) {
        auto t0 = std::chrono::steady_clock::now();
        NekSeries s = inst_series(p[0], p[1], p[2], 5);
        EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 60.0);
        auto o = oracle::series(p[0], p[1], p[2], 5);
        ASSERT_EQ(s.coeffs.size(), 6u);
        for (int k = 0; k <= 5; ++k) EXPECT_EQ(s.coeffs[k], o[k]) << "order " << k << " at u = " << p[0];
        // pair swap
        EXPECT_EQ(inst_series(1 / p[0], p[1], p[2], 5).coeffs, s.coeffs);
    }
    // value from a separate exact script
    EXPECT_EQ(inst_series(9, Q(1, 2), Q(1, 3), 1).coeffs[1], Q(-21, 106));
}

TEST(Nekrasov, SeriesPoleAndCsv) {
    // N_{[1],empty}(u) = 1 - u vanishes at u = 1
    EXPECT_THROW(inst_series(1, Q(1, 2), Q(1, 3), 1), PoleAtPoint);
    // u q2^2 = 1 hits the pair ([2], [1]) at order 3
    EXPECT_THROW(inst_series(9, Q(1, 2), Q(1, 3), 3), PoleAtPoint);
    EXPECT_THROW(inst_series(0, Q(1, 2), Q(1, 3), 1), PoleAtPoint);
    std::string csv = to_csv(inst_series(9, Q(1, 2), Q(1, 3), 1));
    EXPECT_EQ(csv, "order,numerator,denominator\n0,1,1\n1,-21,106\n");
}

TEST(Nekrasov, PrecisionRealPropagation) {
    const auto bits = bits_for_digits(50);
    PrecisionReal a = PrecisionReal::exact(Q(1, 3), bits), b = PrecisionReal::exact(Q(2, 7), bits);
    EXPECT_TRUE(encloses(a + b, Q(1, 3) + Q(2, 7)));
    EXPECT_TRUE(encloses(a * b, Q(2, 21)));
    EXPECT_TRUE(encloses(a / b, Q(7, 6)));
    EXPECT_TRUE(encloses(exp(log(a)), Q(1, 3)));
    EXPECT_TRUE(encloses(pow(Q(4, 9), Q(3, 2), bits), Q(8, 27)));
    EXPECT_LT(err(a * b), 1e-49);
    EXPECT_THROW(PrecisionReal::exact(0, bits).inv(), DivisionByZero);
}

TEST(Nekrasov, PochhammerBasics) {
    const auto bits = bits_for_digits(50);
    EXPECT_TRUE(encloses(pochhammer(0, {Q(1, 2)}, bits), 1));
    EXPECT_THROW(pochhammer(Q(1, 3), {Q(1, 2), Q(-1)}, bits), BaseOnUnitCircle);
    // (1/2; 1/2) against the partial product; the tail prod_{k>200}(1 - 2^-k) is within 2^-199 of 1
    PrecisionReal p = pochhammer(Q(1, 2), {Q(1, 2)}, bits);
    mpfr_t acc, f;
    mpfr_inits2(bits + 64, acc, f, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ui(acc, 1, MPFR_RNDN);
    for (int k = 1; k <= 200; ++k) {
        mpfr_set_ui_2exp(f, 1, -k, MPFR_RNDN);
        mpfr_ui_sub(f, 1, f, MPFR_RNDN);
        mpfr_mul(acc, acc, f, MPFR_RNDN);
    }
    mpfr_sub(acc, acc, p.value.get(), MPFR_RNDN);
    EXPECT_LT(std::fabs(mpfr_get_d(acc, MPFR_RNDN)), err(p) + 1e-55);
    EXPECT_LT(err(p), 1e-50);
    mpfr_clears(acc, f, static_cast<mpfr_ptr>(nullptr));
}

// (x; t^-1, t2)(x t; t, t2) = 1 at random rational inputs
TEST(Nekrasov, PochhammerInversion) {
    const auto bits = bits_for_digits(60);
    std::mt19937 rng(20261015);
    std::uniform_int_distribution<int> num(1, 40), den(41, 90);
    for (int trial = 0; trial < 12; ++trial) {
        mpq_class x(num(rng) * (trial % 2 ? 3 : -1), den(rng) / 3);
        mpq_class t(num(rng), den(rng)), t2(num(rng), den(rng));
        x.canonicalize(), t.canonicalize(), t2.canonicalize();
        PrecisionReal prod = pochhammer(x, {1 / t, t2}, bits) * pochhammer(x * t, {t, t2}, bits);
        EXPECT_TRUE(encloses(prod, 1)) << x << " " << t << " " << t2;
        EXPECT_LT(err(prod), 1e-55);
        // single base as well
        EXPECT_TRUE(encloses(pochhammer(x, {1 / t}, bits) * pochhammer(x * t, {t}, bits), 1));
    }
}

TEST(Nekrasov, Normalizations) {
    const auto bits = bits_for_digits(60);
    const mpq_class u = Q(7, 3), t1 = Q(4, 25), t2 = Q(15, 14);
    PrecisionReal c = Cq(u, t1, t2, bits), ci = Cq(1 / u, t1, t2, bits);
    PrecisionReal d = c - ci;
    EXPECT_TRUE(abs_diff(d, PrecisionReal::exact(0, bits)) <= d.err);
    EXPECT_TRUE(encloses(cq(u, 1, t1, Q(3, 5), bits), 1));
    // c_q(u|Z) = Z^{-(log u)^2 / (4 log t1 log t2)}, checked at u = t1 where it is Z^{-log t1 / (4 log t2)}
    PrecisionReal direct = exp(log(PrecisionReal::exact(Q(1, 9), bits)) * log(PrecisionReal::exact(Q(1, 4), bits)) /
                               (PrecisionReal::exact(-4, bits) * log(PrecisionReal::exact(Q(1, 2), bits))));
    PrecisionReal via = cq(Q(1, 4), Q(1, 9), Q(1, 4), Q(1, 2), bits);
    PrecisionReal dd = direct - via;
    EXPECT_TRUE(abs_diff(dd, PrecisionReal::exact(0, bits)) <= dd.err);
    // leading coefficient of F^(2) is C_q(u) with the F^(2) parameters
    BlockSeries b = block_series(2, u, Q(2, 5), Q(3, 7), 2, bits);
    EXPECT_EQ(b.series.coeffs[0], 1);
    auto [s1, s2] = block_params(2, Q(2, 5), Q(3, 7));
    EXPECT_EQ(s1, Q(14, 15));
    EXPECT_EQ(s2, Q(9, 49));
    PrecisionReal dc = b.C - Cq(u, s1, s2, bits);
    EXPECT_TRUE(abs_diff(dc, PrecisionReal::exact(0, bits)) <= dc.err);
    EXPECT_THROW(block_params(3, 1, 1), IndexOutOfRange);
}

TEST(Nekrasov, FT1T3BelowLeadingOrderIsEmpty) {
    BilinearReport r = verify_conjecture("FT1T3", kPoints[0], Frac(1, 16), 60);
    EXPECT_TRUE(r.orders.empty());
    EXPECT_TRUE(r.pass);
}

TEST(Nekrasov, PrintedFT1T3AndFT1T2Hold) {
    for (const auto& pt : kPoints) {
        BilinearReport a = verify_conjecture("FT1T3", pt, Frac(17, 8), 120);
        EXPECT_TRUE(a.pass) << to_json(a).dump();
        EXPECT_EQ(a.orders.size(), 3u);
        EXPECT_LT(a.budget.to_double(), 1e-40);
        BilinearReport b = verify_conjecture("FT1T2", pt, Frac(5, 2), 120);
        EXPECT_TRUE(b.pass) << to_json(b).dump();
        EXPECT_EQ(b.orders.size(), 6u);
        EXPECT_LT(b.budget.to_double(), 1e-40);
        EXPECT_FALSE(verify_corrupted(conjecture_display("FT1T2"), pt, Frac(5, 2), 120).pass);
        EXPECT_FALSE(verify_corrupted(conjecture_display("FT1T3"), pt, Frac(17, 8), 120).pass);
    }
}

// printed FT1T1 misses by (1 - q1 q2 Z) vs (1 - q1 q2 Z^{1/2}); the reduced identity holds
TEST(Nekrasov, FT1T1PrintedFailsReducedHolds) {
    const Identity reduced = class_sum(quantum_tau_reduce("T1T1"));
    for (const auto& pt : kPoints) {
        BilinearReport printed = verify_conjecture("FT1T1", pt, Frac(5, 2), 120);
        EXPECT_FALSE(printed.pass);
        // order zero agrees, the mismatch starts at Z^{1/2}
        EXPECT_TRUE(printed.orders.front().pass);
        EXPECT_FALSE(printed.orders[1].pass);
        EXPECT_TRUE(verify_identity(reduced, pt, Frac(5, 2), 120).pass);
        EXPECT_FALSE(verify_corrupted(reduced, pt, Frac(5, 2), 120).pass);
    }
    // the same at q1 q2 = 1
    NekPoint flat{3, Q(2, 5), Q(5, 2)};
    EXPECT_FALSE(verify_conjecture("FT1T1", flat, Frac(2), 120).pass);
    EXPECT_TRUE(verify_identity(reduced, flat, Frac(2), 120).pass);
}

// printed FT1T4 is off by the constant (q1 q2)^{1/4} in both branches
TEST(Nekrasov, FT1T4PrintedFailsReducedHolds) {
    const Identity reduced = class_sum(quantum_tau_reduce("T1T4"));
    for (const auto& pt : kPoints) {
        for (const char* branch : {"FT1T4-plus", "FT1T4-minus"}) {
            BilinearReport printed = verify_conjecture(branch, pt, Frac(17, 8), 120);
            EXPECT_FALSE(printed.pass);
            Identity scaled = conjecture_display(branch);
            scaled.rhs[0].prefactor.q1 = scaled.rhs[0].prefactor.q1 + RatExpr(mpq_class(1, 4));
            scaled.rhs[0].prefactor.q2 = scaled.rhs[0].prefactor.q2 + RatExpr(mpq_class(1, 4));
            EXPECT_TRUE(verify_identity(scaled, pt, Frac(17, 8), 120).pass) << branch;
        }
        EXPECT_TRUE(verify_identity(reduced, pt, Frac(17, 8), 120).pass);
        EXPECT_FALSE(verify_corrupted(reduced, pt, Frac(17, 8), 120).pass);
    }
}

TEST(Nekrasov, BudgetAndErrors) {
    // 30 digits cannot meet a 1e-40 target
    EXPECT_THROW(verify_conjecture("FT1T3", kPoints[0], Frac(17, 8), 30), TruncationBudgetExceeded);
    EXPECT_NO_THROW(verify_conjecture("FT1T3", kPoints[0], Frac(17, 8), 30, 1e-20));
    EXPECT_THROW(verify_conjecture("FT1T3", {-3, Q(2, 5), Q(3, 7)}, Frac(1), 60), StructuralMismatch);
    Identity normalized = conjecture_display("FT1T3");
    normalized.lhs[0].blocks[0].normalized = true;
    EXPECT_THROW(verify_identity(normalized, kPoints[0], Frac(1), 60), StructuralMismatch);
    auto j = to_json(verify_conjecture("FT1T3", kPoints[0], Frac(9, 8), 60));
    EXPECT_EQ(j["orders"].size(), 2u);
    EXPECT_EQ(j["orders"][1]["class"], "1/8");
    EXPECT_EQ(j["truncation"]["max_abs_n"], "3/4");
}

TEST(Nekrasov, ClassicalTau) {
    TauReport r = classical_tau_check({3, Q(2, 7), Q(5, 3)}, 3, 4, 120, {Q(1, 100), Q(1, 10)});
    EXPECT_TRUE(r.pass);
    EXPECT_GE(r.complete_powers.size(), 5u);
    EXPECT_LT(r.budget.to_double(), 1e-40);
    // sampled residual shrinks with the m-cutoff until the Z^5 truncation floor
    for (int z = 0; z < 2; ++z) {
        const auto* s = &r.samples[4 * z];
        EXPECT_GT(s[0].residual1, s[1].residual1);
        EXPECT_GT(s[1].residual1, s[2].residual1);
        EXPECT_LE(s[3].residual1, 1.01 * s[2].residual1);
        EXPECT_GT(s[1].residual2, s[2].residual2);
    }
    // residual at small Z lies far below the tau scale
    EXPECT_LT(r.samples[3].residual1 / r.samples[3].scale, 1e-10);
    // a second point with q > 1
    EXPECT_TRUE(classical_tau_check({Q(5, 2), Q(9, 4), Q(2, 3)}, 3, 4, 120).pass);
    EXPECT_THROW(classical_tau_check({3, 1, 1}, 3, 4, 60), BaseOnUnitCircle);
}
