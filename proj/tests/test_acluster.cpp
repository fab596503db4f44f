#include <gtest/gtest.h>

#include "qpc/acluster.hpp"
#include "qpc/errors.hpp"
#include "qpc/xcluster.hpp"

using namespace qpc;

namespace {

RatExpr P(const std::string& s) { return RatExpr::parse(s); }

void expect_all_pass(const std::vector<CheckResult>& rs) {
    for (const auto& r : rs) EXPECT_TRUE(r.pass) << r.subject << ": " << r.check << " " << r.detail;
}

}  // namespace

TEST(ACluster, SixRowTranslation) {
    TauSeed s = apply_word(a7p_tau_seed(6), painleve_case("A7p").generators.at("T"));
    EXPECT_TRUE(equals(s.taus[0], P("tau2")));
    EXPECT_TRUE(equals(s.taus[1], P("(tau2^2 + q^(1/2)*Z^(1/2)*tau4^2)/tau1")));
    EXPECT_TRUE(equals(s.taus[2], P("tau4")));
    EXPECT_TRUE(equals(s.taus[3], P("(tau4^2 + q^(1/2)*Z^(1/2)*tau2^2)/tau3")));
    // frozen values untouched
    EXPECT_TRUE(equals(s.taus[4], P("q^(1/4)")));
    EXPECT_TRUE(equals(s.taus[5], P("Z^(1/4)")));
}

TEST(ACluster, HandMutationColumnOne) {
    // column 1 of the 6-row B: (0,-2,0,2,2,2)
    TauSeed s = mutate_tau(a7p_tau_seed(6), 0);
    EXPECT_TRUE(equals(s.taus[0], P("(tau4^2*q^(1/2)*Z^(1/2) + tau2^2)/tau1")));
    EXPECT_EQ(s.ext.frozen[0], (std::vector<long>{-2, 4, 2, 0}));
}

TEST(ACluster, MutationInvolution) {
    for (int rows : {6, 8}) {
        TauSeed s = a7p_tau_seed(rows);
        for (int j = 0; j < 4; ++j) EXPECT_TRUE(same_tau_seed(mutate_tau(mutate_tau(s, j), j), s)) << rows << " " << j;
    }
}

TEST(ACluster, FrozenVerticesRejected) {
    TauSeed s = a7p_tau_seed(6);
    EXPECT_THROW(mutate_tau(s, 4), FrozenVertexMutation);
    EXPECT_THROW(mutate_tau(s, 6), IndexOutOfRange);
    EXPECT_THROW(a7p_tau_seed(7), UnknownLabel);
    EXPECT_THROW(TauSeed::initial(catalog("A7p-ext6"), {P("q"), P("1+Z")}), StructuralMismatch);
}

TEST(ACluster, YFromTauColumnOne) {
    auto y = y_from_tau(a7p_tau_seed(6));
    EXPECT_TRUE(equals(y[0], P("tau2^-2*tau4^2*q^(1/2)*Z^(1/2)")));
    // product of the y's only sees frozen rows: column sums (4,-2,4,-2) over q^{1/4}, Z^{1/4}
    RatExpr prod = y[0] * y[1] * y[2] * y[3];
    EXPECT_TRUE(equals(prod, P("q")));
}

TEST(ACluster, Bilinear) {
    auto [r1, r3] = bilinear_residuals(a7p_tau_seed(6));
    EXPECT_TRUE(r1.is_zero()) << r1;
    EXPECT_TRUE(r3.is_zero()) << r3;
    EXPECT_THROW(bilinear_residuals(a7p_tau_seed(8)), StructuralMismatch);
}

TEST(ACluster, BilinearSpecialized) {
    // independent path: evaluate T and T^{-1} images at a rational point by
    // hand from the displayed exchange relations
    mpq_class t1(2, 3), t2(5, 4), t3(7, 5), t4(3, 2), q(16, 81), z(81, 16);
    mpq_class qz = mpq_class(4, 9) * mpq_class(9, 4);  // q^{1/2} Z^{1/2}
    mpq_class bar1 = (t2 * t2 + qz * t4 * t4) / t1;
    auto [r1, r3] = bilinear_residuals(a7p_tau_seed(6));
    std::map<Symbol, mpq_class> pt{{tau_symbol(1), t1}, {tau_symbol(2), t2}, {tau_symbol(3), t3},
                                   {tau_symbol(4), t4}, {Symbol("q"), q}, {Symbol("Z"), z}};
    EXPECT_EQ(r1.specialize(pt), 0);
    EXPECT_EQ(r3.specialize(pt), 0);
    TauSeed s = apply_word(a7p_tau_seed(6), painleve_case("A7p").generators.at("T"));
    EXPECT_EQ(s.taus[1].specialize(pt), bar1);
}

TEST(ACluster, TauLayerChecks) { expect_all_pass(verify_tau_layer()); }

TEST(ACluster, LaurentAlongOrbit) {
    const auto& c = painleve_case("A7p");
    GroupWord t = c.generators.at("T");
    TauSeed s = a7p_tau_seed(6);
    for (int k = 1; k <= 6; ++k) {
        s = apply_word(s, t);
        for (int i = 0; i < 4; ++i) EXPECT_TRUE(is_laurent(s.taus[i])) << "T^" << k << " tau" << i + 1;
    }
    EXPECT_FALSE(is_laurent(P("1/(tau1 + tau2)")));
}

// T acts on the frozen data as Z -> qZ, so the bilinear relation along the
// orbit carries (q^k Z)^{1/2}. Checked at a rational point with square roots.
TEST(ACluster, BilinearAlongOrbit) {
    GroupWord t = painleve_case("A7p").generators.at("T");
    std::vector<TauSeed> orbit{apply_word(a7p_tau_seed(6), invert_word(t)), a7p_tau_seed(6)};
    for (int k = 0; k < 3; ++k) orbit.push_back(apply_word(orbit.back(), t));
    std::map<Symbol, mpq_class> pt{{tau_symbol(1), mpq_class(2, 3)}, {tau_symbol(2), mpq_class(5, 4)},
                                   {tau_symbol(3), mpq_class(7, 5)},  {tau_symbol(4), mpq_class(3, 2)},
                                   {Symbol("q"), mpq_class(16, 81)},  {Symbol("Z"), mpq_class(81, 16)}};
    mpq_class sq = mpq_class(4, 9), sz = mpq_class(9, 4);  // q^{1/2}, Z^{1/2}
    for (int k = 0; k < 3; ++k) {
        auto v = [&](int step, int i) { return orbit[step + 1].taus[i].specialize(pt); };
        mpq_class zk = sz;
        for (int m = 0; m < k; ++m) zk *= sq;
        EXPECT_EQ(v(k - 1, 0) * v(k + 1, 0), v(k, 0) * v(k, 0) + zk * v(k, 2) * v(k, 2)) << k;
        EXPECT_EQ(v(k - 1, 2) * v(k + 1, 2), v(k, 2) * v(k, 2) + zk * v(k, 0) * v(k, 0)) << k;
    }
}

TEST(ACluster, JsonDump) {
    auto j = to_json(a7p_tau_seed(8));
    EXPECT_EQ(j["taus"].size(), 8u);
    EXPECT_EQ(j["taus"][4], "q0");
}
