#pragma once

#include <json.hpp>

#include <utility>
#include <vector>

#include "qpc/quiver.hpp"
#include "qpc/ratexpr.hpp"
#include "qpc/report.hpp"

namespace qpc {

// A-cluster seed. taus covers every vertex of the extended quiver, unfrozen
// first; frozen entries are single-term and never change.
struct TauSeed {
    ExtQuiver ext;
    std::vector<RatExpr> taus;

    // tau_1..tau_n on unfrozen vertices, the given monomials on frozen ones
    static TauSeed initial(const ExtQuiver& q, const std::vector<RatExpr>& frozen_values);
};

Symbol tau_symbol(int i);  // tau1, tau2, ...

TauSeed mutate_tau(const TauSeed& s, int j);
// Inv negates B and leaves taus alone; the exchange relation is symmetric.
TauSeed apply_word(const TauSeed& s, const GroupWord& w);
bool same_tau_seed(const TauSeed& a, const TauSeed& b);

// y_j = prod_I tau_I^{b_Ij}, j unfrozen
std::vector<RatExpr> y_from_tau(const TauSeed& s);

// rows = 6: tau5 = q^{1/4}, tau6 = Z^{1/4}; rows = 8: symbols q0, z0, q1, z1.
TauSeed a7p_tau_seed(int rows);

// tau1bar tau1und - tau1^2 - Z^{1/2} tau3^2 and the same with 1 <-> 3, bar/und
// being images under T and T^{-1}. Needs the 6-row seed.
std::pair<RatExpr, RatExpr> bilinear_residuals(const TauSeed& s);

// Scalar A7' equation for G built from taus through y_from_tau.
RatExpr tau_scalar_residual(const TauSeed& s);

// Denominator (after expansion) is a single term.
bool is_laurent(const RatExpr& e);

std::vector<CheckResult> verify_tau_layer();

nlohmann::json to_json(const TauSeed& s);

}  // namespace qpc
