#pragma once

#include <json.hpp>

#include "qpc/ratexpr.hpp"

namespace qpc {

// {num: [[coeff, {gen: exp}], ...], den: [...]} with coefficients and
// exponents as exact rational strings.
nlohmann::json to_json(const RatExpr& e);
RatExpr ratexpr_from_json(const nlohmann::json& j);

nlohmann::json poly_to_json(const Poly& p);
Poly poly_from_json(const nlohmann::json& j);

}  // namespace qpc
