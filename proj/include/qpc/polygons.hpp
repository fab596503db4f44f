#pragma once

#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpc/ratexpr.hpp"
#include "qpc/report.hpp"

namespace qpc {

using LatticePoint = std::array<long, 2>;
using IntMat2 = std::array<std::array<long, 2>, 2>;

// Convex lattice polygon; vertices counterclockwise, no collinear triples.
// Built as the convex hull of the given points (the Newton polygon of a
// support), so boundary points listed between vertices are dropped.
class LatticePolygon {
public:
    explicit LatticePolygon(const std::vector<LatticePoint>& points);

    const std::vector<LatticePoint>& vertices() const { return v_; }
    // every lattice point of the closed polygon
    std::vector<LatticePoint> lattice_points() const;
    bool contains(const LatticePoint& p, bool strict = false) const;

private:
    std::vector<LatticePoint> v_;
};

struct PolygonInvariants {
    long twice_area = 0;  // 2S
    long boundary = 0;    // B
    long interior = 0;    // g
};

PolygonInvariants invariants(const LatticePolygon& p);

// p -> M p + shift with det M = 1
struct AffineMap {
    IntMat2 M{{{1, 0}, {0, 1}}};
    LatticePoint shift{0, 0};
};

LatticePoint apply(const AffineMap& g, const LatticePoint& p);
LatticePolygon apply(const AffineMap& g, const LatticePolygon& p);

// Canonical vertex list under SL(2,Z) x Z^2.
std::vector<LatticePoint> normal_form(const LatticePolygon& p);
// A map with g(p1) = p2 as vertex sets, if the polygons are equivalent.
std::optional<AffineMap> sa2z_equivalent(const LatticePolygon& p1, const LatticePolygon& p2);

// the 16 reflexive polygons: 3, 4a, 4b, 4c, 5a, 5b, 6a, 6b, 6c, 6d, 7a, 7b, 8a, 8b, 8c, 9
std::vector<std::string> polygon_labels();
LatticePolygon polygon(const std::string& label);
std::optional<std::string> classify(const LatticePolygon& p);

// B boundary points -> A_{11-B}; at B = 4, 4a and 4c give A7p and 4b gives A7
std::string quiver_for_polygon(const std::string& label);

// sum over lattice points (a,b) of lambda^a mu^b a_{a,b}
RatExpr spectral_poly(const LatticePolygon& p, const std::string& lambda = "lambda", const std::string& mu = "mu");
RatExpr spectral_poly(const std::string& label);
std::string coeff_name(long a, long b);  // "a_{a,b}"

// f_4a under lambda -> l (a_{-1,0} + a_{0,1} l m), mu -> m / (a_{-1,0} + a_{0,1} l m)
RatExpr transformed_4a();
RatExpr displayed_4c();
bool verify_4a_to_4c();

nlohmann::json to_json(const LatticePolygon& p);
nlohmann::json polygon_catalog_json();

std::vector<CheckResult> verify_polygons();

}  // namespace qpc
