#include "qpc/polygons.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "qpc/errors.hpp"
#include "qpc/quiver.hpp"

namespace qpc {

namespace {

long cross(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// x, y with a x + b y = gcd(a, b) > 0
long ext_gcd(long a, long b, long& x, long& y) {
    long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        long q = floor_div(a, b), r = a - q * b;
        a = b;
        b = r;
        long t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) a = -a, x0 = -x0, y0 = -y0;
    x = x0;
    y = y0;
    return a;
}

IntMat2 mul(const IntMat2& A, const IntMat2& B) {
    IntMat2 C{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) C[i][j] = A[i][0] * B[0][j] + A[i][1] * B[1][j];
    return C;
}

IntMat2 inverse(const IntMat2& A) { return {{{A[1][1], -A[0][1]}, {-A[1][0], A[0][0]}}}; }

LatticePoint mulv(const IntMat2& A, const LatticePoint& p) {
    return {A[0][0] * p[0] + A[0][1] * p[1], A[1][0] * p[0] + A[1][1] * p[1]};
}

// Map normalizing the polygon at vertex k: v_k to the origin, the edge
// v_k -> v_{k+1} along +x, the previous vertex to 0 <= x < y.
AffineMap chart(const std::vector<LatticePoint>& v, std::size_t k) {
    const std::size_t n = v.size();
    const LatticePoint& o = v[k];
    const LatticePoint& nx = v[(k + 1) % n];
    const LatticePoint& pv = v[(k + n - 1) % n];
    long a = nx[0] - o[0], b = nx[1] - o[1];
    long g = std::gcd(a, b);
    a /= g;
    b /= g;
    long x, y;
    ext_gcd(a, b, x, y);
    IntMat2 M{{{x, y}, {-b, a}}};
    LatticePoint w = mulv(M, {pv[0] - o[0], pv[1] - o[1]});
    // convex and counterclockwise, so w[1] > 0
    long k_shear = floor_div(-w[0], w[1]);
    if (w[0] + k_shear * w[1] < 0) ++k_shear;
    M = mul(IntMat2{{{1, k_shear}, {0, 1}}}, M);
    LatticePoint m = mulv(M, o);
    return {M, {-m[0], -m[1]}};
}

std::vector<LatticePoint> image_sorted(const AffineMap& g, const std::vector<LatticePoint>& v) {
    std::vector<LatticePoint> out;
    out.reserve(v.size());
    for (const auto& p : v) out.push_back(apply(g, p));
    std::sort(out.begin(), out.end());
    return out;
}

// best chart and its image
std::pair<AffineMap, std::vector<LatticePoint>> canonical(const LatticePolygon& p) {
    const auto& v = p.vertices();
    std::pair<AffineMap, std::vector<LatticePoint>> best;
    for (std::size_t k = 0; k < v.size(); ++k) {
        AffineMap g = chart(v, k);
        auto img = image_sorted(g, v);
        if (k == 0 || img < best.second) best = {g, std::move(img)};
    }
    return best;
}

struct CatalogEntry {
    const char* label;
    std::vector<LatticePoint> points;
};

const std::vector<CatalogEntry>& entries() {
    static const std::vector<CatalogEntry> e{
        {"3", {{0, 1}, {1, 0}, {-1, -1}}},
        {"4a", {{0, 1}, {1, 0}, {0, -1}, {-1, 0}}},
        {"4b", {{0, 1}, {1, 0}, {-1, -1}, {-1, 0}}},
        {"4c", {{0, 1}, {1, 0}, {-2, -1}, {-1, 0}}},
        {"5a", {{0, 1}, {1, 1}, {1, 0}, {0, -1}, {-1, 0}}},
        {"5b", {{0, 1}, {1, 0}, {-1, -1}, {-1, 0}, {-1, 1}}},
        {"6a", {{0, 1}, {1, 1}, {1, 0}, {0, -1}, {-1, -1}, {-1, 0}}},
        {"6b", {{0, 1}, {1, 1}, {1, 0}, {-1, -1}, {-1, 0}, {-1, 1}}},
        {"6c", {{0, 1}, {1, 1}, {1, 0}, {0, -1}, {-1, 0}, {-1, 1}}},
        {"6d", {{0, 1}, {1, 0}, {-1, -1}, {-1, 0}, {-1, 1}, {-1, 2}}},
        {"7a", {{0, 1}, {1, 0}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {-1, 2}}},
        {"7b", {{0, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}}},
        {"8a", {{0, 1}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {-1, 2}, {-1, 3}}},
        {"8b", {{0, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {-1, 2}}},
        {"8c", {{0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}}},
        {"9", {{0, 1}, {1, 0}, {2, -1}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {-1, 2}}},
    };
    return e;
}

const CatalogEntry& entry(const std::string& label) {
    for (const auto& e : entries())
        if (label == e.label) return e;
    throw UnknownLabel("polygon " + label);
}

RatExpr A(long a, long b) { return RatExpr::var(coeff_name(a, b)); }

}  // namespace

LatticePolygon::LatticePolygon(const std::vector<LatticePoint>& points) {
    std::vector<LatticePoint> p = points;
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) throw DegeneratePolygon("fewer than three distinct points");
    // monotone chain, strict turns only
    std::vector<LatticePoint> h(2 * p.size());
    std::size_t k = 0;
    for (const auto& x : p) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], x) <= 0) --k;
        h[k++] = x;
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    if (h.size() < 3) throw DegeneratePolygon("all points collinear");
    v_ = std::move(h);
}

bool LatticePolygon::contains(const LatticePoint& p, bool strict) const {
    const std::size_t n = v_.size();
    for (std::size_t i = 0; i < n; ++i) {
        long c = cross(v_[i], v_[(i + 1) % n], p);
        if (c < 0 || (strict && c == 0)) return false;
    }
    return true;
}

std::vector<LatticePoint> LatticePolygon::lattice_points() const {
    long x0 = v_[0][0], x1 = x0, y0 = v_[0][1], y1 = y0;
    for (const auto& p : v_) {
        x0 = std::min(x0, p[0]);
        x1 = std::max(x1, p[0]);
        y0 = std::min(y0, p[1]);
        y1 = std::max(y1, p[1]);
    }
    std::vector<LatticePoint> out;
    for (long x = x0; x <= x1; ++x)
        for (long y = y0; y <= y1; ++y)
            if (contains({x, y})) out.push_back({x, y});
    return out;
}

PolygonInvariants invariants(const LatticePolygon& p) {
    const auto& v = p.vertices();
    const std::size_t n = v.size();
    PolygonInvariants r;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % n];
        r.twice_area += a[0] * b[1] - a[1] * b[0];
        r.boundary += std::gcd(b[0] - a[0], b[1] - a[1]);
    }
    // Pick: S = g + B/2 - 1
    r.interior = (r.twice_area - r.boundary + 2) / 2;
    return r;
}

LatticePoint apply(const AffineMap& g, const LatticePoint& p) {
    LatticePoint m = mulv(g.M, p);
    return {m[0] + g.shift[0], m[1] + g.shift[1]};
}

LatticePolygon apply(const AffineMap& g, const LatticePolygon& p) {
    std::vector<LatticePoint> img;
    for (const auto& x : p.vertices()) img.push_back(apply(g, x));
    return LatticePolygon(img);
}

std::vector<LatticePoint> normal_form(const LatticePolygon& p) { return canonical(p).second; }

std::optional<AffineMap> sa2z_equivalent(const LatticePolygon& p1, const LatticePolygon& p2) {
    auto [g1, n1] = canonical(p1);
    auto [g2, n2] = canonical(p2);
    if (n1 != n2) return std::nullopt;
    // g2^-1 g1
    IntMat2 inv2 = inverse(g2.M);
    AffineMap g;
    g.M = mul(inv2, g1.M);
    LatticePoint t = mulv(inv2, {g1.shift[0] - g2.shift[0], g1.shift[1] - g2.shift[1]});
    g.shift = t;
    return g;
}

std::vector<std::string> polygon_labels() {
    std::vector<std::string> out;
    for (const auto& e : entries()) out.emplace_back(e.label);
    return out;
}

LatticePolygon polygon(const std::string& label) { return LatticePolygon(entry(label).points); }

std::optional<std::string> classify(const LatticePolygon& p) {
    auto nf = normal_form(p);
    for (const auto& e : entries())
        if (normal_form(LatticePolygon(e.points)) == nf) return std::string(e.label);
    return std::nullopt;
}

std::string quiver_for_polygon(const std::string& label) {
    long B = invariants(polygon(label)).boundary;
    if (B == 4) return label == "4b" ? "A7" : "A7p";
    return "A" + std::to_string(11 - B);
}

std::string coeff_name(long a, long b) { return "a_{" + std::to_string(a) + "," + std::to_string(b) + "}"; }

RatExpr spectral_poly(const LatticePolygon& p, const std::string& lambda, const std::string& mu) {
    std::vector<RatExpr> terms;
    for (const auto& [a, b] : p.lattice_points())
        terms.push_back(RatExpr::var(lambda, Frac(a)) * RatExpr::var(mu, Frac(b)) * A(a, b));
    return RatExpr::sum(terms);
}

RatExpr spectral_poly(const std::string& label) { return spectral_poly(polygon(label)); }

RatExpr transformed_4a() {
    RatExpr f = spectral_poly("4a");
    RatExpr l = RatExpr::var("lt"), m = RatExpr::var("mt");
    RatExpr shift = A(-1, 0) + A(0, 1) * l * m;
    return f.substitute({{Symbol("lambda"), l * shift}, {Symbol("mu"), m / shift}});
}

RatExpr displayed_4c() {
    RatExpr l = RatExpr::var("lt"), m = RatExpr::var("mt");
    return A(0, 1) * A(1, 0) * l * l * m + (A(0, -1) * A(0, 1) + A(-1, 0) * A(1, 0)) * l + A(0, 0) +
           A(-1, 0) * A(0, -1) / m + l.inv();
}

bool verify_4a_to_4c() { return equals(transformed_4a(), displayed_4c()); }

nlohmann::json to_json(const LatticePolygon& p) {
    auto inv = invariants(p);
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : p.vertices()) verts.push_back({v[0], v[1]});
    return {{"vertices", verts}, {"twice_area", inv.twice_area}, {"boundary", inv.boundary},
            {"interior", inv.interior}};
}

nlohmann::json polygon_catalog_json() {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& label : polygon_labels()) {
        auto j = to_json(polygon(label));
        j["label"] = label;
        j["quiver"] = quiver_for_polygon(label);
        out.push_back(j);
    }
    return out;
}

namespace {

// Newton polygon of a Laurent polynomial in lt, mt
LatticePolygon support_polygon(const RatExpr& e) {
    auto [num, den] = e.num_den();
    if (!den.is_monomial()) throw StructuralMismatch("not a Laurent polynomial");
    Symbol l("lt"), m("mt");
    Monomial d = den.leading().mono;
    std::map<LatticePoint, int> seen;
    for (const auto& t : num.terms()) {
        Frac a = t.mono.exponent(l) - d.exponent(l), b = t.mono.exponent(m) - d.exponent(m);
        if (!a.is_integer() || !b.is_integer()) throw StructuralMismatch("fractional exponent");
        seen[{static_cast<long>(a.num()), static_cast<long>(b.num())}] = 1;
    }
    std::vector<LatticePoint> pts;
    for (const auto& [p, _] : seen) pts.push_back(p);
    return LatticePolygon(pts);
}

}  // namespace

std::vector<CheckResult> verify_polygons() {
    std::vector<CheckResult> out;
    auto labels = polygon_labels();
    for (const auto& label : labels) {
        auto inv = invariants(polygon(label));
        bool ok = inv.interior == 1 && inv.boundary == static_cast<long>(label[0] - '0');
        out.push_back({label, "g = 1 and B matches label", ok, "paper",
                       "2S=" + std::to_string(inv.twice_area) + " B=" + std::to_string(inv.boundary) +
                           " g=" + std::to_string(inv.interior)});
    }
    bool distinct = true;
    std::string clash;
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j)
            if (sa2z_equivalent(polygon(labels[i]), polygon(labels[j]))) {
                distinct = false;
                clash = labels[i] + "~" + labels[j];
            }
    out.push_back({"catalog", "pairwise SA(2,Z)-inequivalent", distinct, "paper", clash});
    for (const auto& label : labels) {
        std::string q = quiver_for_polygon(label);
        ExtQuiver eq = catalog(q);
        long B = invariants(polygon(label)).boundary;
        bool ok = eq.unfrozen() == B && invariants(polygon(label)).twice_area == B;
        out.push_back({label, "quiver " + q + " has B vertices", ok, "derived",
                       "vertices=" + std::to_string(eq.unfrozen())});
    }
    out.push_back({"4a", "4a -> 4c substitution", verify_4a_to_4c(), "paper", displayed_4c().str()});
    auto c = classify(support_polygon(displayed_4c()));
    out.push_back({"4c", "transformed support is 4c", c && *c == "4c", "derived", c ? *c : "none"});
    return out;
}

}  // namespace qpc
