#include "qpc/qreduce.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "qpc/errors.hpp"
#include "qpc/quiver.hpp"

namespace qpc {

namespace {

RatExpr rat(const Frac& f) { return RatExpr(mpq_class(f.num(), f.den())); }

const Symbol kN("n"), kW("logu"), kZ("logZ"), kL1("logq1"), kL2("logq2");

// q1 -> q1^{3/2} q2^{1/2}, q2 -> q1^{-1/2} q2^{1/2}: moving a to the left
// turns the parameter pair (q1 q2^-1, q2^2) into (q1^2, q1^-1 q2)
QShift phi(const QShift& s) {
    RatExpr h(mpq_class(1, 2));
    return {h * (RatExpr(3) * s.e1 - s.e2), h * (s.e1 + s.e2)};
}

Block phi(const Block& b) {
    if (b.kind != 2) throw StructuralMismatch("a moved past an F^(1) block");
    return {1, phi(b.u), phi(b.z), b.normalized};
}

void phi(ScalarMono& m) {
    QShift q = phi(QShift{m.q1, m.q2});
    m.q1 = q.e1, m.q2 = q.e2;
}

RatExpr subst(const RatExpr& e, const std::map<Symbol, RatExpr>& r) { return e.substitute(r); }

void subst(Block& b, const std::map<Symbol, RatExpr>& r) {
    b.u = {subst(b.u.e1, r), subst(b.u.e2, r)};
    b.z = {subst(b.z.e1, r), subst(b.z.e2, r)};
}

void subst(ScalarMono& m, const std::map<Symbol, RatExpr>& r) {
    m = {subst(m.u, r), subst(m.q1, r), subst(m.q2, r), subst(m.z, r)};
}

bool eq(const QShift& a, const QShift& b) { return equals(a.e1, b.e1) && equals(a.e2, b.e2); }
bool eq(const Block& a, const Block& b) { return a.kind == b.kind && eq(a.u, b.u) && eq(a.z, b.z); }
bool eq(const ScalarMono& a, const ScalarMono& b) {
    return equals(a.u, b.u) && equals(a.q1, b.q1) && equals(a.q2, b.q2) && equals(a.z, b.z);
}
bool eq(const std::vector<Block>& a, const std::vector<Block>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!eq(a[i], b[i])) return false;
    return true;
}

Frac mod1(Frac x) { return x - Frac(x.floor()); }

bool same_set(const SumDescriptor& a, const SumDescriptor& b) {
    if (a.step != b.step) return false;
    Frac d = (a.offset - b.offset) / a.step;
    return d.is_integer();
}

// log c_q(X|Y) = -log Y (log X)^2 / (4 log t1 log t2)
RatExpr cq_log(const Block& b) {
    RatExpr L1 = RatExpr::var(kL1), L2 = RatExpr::var(kL2);
    RatExpr lx = RatExpr::var(kW) + b.u.e1 * L1 + b.u.e2 * L2;
    RatExpr ly = RatExpr::var(kZ) + b.z.e1 * L1 + b.z.e2 * L2;
    RatExpr den = b.kind == 1 ? RatExpr(2) * L1 * (L2 - L1) : (L1 - L2) * RatExpr(2) * L2;
    return -(ly * lx * lx) / (RatExpr(4) * den);
}

RatExpr mono_log(const ScalarMono& m) {
    return m.u * RatExpr::var(kW) + m.q1 * RatExpr::var(kL1) + m.q2 * RatExpr::var(kL2) + m.z * RatExpr::var(kZ);
}

// h linear in the four logs with polynomial coefficients in n
std::optional<ScalarMono> log_monomial(const RatExpr& h) {
    ScalarMono out{RatExpr(0), RatExpr(0), RatExpr(0), RatExpr(0)};
    if (h.is_zero()) return out;
    auto [num, den] = h.num_den();
    auto q = num.divide_exact(den);
    if (!q) return std::nullopt;
    for (const auto& t : q->terms()) {
        std::vector<std::pair<Symbol, RatExpr*>> slots{{kW, &out.u}, {kL1, &out.q1}, {kL2, &out.q2}, {kZ, &out.z}};
        RatExpr* slot = nullptr;
        Monomial rest = t.mono;
        for (auto& [s, p] : slots) {
            Frac e = t.mono.exponent(s);
            if (e.is_zero()) continue;
            if (e != Frac(1) || slot) return std::nullopt;
            slot = p;
            rest = rest / Monomial::var(s);
        }
        if (!slot) return std::nullopt;  // a bare constant is not a monomial factor
        *slot += RatExpr::monomial(t.coeff, rest);
    }
    return out;
}

std::string shift_str(const std::string& base, const QShift& s) {
    std::string out = base;
    if (!s.e1.is_zero()) out += "*q1^(" + s.e1.str() + ")";
    if (!s.e2.is_zero()) out += "*q2^(" + s.e2.str() + ")";
    return out;
}

void sort_blocks(std::vector<Block>& b) {
    std::stable_sort(b.begin(), b.end(), [](const Block& x, const Block& y) { return x.kind < y.kind; });
}

struct Relation {
    std::vector<OpTerm> lhs, rhs;
};

Relation relation_terms(const std::string& rel) {
    auto T = [](int i, const char* idx) { return tau_ansatz(i, idx); };
    if (rel == "T1T1") {
        ScalarMono pz{RatExpr(0), RatExpr(1), RatExpr(1), RatExpr(mpq_class(1, 2))};  // p^2 Z^{1/2}
        return {{multiply(parameter_flow(T(1, "m1"), -1), parameter_flow(T(1, "m2"), 1))},
                {multiply(T(1, "m1"), T(1, "m2")), multiply(scalar_term(1, pz), multiply(T(3, "m1"), T(3, "m2")))}};
    }
    for (int j : {2, 3, 4}) {
        if (rel != "T1T" + std::to_string(j)) continue;
        // T1 Tj = p^{Lambda_1j / 2} Tj T1 with p = (q1 q2)^{1/2}
        long lam = (*catalog("A7p-ext6").lambda)[0][j - 1];
        RatExpr e(mpq_class(lam, 4));
        ScalarMono pl{RatExpr(0), e, e, RatExpr(0)};
        return {{multiply(T(1, "m1"), T(j, "m2"))}, {multiply(scalar_term(1, pl), multiply(T(j, "m1"), T(1, "m2")))}};
    }
    throw UnknownLabel("relation " + rel);
}

SumDescriptor reduce_term(const OpTerm& t, const Frac& k, int base_ipow, const RatExpr& ref_log, RatExpr* log_out) {
    if (t.indices.size() != 2) throw StructuralMismatch("expected a double sum");
    RatExpr n = RatExpr::var(kN), kr = rat(k);
    RatExpr half(mpq_class(1, 2));
    std::map<Symbol, RatExpr> r{{t.indices[0].first, half * kr - n}, {t.indices[1].first, half * kr + n}};
    ScalarMono mono = t.mono;
    subst(mono, r);
    std::vector<Block> blocks = t.blocks;
    for (auto& b : blocks) subst(b, r);
    // u = U q2^{-2k}
    for (auto& b : blocks) b.u.e2 = b.u.e2 - RatExpr(2) * kr;
    mono.q2 = mono.q2 - RatExpr(2) * kr * mono.u;

    RatExpr g = mono_log(mono);
    for (const auto& b : blocks)
        if (b.normalized) g += cq_log(b);
    if (log_out) {
        *log_out = g;
        return {};
    }
    RatExpr h = g - ref_log;
    auto pre = log_monomial(h);
    if (!pre) throw StructuralMismatch("factor is not a monomial: exp(" + h.str() + ")");

    int d = ((t.ipow - base_ipow) % 4 + 4) % 4;
    if (d % 2) throw StructuralMismatch("mixed real and imaginary terms");
    SumDescriptor s;
    s.coeff = d == 2 ? mpq_class(-t.coeff) : t.coeff;
    s.offset = mod1(t.indices[1].second - k / Frac(2));
    s.step = 1;
    s.prefactor = *pre;
    for (auto& b : blocks) b.normalized = false;
    sort_blocks(blocks);
    s.blocks = blocks;
    return s;
}

void merge(std::vector<SumDescriptor>& side) {
    for (std::size_t i = 0; i < side.size(); ++i)
        for (std::size_t j = i + 1; j < side.size(); ++j) {
            auto& a = side[i];
            const auto& b = side[j];
            if (a.step != 1 || b.step != 1 || a.coeff != b.coeff || !eq(a.prefactor, b.prefactor) || !eq(a.blocks, b.blocks))
                continue;
            if (mod1(a.offset - b.offset) != Frac(1, 2)) continue;
            a.step = Frac(1, 2);
            a.offset = mod1(a.offset * Frac(2)) / Frac(2);
            side.erase(side.begin() + static_cast<long>(j));
            j = i;
        }
}

Identity reduce_at(const std::string& rel, const Relation& terms, const Frac& k) {
    const OpTerm& first = terms.lhs.front();
    RatExpr ref;
    reduce_term(first, k, first.ipow, RatExpr(0), &ref);  // log only
    ref = ref.substitute(kN, RatExpr(0));
    Identity id{rel, "s^k with k = " + k.str(), {}, {}};
    for (const auto& t : terms.lhs) id.lhs.push_back(reduce_term(t, k, first.ipow, ref, nullptr));
    for (const auto& t : terms.rhs) id.rhs.push_back(reduce_term(t, k, first.ipow, ref, nullptr));
    merge(id.lhs);
    merge(id.rhs);
    return id;
}

// u -> q^du u, Z -> q^dz Z, applied to every sum
void rescale(Identity& id, const QShift& du, const QShift& dz) {
    for (auto* side : {&id.lhs, &id.rhs})
        for (auto& s : *side) {
            for (auto& b : s.blocks) {
                b.u = {b.u.e1 + du.e1, b.u.e2 + du.e2};
                b.z = {b.z.e1 + dz.e1, b.z.e2 + dz.e2};
            }
            auto& p = s.prefactor;
            p.q1 = p.q1 + du.e1 * p.u + dz.e1 * p.z;
            p.q2 = p.q2 + du.e2 * p.u + dz.e2 * p.z;
        }
}

void flip_n(Identity& id) {
    std::map<Symbol, RatExpr> r{{kN, -RatExpr::var(kN)}};
    for (auto* side : {&id.lhs, &id.rhs})
        for (auto& s : *side) {
            subst(s.prefactor, r);
            for (auto& b : s.blocks) subst(b, r);
            s.offset = -s.offset;
        }
}

// divide by the leading sum's coefficient and n-free prefactor part
void normalize(Identity& id) {
    const SumDescriptor& l = id.lhs.front();
    mpq_class c = l.coeff;
    ScalarMono p0 = l.prefactor;
    subst(p0, {{kN, RatExpr(0)}});
    for (auto* side : {&id.lhs, &id.rhs})
        for (auto& s : *side) {
            s.coeff /= c;
            s.prefactor = {s.prefactor.u - p0.u, s.prefactor.q1 - p0.q1, s.prefactor.q2 - p0.q2, s.prefactor.z - p0.z};
        }
}

bool n_free(const QShift& s) { return !s.e1.depends_on(kN) && !s.e2.depends_on(kN); }

bool sides_match(const std::vector<SumDescriptor>& a, const std::vector<SumDescriptor>& b) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const auto& x : a) {
        bool found = false;
        for (std::size_t j = 0; j < b.size() && !found; ++j) {
            const auto& y = b[j];
            if (used[j] || x.coeff != y.coeff || !same_set(x, y) || !eq(x.prefactor, y.prefactor) || !eq(x.blocks, y.blocks))
                continue;
            used[j] = found = true;
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace

Identity class_sum(const std::vector<Identity>& ids) {
    if (ids.empty()) throw StructuralMismatch("no identities to add");
    Identity out{ids.front().relation, "sum over s-power classes", {}, {}};
    for (const auto& id : ids) {
        out.lhs.insert(out.lhs.end(), id.lhs.begin(), id.lhs.end());
        out.rhs.insert(out.rhs.end(), id.rhs.begin(), id.rhs.end());
    }
    merge(out.lhs);
    merge(out.rhs);
    return out;
}

OpTerm tau_ansatz(int i, const std::string& index) {
    if (i < 1 || i > 4) throw IndexOutOfRange("T" + std::to_string(i));
    RatExpr m = RatExpr::var(index);
    OpTerm t;
    t.a = 1;
    t.b = (i == 2 || i == 4) ? 1 : 0;
    t.ipow = (i >= 3) ? 1 : 0;
    t.s = m;
    t.mono = {RatExpr(0), RatExpr(0), RatExpr(0), RatExpr(0)};
    t.blocks.push_back({2, {RatExpr(0), RatExpr(4) * m}, {RatExpr(0), RatExpr(t.b ? 2 : 0)}, true});
    t.indices.emplace_back(Symbol(index), i >= 3 ? Frac(1, 2) : Frac(0));
    return t;
}

OpTerm scalar_term(const mpq_class& c, const ScalarMono& m) {
    OpTerm t;
    t.coeff = c;
    t.mono = m;
    return t;
}

OpTerm multiply(const OpTerm& l, const OpTerm& r) {
    if (r.a < 0) throw StructuralMismatch("negative power of a");
    OpTerm out;
    out.coeff = l.coeff * r.coeff;
    out.ipow = l.ipow + r.ipow;
    out.a = l.a + r.a;
    out.b = l.b + r.b;
    out.s = l.s + r.s;
    ScalarMono m = l.mono;
    std::vector<Block> lb = l.blocks;
    for (int i = 0; i < r.a; ++i) {
        phi(m);
        for (auto& b : lb) b = phi(b);
    }
    // f(Z) b = b f(p^2 Z), p^2 = q1 q2
    RatExpr rb(r.b);
    for (auto& b : lb) b.z = {b.z.e1 + rb, b.z.e2 + rb};
    m.q1 = m.q1 + rb * m.z;
    m.q2 = m.q2 + rb * m.z;
    // f(u) s^k = s^k f(p^{4k} u)
    RatExpr two_s = RatExpr(2) * r.s;
    for (auto& b : lb) b.u = {b.u.e1 + two_s, b.u.e2 + two_s};
    m.q1 = m.q1 + two_s * m.u;
    m.q2 = m.q2 + two_s * m.u;
    out.mono = {m.u + r.mono.u, m.q1 + r.mono.q1, m.q2 + r.mono.q2, m.z + r.mono.z};
    out.blocks = lb;
    out.blocks.insert(out.blocks.end(), r.blocks.begin(), r.blocks.end());
    out.indices = l.indices;
    out.indices.insert(out.indices.end(), r.indices.begin(), r.indices.end());
    return out;
}

OpTerm parameter_flow(const OpTerm& t, int dir) {
    OpTerm out = t;
    out.b += dir * t.a;
    RatExpr d(2 * dir);
    for (auto& b : out.blocks) b.z.e2 = b.z.e2 + d;
    out.mono.q2 = out.mono.q2 + d * out.mono.z;
    return out;
}

std::vector<Identity> quantum_tau_reduce(const std::string& relation) {
    Relation terms = relation_terms(relation);
    const OpTerm& f = terms.lhs.front();
    Frac kclass = mod1(f.indices[0].second + f.indices[1].second);
    for (const auto* side : {&terms.lhs, &terms.rhs})
        for (const auto& t : *side) {
            if (t.a != f.a || t.b != f.b) throw StructuralMismatch("a, b powers differ between terms of " + relation);
            if (!equals(t.s, RatExpr::var(t.indices[0].first) + RatExpr::var(t.indices[1].first)))
                throw StructuralMismatch("s power is not the index sum");
            if (mod1(t.indices[0].second + t.indices[1].second) != kclass)
                throw StructuralMismatch("s-power classes differ between terms of " + relation);
        }
    return {reduce_at(relation, terms, kclass), reduce_at(relation, terms, kclass + Frac(1))};
}

Identity conjecture_display(const std::string& name) {
    RatExpr n = RatExpr::var(kN), z0(0);
    RatExpr n2 = n * n;
    auto blocks = [&](RatExpr z1, RatExpr z2) {
        return std::vector<Block>{{1, {RatExpr(4) * n, z0}, {z1, z0}, false}, {2, {z0, RatExpr(4) * n}, {z0, z2}, false}};
    };
    auto sum = [](mpq_class c, Frac off, Frac step, ScalarMono pre, std::vector<Block> b) {
        return SumDescriptor{c, off, step, pre, b};
    };
    ScalarMono gauss{z0, z0, z0, RatExpr(2) * n2};
    if (name == "FT1T3") {
        return {name, "", {sum(1, Frac(1, 4), 1, gauss, blocks(z0, z0))}, {sum(1, Frac(3, 4), 1, gauss, blocks(z0, z0))}};
    }
    ScalarMono up{n, RatExpr(2) * n2, RatExpr(2) * n2, RatExpr(2) * n2};
    ScalarMono down{-n, RatExpr(-2) * n2, RatExpr(-2) * n2, RatExpr(2) * n2};
    if (name == "FT1T4-plus" || name == "FT1T4-minus") {
        Frac l = name == "FT1T4-plus" ? Frac(1, 4) : Frac(3, 4);
        Frac r = name == "FT1T4-plus" ? Frac(3, 4) : Frac(1, 4);
        return {name, "", {sum(1, l, 1, up, blocks(RatExpr(1), RatExpr(1)))}, {sum(1, r, 1, down, blocks(RatExpr(-1), RatExpr(-1)))}};
    }
    if (name == "FT1T2") {
        return {name, "", {sum(1, 0, Frac(1, 2), up, blocks(RatExpr(1), RatExpr(1)))},
                {sum(1, 0, Frac(1, 2), down, blocks(RatExpr(-1), RatExpr(-1)))}};
    }
    if (name == "FT1T1") {
        ScalarMono lhs{RatExpr(2) * n, RatExpr(4) * n2, RatExpr(4) * n2, RatExpr(2) * n2};
        ScalarMono shifted{z0, RatExpr(1), RatExpr(1), RatExpr(2) * n2 + RatExpr(1)};
        return {name, "", {sum(1, 0, Frac(1, 2), lhs, blocks(RatExpr(2), RatExpr(2)))},
                {sum(1, 0, Frac(1, 2), gauss, blocks(z0, z0)), sum(-1, 0, Frac(1, 2), shifted, blocks(z0, z0))}};
    }
    throw UnknownLabel("display " + name);
}

bool same_identity(const Identity& a, const Identity& b, std::string* why) {
    if (a.lhs.empty() || b.lhs.empty()) return false;
    for (int swap = 0; swap < 2; ++swap)
        for (int flip = 0; flip < 2; ++flip) {
            Identity x = a, y = b;
            if (swap) std::swap(x.lhs, x.rhs);
            if (flip) flip_n(x);
            const Block& bx = x.lhs.front().blocks.front();
            const Block& by = y.lhs.front().blocks.front();
            QShift du{by.u.e1 - bx.u.e1, by.u.e2 - bx.u.e2}, dz{by.z.e1 - bx.z.e1, by.z.e2 - bx.z.e2};
            if (!n_free(du) || !n_free(dz)) continue;
            rescale(x, du, dz);
            normalize(x);
            normalize(y);
            if (sides_match(x.lhs, y.lhs) && sides_match(x.rhs, y.rhs)) return true;
        }
    if (why) *why = "derived " + str(a) + " ; printed " + str(b);
    return false;
}

std::string str(const SumDescriptor& s) {
    std::ostringstream os;
    os << "sum_{n in " << (s.step == Frac(1) ? "" : s.step.str() + "*") << "Z";
    if (!s.offset.is_zero()) os << "+" << s.offset.str();
    os << "} ";
    if (s.coeff != 1) os << "(" << s.coeff.get_str() << ")*";
    const auto& p = s.prefactor;
    std::vector<std::pair<std::string, const RatExpr*>> parts{{"u", &p.u}, {"q1", &p.q1}, {"q2", &p.q2}, {"Z", &p.z}};
    for (const auto& [name, e] : parts)
        if (!e->is_zero()) os << name << "^(" << e->str() << ")*";
    for (std::size_t i = 0; i < s.blocks.size(); ++i) {
        const Block& b = s.blocks[i];
        os << (i ? "*" : "") << "F" << b.kind << "(" << shift_str("u", b.u) << "|" << shift_str("Z", b.z) << ")";
    }
    return os.str();
}

std::string str(const Identity& id) {
    auto side = [](const std::vector<SumDescriptor>& v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " + " : "") + str(v[i]);
        return out;
    };
    return side(id.lhs) + " = " + side(id.rhs);
}

nlohmann::json to_json(const Identity& id) {
    auto sum_json = [](const SumDescriptor& s) {
        nlohmann::json blocks = nlohmann::json::array();
        for (const auto& b : s.blocks)
            blocks.push_back({{"kind", b.kind},
                              {"u_shift", {b.u.e1.str(), b.u.e2.str()}},
                              {"Z_shift", {b.z.e1.str(), b.z.e2.str()}}});
        return nlohmann::json{{"index_set", {{"step", s.step.str()}, {"offset", s.offset.str()}}},
                              {"coefficient", s.coeff.get_str()},
                              {"prefactor", {{"u", s.prefactor.u.str()}, {"q1", s.prefactor.q1.str()},
                                             {"q2", s.prefactor.q2.str()}, {"Z", s.prefactor.z.str()}}},
                              {"blocks", blocks}};
    };
    nlohmann::json l = nlohmann::json::array(), r = nlohmann::json::array();
    for (const auto& s : id.lhs) l.push_back(sum_json(s));
    for (const auto& s : id.rhs) r.push_back(sum_json(s));
    return {{"relation", id.relation}, {"s_class", id.s_class}, {"lhs", l}, {"rhs", r}, {"text", str(id)}};
}

std::vector<CheckResult> verify_reduction() {
    std::vector<CheckResult> out;
    const std::vector<std::pair<std::string, std::vector<std::string>>> table{
        {"T1T3", {"FT1T3"}}, {"T1T4", {"FT1T4-plus", "FT1T4-minus"}}, {"T1T2", {"FT1T2"}}, {"T1T1", {"FT1T1"}}};
    for (const auto& [rel, displays] : table) {
        std::vector<Identity> ids;
        try {
            ids = quantum_tau_reduce(rel);
        } catch (const Error& e) {
            out.push_back({rel, "reduction runs", false, "paper", e.what()});
            continue;
        }
        // the identity only depends on the class of the s-power
        Relation terms = relation_terms(rel);
        Frac k0 = mod1(terms.lhs.front().indices[0].second + terms.lhs.front().indices[1].second);
        bool periodic = true;
        for (int c = 0; c < 2; ++c)
            periodic = periodic && same_identity(reduce_at(rel, terms, k0 + Frac(c + 2)), ids[c]);
        out.push_back({rel, "identity depends only on the s-power class", periodic, "derived", ""});
        for (const auto& d : displays) {
            Identity shown = conjecture_display(d);
            std::string why;
            bool hit = false;
            for (const auto& id : ids) hit = hit || same_identity(id, shown, &why);
            // (1/2)Z index sets: the display is the sum over both s-power
            // classes, split again by the fractional power of Z
            hit = hit || same_identity(class_sum(ids), shown, &why);
            std::string detail;
            if (!hit) {
                detail = "derived:";
                for (const auto& id : ids) detail += " [" + id.s_class + "] " + str(id) + ";";
                detail += " printed: " + str(shown);
            }
            out.push_back({rel, "reduces to the " + d + " display", hit, "paper", detail});
        }
    }
    // a sign-corrupted display must not be matched
    Identity bad = conjecture_display("FT1T3");
    bad.rhs.front().coeff = -1;
    bool rejected = true;
    for (const auto& id : quantum_tau_reduce("T1T3")) rejected = rejected && !same_identity(id, bad);
    out.push_back({"T1T3", "sign-corrupted display is rejected", rejected, "control", ""});

    // q1 q2 = 1 collapses the two parameter pairs
    RatExpr q2 = RatExpr::var("q2"), q1 = q2.inv();
    bool collapse = equals(q1 * q1, q1 * q2.inv()) && equals(q1.inv() * q2, q2 * q2);
    out.push_back({"F1/F2", "parameter pairs coincide at q1 q2 = 1", collapse, "derived", ""});
    return out;
}

}  // namespace qpc
