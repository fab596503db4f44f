#include "qpc/quiver.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <cstring>
#include <numeric>

#include "qpc/errors.hpp"

namespace qpc {

Quiver::Quiver(IntMatrix eps) : eps_(std::move(eps)) {
    const std::size_t n = eps_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (eps_[i].size() != n) throw Error("exchange matrix is not square");
        for (std::size_t j = 0; j < n; ++j)
            if (eps_[i][j] != -eps_[j][i]) throw Error("exchange matrix is not antisymmetric");
    }
}

Quiver Quiver::from_arrows(int n, const std::vector<std::array<int, 3>>& arrows) {
    IntMatrix m(n, std::vector<long>(n, 0));
    for (const auto& [from, to, mult] : arrows) {
        if (from < 1 || from > n || to < 1 || to > n || from == to) throw IndexOutOfRange("bad arrow");
        m[from - 1][to - 1] += mult;
        m[to - 1][from - 1] -= mult;
    }
    return Quiver(std::move(m));
}

namespace {

void check_vertex(int j, int n) {
    if (j < 0 || j >= n)
        throw IndexOutOfRange("vertex " + std::to_string(j + 1) + " outside 1.." + std::to_string(n));
}

// Shared rule for square and extended matrices: rows are any vertices,
// columns unfrozen, and b(j, k) for unfrozen j is read from the same table.
template <class Get>
IntMatrix mutate_rows(int rows, int cols, int j, Get b) {
    IntMatrix out(rows, std::vector<long>(cols, 0));
    for (int i = 0; i < rows; ++i) {
        for (int k = 0; k < cols; ++k) {
            long v = b(i, k);
            if (i == j || k == j) {
                out[i][k] = -v;
            } else {
                long bij = b(i, j), bjk = b(j, k);
                out[i][k] = v + (bij * std::labs(bjk) + bjk * std::labs(bij)) / 2;
            }
        }
    }
    return out;
}

}  // namespace

Quiver mutate_quiver(const Quiver& q, int j) {
    check_vertex(j, q.size());
    return Quiver(mutate_rows(q.size(), q.size(), j, [&](int a, int c) { return q.eps(a, c); }));
}

ExtQuiver mutate_quiver(const ExtQuiver& q, int j) {
    check_vertex(j, q.unfrozen());
    IntMatrix all = mutate_rows(q.total(), q.unfrozen(), j, [&](int a, int c) { return q.b(a, c); });
    ExtQuiver out;
    out.frozen.assign(all.begin() + q.unfrozen(), all.end());
    all.resize(q.unfrozen());
    out.base = Quiver(std::move(all));
    // Lambda is not transported by mutation here; only the base flow uses it.
    out.lambda = std::nullopt;
    return out;
}

Perm perm_compose(const Perm& outer, const Perm& inner) {
    Perm out(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
    return out;
}

Perm perm_inverse(const Perm& p) {
    Perm out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<int>(i);
    return out;
}

bool is_bijection(const Perm& p) {
    std::vector<bool> seen(p.size(), false);
    for (int v : p) {
        if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

std::string perm_to_cycles(const Perm& p) {
    std::string out;
    std::vector<bool> done(p.size(), false);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (done[i] || p[i] == static_cast<int>(i)) continue;
        out += '(';
        std::size_t k = i;
        bool first = true;
        while (!done[k]) {
            done[k] = true;
            if (!first) out += ',';
            out += std::to_string(k + 1);
            first = false;
            k = static_cast<std::size_t>(p[k]);
        }
        out += ')';
    }
    return out.empty() ? "e" : out;
}

Quiver permute_quiver(const Quiver& q, const Perm& p) {
    const int n = q.size();
    if (static_cast<int>(p.size()) != n) throw IndexOutOfRange("permutation size mismatch");
    IntMatrix m(n, std::vector<long>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) m[p[i]][p[k]] = q.eps(i, k);
    return Quiver(std::move(m));
}

ExtQuiver permute_quiver(const ExtQuiver& q, const Perm& p) {
    ExtQuiver out;
    out.base = permute_quiver(q.base, p);
    out.frozen = q.frozen;
    for (std::size_t r = 0; r < q.frozen.size(); ++r)
        for (int k = 0; k < q.unfrozen(); ++k) out.frozen[r][p[k]] = q.frozen[r][k];
    return out;
}

GroupWord GroupWord::mutation(int j) {
    GroupWord w;
    w.atoms.push_back({WordAtom::Kind::Mut, j, {}});
    return w;
}

GroupWord GroupWord::permutation(Perm p) {
    GroupWord w;
    w.atoms.push_back({WordAtom::Kind::Perm, 0, std::move(p)});
    return w;
}

GroupWord GroupWord::inversion() {
    GroupWord w;
    w.atoms.push_back({WordAtom::Kind::Inv, 0, {}});
    return w;
}

GroupWord compose(const GroupWord& outer, const GroupWord& inner) {
    GroupWord w = inner;
    w.atoms.insert(w.atoms.end(), outer.atoms.begin(), outer.atoms.end());
    return w;
}

GroupWord invert_word(const GroupWord& w) {
    GroupWord out;
    for (auto it = w.atoms.rbegin(); it != w.atoms.rend(); ++it) {
        WordAtom a = *it;
        if (a.kind == WordAtom::Kind::Perm) a.perm = perm_inverse(a.perm);
        out.atoms.push_back(std::move(a));
    }
    return out;
}

GroupWord word_power(const GroupWord& w, int k) {
    GroupWord base = k < 0 ? invert_word(w) : w;
    GroupWord out;
    for (int i = 0; i < std::abs(k); ++i) out = compose(base, out);
    return out;
}

namespace {

class WordParser {
public:
    WordParser(const std::string& s, int n, const std::map<std::string, GroupWord>& named)
        : src_(s), n_(n), named_(named) {}

    GroupWord parse_all() {
        GroupWord w = sequence();
        skip();
        if (pos_ != src_.size()) fail("unexpected input");
        return w;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("word: " + why + " at offset " + std::to_string(pos_) + " in \"" + src_ + "\"");
    }

    bool starts(const char* lit) const { return src_.compare(pos_, std::strlen(lit), lit) == 0; }

    void skip() {
        while (pos_ < src_.size()) {
            if (std::isspace(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '*') {
                ++pos_;
            } else if (starts("\xE2\x88\x98")) {  // ring operator
                pos_ += 3;
            } else if (src_[pos_] == 'o' && pos_ + 1 < src_.size() &&
                       !std::isalnum(static_cast<unsigned char>(src_[pos_ + 1])) && src_[pos_ + 1] != '_') {
                ++pos_;
            } else {
                break;
            }
        }
    }

    // Composition order: the rightmost item acts first.
    GroupWord sequence() {
        std::vector<GroupWord> items;
        while (true) {
            skip();
            if (pos_ >= src_.size() || src_[pos_] == ']') break;
            items.push_back(item());
        }
        GroupWord out;
        for (const auto& w : items) out = compose(out, w);
        return out;
    }

    int number() {
        std::size_t b = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (b == pos_) fail("expected a number");
        return std::stoi(src_.substr(b, pos_ - b));
    }

    int vertex(int v) const {
        if (v < 1 || v > n_) throw IndexOutOfRange("vertex " + std::to_string(v) + " outside 1.." + std::to_string(n_));
        return v - 1;
    }

    GroupWord with_power(GroupWord w) {
        if (pos_ < src_.size() && src_[pos_] == '^') {
            ++pos_;
            bool brace = pos_ < src_.size() && src_[pos_] == '{';
            if (brace) ++pos_;
            bool neg = pos_ < src_.size() && src_[pos_] == '-';
            if (neg) ++pos_;
            int k = number();
            if (brace) {
                if (pos_ >= src_.size() || src_[pos_] != '}') fail("missing '}'");
                ++pos_;
            }
            w = word_power(w, neg ? -k : k);
        }
        return w;
    }

    GroupWord item() {
        if (src_[pos_] == '(') return with_power(cycles());
        if (src_[pos_] == '[') {
            ++pos_;
            GroupWord inner = sequence();
            if (pos_ >= src_.size() || src_[pos_] != ']') fail("missing ']'");
            ++pos_;
            return with_power(inner);
        }
        if (starts("\xCE\xBC")) {  // mu
            pos_ += 2;
            return with_power(GroupWord::mutation(vertex(number())));
        }
        if (starts("\xCF\x82")) {  // final sigma
            pos_ += 2;
            return with_power(GroupWord::inversion());
        }
        std::size_t b = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '\''))
            ++pos_;
        std::string id = src_.substr(b, pos_ - b);
        if (id.empty()) fail("unexpected character");
        if (auto it = named_.find(id); it != named_.end()) return with_power(it->second);
        if (id == "inv" || id == "varsigma") return with_power(GroupWord::inversion());
        if (id == "e" || id == "id") return with_power(GroupWord{});
        if (id.size() > 2 && id.compare(0, 2, "mu") == 0 &&
            std::all_of(id.begin() + 2, id.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            return with_power(GroupWord::mutation(vertex(std::stoi(id.substr(2)))));
        throw UnknownLabel("unknown generator '" + id + "'");
    }

    GroupWord cycles() {
        Perm total(n_);
        std::iota(total.begin(), total.end(), 0);
        while (pos_ < src_.size() && src_[pos_] == '(') {
            ++pos_;
            std::vector<int> cyc;
            bool commas = src_.find(',', pos_) < src_.find(')', pos_);
            while (pos_ < src_.size() && src_[pos_] != ')') {
                if (src_[pos_] == ',' || src_[pos_] == ' ') {
                    ++pos_;
                    continue;
                }
                if (commas) {
                    cyc.push_back(vertex(number()));
                } else {
                    if (!std::isdigit(static_cast<unsigned char>(src_[pos_]))) fail("bad cycle");
                    cyc.push_back(vertex(src_[pos_++] - '0'));
                }
            }
            if (pos_ >= src_.size()) fail("missing ')'");
            ++pos_;
            Perm c(n_);
            std::iota(c.begin(), c.end(), 0);
            for (std::size_t i = 0; i < cyc.size(); ++i) c[cyc[i]] = cyc[(i + 1) % cyc.size()];
            std::vector<int> sorted = cyc;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) fail("repeated vertex in cycle");
            total = perm_compose(total, c);
        }
        return GroupWord::permutation(std::move(total));
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int n_;
    const std::map<std::string, GroupWord>& named_;
};

}  // namespace

GroupWord parse_word(const std::string& text, int n, const std::map<std::string, GroupWord>& named) {
    return WordParser(text, n, named).parse_all();
}

std::string word_to_string(const GroupWord& w) {
    if (w.atoms.empty()) return "e";
    std::string out;
    for (auto it = w.atoms.rbegin(); it != w.atoms.rend(); ++it) {
        if (!out.empty()) out += " o ";
        switch (it->kind) {
            case WordAtom::Kind::Mut: out += "mu" + std::to_string(it->vertex + 1); break;
            case WordAtom::Kind::Perm: out += perm_to_cycles(it->perm); break;
            case WordAtom::Kind::Inv: out += "inv"; break;
        }
    }
    return out;
}

Quiver apply_word(const Quiver& q, const GroupWord& w) {
    Quiver cur = q;
    for (const auto& a : w.atoms) {
        switch (a.kind) {
            case WordAtom::Kind::Mut: cur = mutate_quiver(cur, a.vertex); break;
            case WordAtom::Kind::Perm: cur = permute_quiver(cur, a.perm); break;
            case WordAtom::Kind::Inv: {
                IntMatrix m = cur.matrix();
                for (auto& row : m)
                    for (auto& v : row) v = -v;
                cur = Quiver(std::move(m));
                break;
            }
        }
    }
    return cur;
}

std::optional<Perm> quiver_isomorphic(const Quiver& q1, const Quiver& q2) {
    const int n = q1.size();
    if (n > 11) throw TooLarge("isomorphism search limited to 11 vertices");
    if (q2.size() != n) return std::nullopt;
    auto signature = [](const Quiver& q, int i) {
        std::vector<long> row(q.matrix()[i]);
        std::sort(row.begin(), row.end());
        return row;
    };
    std::vector<std::vector<long>> s1(n), s2(n);
    for (int i = 0; i < n; ++i) {
        s1[i] = signature(q1, i);
        s2[i] = signature(q2, i);
    }
    Perm sigma(n, -1);
    std::vector<bool> used(n, false);
    auto extend = [&](auto&& self, int i) -> bool {
        if (i == n) return true;
        for (int c = 0; c < n; ++c) {
            if (used[c] || s1[i] != s2[c]) continue;
            bool ok = true;
            for (int k = 0; k < i && ok; ++k) ok = q1.eps(i, k) == q2.eps(c, sigma[k]);
            if (!ok) continue;
            sigma[i] = c;
            used[c] = true;
            if (self(self, i + 1)) return true;
            used[c] = false;
        }
        return false;
    };
    if (!extend(extend, 0)) return std::nullopt;
    return sigma;
}

namespace {

using Arrows = std::vector<std::array<int, 3>>;

// Single arrows as "from>to" pairs, repeated pairs add up.
Arrows arrows(std::initializer_list<std::pair<int, int>> pairs, int mult = 1) {
    Arrows out;
    for (auto [a, b] : pairs) out.push_back({a, b, mult});
    return out;
}

Arrows operator+(Arrows a, const Arrows& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Quiver base_quiver(const std::string& label) {
    if (label == "A8") return Quiver::from_arrows(3, arrows({{1, 2}, {2, 3}, {3, 1}}, 3));
    if (label == "A7p") return Quiver::from_arrows(4, arrows({{1, 2}, {2, 3}, {3, 4}, {4, 1}}, 2));
    if (label == "A7")
        return Quiver::from_arrows(4, arrows({{1, 2}, {3, 4}}, 2) + arrows({{4, 1}}, 3) +
                                          arrows({{2, 3}, {2, 4}, {1, 3}}));
    if (label == "A6")
        return Quiver::from_arrows(
            5, arrows({{2, 3}, {1, 2}}, 2) + arrows({{3, 4}, {3, 5}, {4, 1}, {5, 1}, {4, 5}, {2, 4}, {5, 2}}));
    if (label == "A5")
        return Quiver::from_arrows(6, arrows({{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 1},
                                              {1, 3}, {3, 5}, {5, 1}, {2, 4}, {4, 6}, {6, 2}}));
    if (label == "A4")
        return Quiver::from_arrows(7, arrows({{2, 4}, {4, 5}, {5, 7}, {7, 1}, {4, 6}, {7, 2}, {6, 2}, {1, 4},
                                              {2, 3}, {5, 6}, {6, 7}, {1, 3}, {3, 5}, {3, 6}, {6, 1}}));
    if (label == "A3")
        return Quiver::from_arrows(8, arrows({{1, 4}, {2, 3}, {3, 6}, {4, 5}, {5, 8}, {6, 7}, {7, 2}, {8, 1},
                                              {1, 3}, {3, 5}, {5, 7}, {7, 1}, {2, 4}, {4, 6}, {6, 8}, {8, 2}}));
    if (label == "A2")
        return Quiver::from_arrows(
            9, arrows({{5, 7}, {8, 1}, {2, 4}, {6, 7}, {6, 8}, {6, 9}, {9, 1}, {9, 2}, {9, 3}, {3, 4}, {3, 5},
                       {3, 6}, {4, 7}, {7, 1}, {1, 4}, {4, 8}, {7, 2}, {1, 5}, {4, 9}, {7, 3}, {1, 6}, {5, 9},
                       {8, 3}, {2, 6}, {5, 8}, {8, 2}, {2, 5}}));
    if (label == "A1") {
        // A=1 A1=2 A2=3 A3=4 C=5 C1=6 B=7 B1=8 B2=9 B3=10
        enum { A = 1, A1, A2, A3, C, C1, B, B1, B2, B3 };
        return Quiver::from_arrows(
            10, arrows({{C1, B},  {B1, A},  {A1, C},  {C, B3},  {B, A3},  {B2, A},  {B2, A1}, {B2, A2},
                        {B2, A3}, {A2, C},  {A2, C1}, {B3, A3}, {A3, C1}, {C1, B3}, {A3, C},  {B3, A2},
                        {B3, A1}, {B3, A},  {C, B},   {B, A},   {A, C},   {C, B1},  {B, A1},  {A, C1},
                        {C, B2},  {B, A2},  {B1, A3}, {C1, B2}, {B1, A2}, {C1, B1}, {B1, A1}, {A1, C1}}));
    }
    if (label == "A0") {
        // A=1 A1..A5=2..6 C=7 C1=8 B=9 B1=10 B2=11
        enum { A = 1, A1, A2, A3, A4, A5, C, C1, B, B1, B2 };
        return Quiver::from_arrows(
            11, arrows({{C1, B},  {B1, A},  {A1, C},  {B, A3},  {B2, A},  {B2, A1}, {B2, A2}, {B2, A3},
                        {A2, C},  {A2, C1}, {A3, C1}, {A3, C},  {C, B},   {B, A},   {A, C},   {C, B1},
                        {B, A1},  {A, C1},  {C, B2},  {B, A2},  {B1, A3}, {C1, B2}, {B1, A2}, {C1, B1},
                        {B1, A1}, {A1, C1}, {A4, C1}, {A4, C},  {B, A4},  {B1, A4}, {B2, A4}, {A5, C1},
                        {A5, C},  {B, A5},  {B1, A5}, {B2, A5}}));
    }
    throw UnknownLabel("no quiver '" + label + "'");
}

}  // namespace

std::vector<std::string> catalog_labels() {
    return {"A8", "A7p", "A7", "A6", "A5", "A4", "A3", "A2", "A1", "A0", "A7p-ext8", "A7p-ext6"};
}

ExtQuiver catalog(const std::string& label) {
    ExtQuiver q;
    if (label == "A7p-ext8") {
        q.base = base_quiver("A7p");
        // frozen q0, z0, q1, z1
        q.frozen = {{1, 0, 1, 0}, {1, -1, 1, -1}, {-1, 0, -1, 0}, {-1, 1, -1, 1}};
        return q;
    }
    if (label == "A7p-ext6") {
        q.base = base_quiver("A7p");
        // frozen tau5 = q^{1/4}, tau6 = Z^{1/4}
        q.frozen = {{2, 0, 2, 0}, {2, -2, 2, -2}};
        q.lambda = IntMatrix{{0, 0, 0, 1, 1, 0},  {0, 0, -1, 0, 1, -1},  {0, 1, 0, 0, 1, 0},
                             {-1, 0, 0, 0, 1, -1}, {-1, -1, -1, -1, 0, 0}, {0, 1, 0, 1, 0, 0}};
        return q;
    }
    q.base = base_quiver(label);
    return q;
}

nlohmann::json to_json(const ExtQuiver& q) {
    nlohmann::json j{{"n", q.unfrozen()}, {"eps", q.base.matrix()}};
    if (!q.frozen.empty()) j["frozen"] = q.frozen;
    if (q.lambda) j["lambda"] = *q.lambda;
    return j;
}

ExtQuiver ext_quiver_from_json(const nlohmann::json& j) {
    ExtQuiver q;
    q.base = Quiver(j.at("eps").get<IntMatrix>());
    if (q.base.size() != j.at("n").get<int>()) throw ParseError("quiver size does not match eps");
    if (j.contains("frozen")) q.frozen = j["frozen"].get<IntMatrix>();
    if (j.contains("lambda")) q.lambda = j["lambda"].get<IntMatrix>();
    for (const auto& row : q.frozen)
        if (static_cast<int>(row.size()) != q.unfrozen()) throw ParseError("frozen row width mismatch");
    return q;
}

}  // namespace qpc
