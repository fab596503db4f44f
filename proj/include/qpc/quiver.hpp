#pragma once

#include <json.hpp>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qpc {

using IntMatrix = std::vector<std::vector<long>>;

// Antisymmetric exchange matrix; eps(i, j) counts arrows i -> j.
// Vertices are 0-based in the API and 1-based in any text form.
class Quiver {
public:
    Quiver() = default;
    explicit Quiver(IntMatrix eps);
    // Arrows given 1-based as (from, to, multiplicity).
    static Quiver from_arrows(int n, const std::vector<std::array<int, 3>>& arrows);

    int size() const { return static_cast<int>(eps_.size()); }
    long eps(int i, int j) const { return eps_[i][j]; }
    const IntMatrix& matrix() const { return eps_; }

    friend bool operator==(const Quiver&, const Quiver&) = default;

private:
    IntMatrix eps_;
};

// Base quiver plus frozen rows b_{Ij} (I frozen, j unfrozen) and an optional
// form Lambda on all vertices, unfrozen first.
struct ExtQuiver {
    Quiver base;
    IntMatrix frozen;
    std::optional<IntMatrix> lambda;

    int unfrozen() const { return base.size(); }
    int total() const { return base.size() + static_cast<int>(frozen.size()); }
    long b(int row, int col) const { return row < unfrozen() ? base.eps(row, col) : frozen[row - unfrozen()][col]; }

    friend bool operator==(const ExtQuiver&, const ExtQuiver&) = default;
};

Quiver mutate_quiver(const Quiver& q, int j);
ExtQuiver mutate_quiver(const ExtQuiver& q, int j);

// Vertex permutation: image[i] is sigma(i), 0-based.
using Perm = std::vector<int>;

Perm perm_compose(const Perm& outer, const Perm& inner);
Perm perm_inverse(const Perm& p);
bool is_bijection(const Perm& p);
std::string perm_to_cycles(const Perm& p);

// eps'_{sigma(i) sigma(k)} = eps_{ik}
Quiver permute_quiver(const Quiver& q, const Perm& p);
ExtQuiver permute_quiver(const ExtQuiver& q, const Perm& p);

struct WordAtom {
    enum class Kind { Mut, Perm, Inv };
    Kind kind = Kind::Mut;
    int vertex = 0;
    qpc::Perm perm;

    friend bool operator==(const WordAtom&, const WordAtom&) = default;
};

// Element of the group generated by mutations, permutations and the
// orientation reversal. Atoms are stored in application order; the text
// form is composition order, rightmost acting first.
struct GroupWord {
    std::vector<WordAtom> atoms;

    static GroupWord mutation(int j);
    static GroupWord permutation(Perm p);
    static GroupWord inversion();

    friend bool operator==(const GroupWord&, const GroupWord&) = default;
};

// outer o inner: inner acts first.
GroupWord compose(const GroupWord& outer, const GroupWord& inner);
GroupWord invert_word(const GroupWord& w);
GroupWord word_power(const GroupWord& w, int k);

// Grammar: items separated by 'o', '∘', '*' or spaces, e.g.
//   "(1,2)(3,4) o mu1 o mu3", "(1324)∘μ3", "inv", "s1^2", "[pi T]^-1".
// Named generators come from the optional table.
GroupWord parse_word(const std::string& text, int n, const std::map<std::string, GroupWord>& named = {});
std::string word_to_string(const GroupWord& w);

Quiver apply_word(const Quiver& q, const GroupWord& w);

// Vertex bijection carrying q1 to q2, if any; brute force, n <= 11.
std::optional<Perm> quiver_isomorphic(const Quiver& q1, const Quiver& q2);

// Built-in quivers: A8, A7p, A7, A6, A5, A4, A3, A2, A1, A0, and the
// extended A7p-ext8, A7p-ext6.
std::vector<std::string> catalog_labels();
ExtQuiver catalog(const std::string& label);

nlohmann::json to_json(const ExtQuiver& q);
ExtQuiver ext_quiver_from_json(const nlohmann::json& j);

}  // namespace qpc
