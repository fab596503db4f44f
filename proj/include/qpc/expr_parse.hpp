#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "qpc/frac.hpp"

namespace qpc {

// Syntax tree shared by the commutative and the skew evaluators.
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('-' | '+') unary | power
//   power  := atom ('^' exponent)?
//   exponent := -?digits('/'digits)? | '(' expr ')'   (constant)
//   atom   := digits | identifier | '(' expr ')'
// Unary minus binds looser than '^', so -x^2 is -(x^2).
struct AstNode {
    enum class Kind { Num, Sym, Add, Mul, Div, Neg, Pow };
    Kind kind = Kind::Num;
    mpq_class num;
    std::string name;
    Frac exponent;
    std::vector<AstNode> kids;
};

AstNode parse_ast(const std::string& text);

// Folds the same grammar through a caller-provided algebra.
template <class V, class Ops>
V eval_ast(const AstNode& n, const Ops& ops) {
    using K = AstNode::Kind;
    switch (n.kind) {
        case K::Num:
            return ops.number(n.num);
        case K::Sym:
            return ops.symbol(n.name);
        case K::Add: {
            std::vector<V> vals;
            vals.reserve(n.kids.size());
            for (const auto& k : n.kids) vals.push_back(eval_ast<V>(k, ops));
            return ops.add(vals);
        }
        case K::Mul:
            return ops.mul(eval_ast<V>(n.kids[0], ops), eval_ast<V>(n.kids[1], ops));
        case K::Div:
            return ops.div(eval_ast<V>(n.kids[0], ops), eval_ast<V>(n.kids[1], ops));
        case K::Neg:
            return ops.neg(eval_ast<V>(n.kids[0], ops));
        case K::Pow:
            return ops.pow(eval_ast<V>(n.kids[0], ops), n.exponent);
    }
    return ops.number(0);
}

}  // namespace qpc
