#include "qpc/expr_parse.hpp"

#include <cctype>

#include "qpc/errors.hpp"

namespace qpc {

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : src_(s) {}

    AstNode parse_all() {
        AstNode n = expr();
        skip();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError(why + " at offset " + std::to_string(pos_) + " in \"" + src_ + "\"");
    }

    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool at_digit() const {
        return pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]));
    }

    std::string digits() {
        std::size_t b = pos_;
        while (at_digit()) ++pos_;
        return src_.substr(b, pos_ - b);
    }

    AstNode expr() {
        AstNode first = term();
        skip();
        if (pos_ >= src_.size() || (src_[pos_] != '+' && src_[pos_] != '-')) return first;
        AstNode add;
        add.kind = AstNode::Kind::Add;
        add.kids.push_back(std::move(first));
        while (true) {
            if (eat('+')) {
                add.kids.push_back(term());
            } else if (eat('-')) {
                AstNode neg;
                neg.kind = AstNode::Kind::Neg;
                neg.kids.push_back(term());
                add.kids.push_back(std::move(neg));
            } else {
                break;
            }
        }
        return add;
    }

    AstNode term() {
        AstNode lhs = unary();
        while (true) {
            AstNode::Kind k;
            if (eat('*')) k = AstNode::Kind::Mul;
            else if (eat('/')) k = AstNode::Kind::Div;
            else break;
            AstNode n;
            n.kind = k;
            n.kids.push_back(std::move(lhs));
            n.kids.push_back(unary());
            lhs = std::move(n);
        }
        return lhs;
    }

    AstNode unary() {
        if (eat('-')) {
            AstNode n;
            n.kind = AstNode::Kind::Neg;
            n.kids.push_back(unary());
            return n;
        }
        if (eat('+')) return unary();
        return power();
    }

    AstNode power() {
        AstNode base = atom();
        if (!eat('^')) return base;
        AstNode n;
        n.kind = AstNode::Kind::Pow;
        n.kids.push_back(std::move(base));
        n.exponent = exponent();
        return n;
    }

    Frac exponent() {
        skip();
        if (eat('(')) {
            AstNode inner = expr();
            if (!eat(')')) fail("missing ')' in exponent");
            mpq_class v = constant(inner);
            if (!v.get_num().fits_slong_p() || !v.get_den().fits_slong_p()) fail("exponent too large");
            return Frac(v.get_num().get_si(), v.get_den().get_si());
        }
        bool neg = eat('-');
        skip();
        if (!at_digit()) fail("expected exponent");
        std::string n = digits();
        std::string d = "1";
        // only take the slash when digits follow, so x^2/(y) stays a quotient
        if (pos_ + 1 < src_.size() && src_[pos_] == '/' &&
            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            ++pos_;
            d = digits();
        }
        try {
            return Frac((neg ? -1 : 1) * std::stoll(n), std::stoll(d));
        } catch (const std::out_of_range&) {
            fail("exponent too large");
        }
    }

    mpq_class constant(const AstNode& n) {
        using K = AstNode::Kind;
        switch (n.kind) {
            case K::Num:
                return n.num;
            case K::Add: {
                mpq_class s = 0;
                for (const auto& k : n.kids) s += constant(k);
                return s;
            }
            case K::Mul:
                return constant(n.kids[0]) * constant(n.kids[1]);
            case K::Div: {
                mpq_class d = constant(n.kids[1]);
                if (d == 0) fail("zero denominator in exponent");
                return constant(n.kids[0]) / d;
            }
            case K::Neg:
                return -constant(n.kids[0]);
            default:
                fail("exponent must be a rational constant");
        }
    }

    AstNode atom() {
        skip();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            AstNode n = expr();
            if (!eat(')')) fail("missing ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            AstNode n;
            n.kind = AstNode::Kind::Num;
            n.num = mpq_class(mpz_class(digits()));
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t b = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                    src_[pos_] == '\''))
                ++pos_;
            AstNode n;
            n.kind = AstNode::Kind::Sym;
            n.name = src_.substr(b, pos_ - b);
            return n;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& src_;
    std::size_t pos_ = 0;
};

}  // namespace

AstNode parse_ast(const std::string& text) { return Parser(text).parse_all(); }

}  // namespace qpc
