#include "qpc/frac.hpp"

#include <ostream>
#include <regex>

#include "qpc/errors.hpp"

namespace qpc {

namespace {

std::int64_t mul_checked(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw ExponentOverflow("product");
    return r;
}

std::int64_t add_checked(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw ExponentOverflow("sum");
    return r;
}

}  // namespace

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    return mul_checked(a / gcd64(a, b), b < 0 ? -b : b);
}

Frac::Frac(std::int64_t n) : num_(n), den_(1) {}

Frac::Frac(std::int64_t n, std::int64_t d) {
    if (d == 0) throw DivisionByZero("exponent denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    std::int64_t g = gcd64(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = n;
    den_ = n == 0 ? 1 : d;
}

Frac Frac::operator-() const {
    Frac r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Frac& Frac::operator+=(const Frac& o) {
    if (den_ == o.den_) {
        *this = Frac(add_checked(num_, o.num_), den_);
        return *this;
    }
    std::int64_t g = gcd64(den_, o.den_);
    std::int64_t a = mul_checked(num_, o.den_ / g);
    std::int64_t b = mul_checked(o.num_, den_ / g);
    *this = Frac(add_checked(a, b), mul_checked(den_ / g, o.den_));
    return *this;
}

Frac& Frac::operator-=(const Frac& o) { return *this += -o; }

Frac& Frac::operator*=(const Frac& o) {
    std::int64_t g1 = gcd64(num_, o.den_);
    std::int64_t g2 = gcd64(o.num_, den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    *this = Frac(mul_checked(num_ / g1, o.num_ / g2), mul_checked(den_ / g2, o.den_ / g1));
    return *this;
}

Frac& Frac::operator/=(const Frac& o) {
    if (o.num_ == 0) throw DivisionByZero("exponent division");
    return *this *= Frac(o.den_, o.num_);
}

std::strong_ordering operator<=>(const Frac& a, const Frac& b) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::int64_t Frac::floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

std::string Frac::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Frac Frac::parse(const std::string& text) {
    static const std::regex re(R"(\s*(-?\d+)(?:\s*/\s*(\d+))?\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw ParseError("bad rational '" + text + "'");
    std::int64_t n = std::stoll(m[1].str());
    std::int64_t d = m[2].matched ? std::stoll(m[2].str()) : 1;
    return Frac(n, d);
}

std::size_t Frac::hash() const {
    std::size_t h = std::hash<std::int64_t>{}(num_);
    return h ^ (std::hash<std::int64_t>{}(den_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::ostream& operator<<(std::ostream& os, const Frac& f) { return os << f.str(); }

}  // namespace qpc
