#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

namespace qpc {

// Small exact rational used for exponents. Arithmetic is overflow-checked;
// exponents in this domain stay tiny, so hitting the limit means a bug.
class Frac {
public:
    constexpr Frac() = default;
    Frac(std::int64_t n);  // NOLINT: integers convert implicitly
    Frac(std::int64_t n, std::int64_t d);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return (num_ > 0) - (num_ < 0); }

    Frac operator-() const;
    Frac& operator+=(const Frac& o);
    Frac& operator-=(const Frac& o);
    Frac& operator*=(const Frac& o);
    Frac& operator/=(const Frac& o);

    friend Frac operator+(Frac a, const Frac& b) { return a += b; }
    friend Frac operator-(Frac a, const Frac& b) { return a -= b; }
    friend Frac operator*(Frac a, const Frac& b) { return a *= b; }
    friend Frac operator/(Frac a, const Frac& b) { return a /= b; }

    friend bool operator==(const Frac&, const Frac&) = default;
    friend std::strong_ordering operator<=>(const Frac& a, const Frac& b);

    Frac abs() const { return num_ < 0 ? -*this : *this; }
    // Largest integer <= value.
    std::int64_t floor() const;

    std::string str() const;
    static Frac parse(const std::string& text);

    std::size_t hash() const;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Frac& f);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

}  // namespace qpc

template <>
struct std::hash<qpc::Frac> {
    std::size_t operator()(const qpc::Frac& f) const { return f.hash(); }
};
