#pragma once

// Exact fraction arithmetic on 128-bit integers. Used for rational root
// trials, the beta/period lattice algebra and the torus search; everything
// else runs in doubles. Overflow throws RationalOverflowError instead of
// wrapping, so a torus certificate can never silently depend on wraparound.

#include "hml/errors.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

namespace hml {

using int128 = __int128;

namespace detail {

inline int128 iabs(int128 v) { return v < 0 ? -v : v; }

inline int128 gcd128(int128 a, int128 b) {
    a = iabs(a);
    b = iabs(b);
    while (b != 0) {
        int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline int128 checked_mul(int128 a, int128 b) {
    int128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw RationalOverflowError("rational multiply overflow");
    return r;
}

inline int128 checked_add(int128 a, int128 b) {
    int128 r;
    if (__builtin_add_overflow(a, b, &r)) throw RationalOverflowError("rational add overflow");
    return r;
}

std::string int128_to_string(int128 v);

} // namespace detail

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(int128 n) : num_(n), den_(1) {}
    Rational(int128 n, int128 d) : num_(n), den_(d) { normalize(); }

    static Rational from_int64(std::int64_t n, std::int64_t d = 1) { return Rational(int128(n), int128(d)); }

    // Exact dyadic representation of a finite double.
    static Rational from_double_exact(double x);

    int128 num() const { return num_; }
    int128 den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator-() const { return raw(-num_, den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        using namespace detail;
        int128 g = gcd128(a.den_, b.den_);
        int128 db = b.den_ / g;
        int128 n = checked_add(checked_mul(a.num_, db), checked_mul(b.num_, a.den_ / g));
        return Rational(n, checked_mul(a.den_, db));
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        using namespace detail;
        int128 g1 = gcd128(a.num_, b.den_);
        int128 g2 = gcd128(b.num_, a.den_);
        return raw(checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw RationalOverflowError("rational divide by zero");
        Rational inv = raw(b.den_, b.num_);
        if (inv.den_ < 0) { inv.num_ = -inv.num_; inv.den_ = -inv.den_; }
        return a * inv;
    }

    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return (a - b).num_ < 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return (a - b).num_ <= 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

    Rational abs() const { return raw(detail::iabs(num_), den_); }

    // Exact square root if this is a perfect square of a rational, nullopt otherwise.
    std::optional<Rational> sqrt_exact() const;

    std::string to_string() const;

    // {num, den} must fit int64 for serialization; throws otherwise.
    std::int64_t num_i64() const;
    std::int64_t den_i64() const;

private:
    static Rational raw(int128 n, int128 d) {
        Rational r;
        r.num_ = n;
        r.den_ = d;
        return r;
    }
    void normalize() {
        if (den_ == 0) throw RationalOverflowError("rational with zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        int128 g = detail::gcd128(num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
        if (num_ == 0) den_ = 1;
    }

    int128 num_;
    int128 den_;
};

// gcd of rationals: largest r with a/r, b/r integers; gcd(n1/d1, n2/d2) = gcd(n1,n2)/lcm(d1,d2).
Rational rational_gcd(const Rational& a, const Rational& b);

} // namespace hml
