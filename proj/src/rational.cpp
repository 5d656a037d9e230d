#include "hml/rational.hpp"

#include <cmath>
#include <limits>

namespace hml {

namespace detail {

std::string int128_to_string(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    std::string s;
    while (u > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    return {s.rbegin(), s.rend()};
}

} // namespace detail

Rational Rational::from_double_exact(double x) {
    if (!std::isfinite(x)) throw RationalOverflowError("non-finite double has no rational value");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double mant = std::frexp(x, &exp); // x = mant * 2^exp, |mant| in [0.5, 1)
    // scale mantissa to an integer: doubles have 53 significant bits
    for (int i = 0; i < 53 && mant != std::floor(mant); ++i) {
        mant *= 2.0;
        --exp;
    }
    auto m = static_cast<int128>(mant);
    if (exp >= 0) {
        if (exp > 126) throw RationalOverflowError("double exponent too large for int128 rational");
        return Rational(detail::checked_mul(m, int128(1) << exp), 1);
    }
    if (exp < -126) throw RationalOverflowError("double exponent too small for int128 rational");
    return Rational(m, int128(1) << (-exp));
}

std::optional<Rational> Rational::sqrt_exact() const {
    if (num_ < 0) return std::nullopt;
    auto isqrt = [](int128 v) -> int128 {
        if (v < 0) return -1;
        auto r = static_cast<int128>(std::sqrt(static_cast<double>(v)));
        while (r > 0 && r * r > v) --r;
        while ((r + 1) * (r + 1) <= v) ++r;
        return r;
    };
    int128 rn = isqrt(num_);
    int128 rd = isqrt(den_);
    if (rn * rn != num_ || rd * rd != den_) return std::nullopt;
    return Rational(rn, rd);
}

std::string Rational::to_string() const {
    std::string s = detail::int128_to_string(num_);
    if (den_ != 1) s += "/" + detail::int128_to_string(den_);
    return s;
}

std::int64_t Rational::num_i64() const {
    if (num_ > std::numeric_limits<std::int64_t>::max() || num_ < std::numeric_limits<std::int64_t>::min())
        throw RationalOverflowError("rational numerator exceeds int64 for serialization");
    return static_cast<std::int64_t>(num_);
}

std::int64_t Rational::den_i64() const {
    if (den_ > std::numeric_limits<std::int64_t>::max())
        throw RationalOverflowError("rational denominator exceeds int64 for serialization");
    return static_cast<std::int64_t>(den_);
}

Rational rational_gcd(const Rational& a, const Rational& b) {
    if (a.is_zero()) return b.abs();
    if (b.is_zero()) return a.abs();
    int128 g = detail::gcd128(a.num(), b.num());
    int128 l = detail::checked_mul(a.den() / detail::gcd128(a.den(), b.den()), b.den());
    return Rational(g, l);
}

} // namespace hml
