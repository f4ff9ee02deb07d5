#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "auctionlab/errors.hpp"

namespace auctionlab {

// Exact rational on int64 numerator / positive int64 denominator, always
// reduced. Intermediates run in __int128; results that do not fit back into
// int64 throw rather than wrap. Everything on the probability/revenue path
// uses this type; floating point appears only in reports.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(long long n) : num_(n), den_(1) {}  // implicit: integers promote
    Rational(long long n, long long d) { assign(n, d); }

    // Accepts "num/den" or a bare integer, optionally signed.
    static Rational parse(std::string_view text);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_ == 0; }
    bool is_negative() const noexcept { return num_ < 0; }
    bool is_integer() const noexcept { return den_ == 1; }

    Rational operator-() const { return from_i128(-static_cast<__int128>(num_), den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
        __int128 d = static_cast<__int128>(a.den_) * b.den_;
        return from_i128(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        __int128 n = static_cast<__int128>(a.num_) * b.num_;
        __int128 d = static_cast<__int128>(a.den_) * b.den_;
        return from_i128(n, d);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw AuctionError("division_by_zero", "rational division by zero");
        __int128 n = static_cast<__int128>(a.num_) * b.den_;
        __int128 d = static_cast<__int128>(a.den_) * b.num_;
        return from_i128(n, d);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
        __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    void assign(long long n, long long d);
    static Rational from_i128(__int128 n, __int128 d);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline Rational abs(const Rational& r) { return r.is_negative() ? -r : r; }
inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

namespace detail {

inline __int128 gcd_i128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace detail

inline Rational Rational::from_i128(__int128 n, __int128 d) {
    if (d == 0) throw AuctionError("zero_denominator", "rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = detail::gcd_i128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    constexpr __int128 lo = INT64_MIN;
    constexpr __int128 hi = INT64_MAX;
    if (n < lo || n > hi || d > hi)
        throw AuctionError("overflow", "rational arithmetic overflow beyond 64-bit range");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
}

inline void Rational::assign(long long n, long long d) {
    *this = from_i128(n, d);
}

inline Rational Rational::parse(std::string_view text) {
    auto parse_int = [](std::string_view s) -> long long {
        if (s.empty()) throw ParseError("empty integer in rational");
        size_t i = 0;
        bool neg = false;
        if (s[0] == '+' || s[0] == '-') {
            neg = s[0] == '-';
            i = 1;
            if (i == s.size()) throw ParseError("sign without digits in rational");
        }
        long long value = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9')
                throw ParseError("invalid character in rational: '" + std::string(s) + "'");
            int digit = s[i] - '0';
            if (value > (INT64_MAX - digit) / 10)
                throw ParseError("integer out of range in rational: '" + std::string(s) + "'");
            value = value * 10 + digit;
        }
        return neg ? -value : value;
    };
    size_t slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    long long n = parse_int(text.substr(0, slash));
    long long d = parse_int(text.substr(slash + 1));
    if (d == 0) throw ParseError("rational with zero denominator: '" + std::string(text) + "'");
    return Rational(n, d);
}

}  // namespace auctionlab
