#ifndef REGCOMP_SCALAR_HPP
#define REGCOMP_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace regcomp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Backend traits: exact rationals or plain doubles. A whole table lives in
// one backend; there is no mixing.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational ratio(long long num, long long den) { return Rational(num, den); }
    static Rational from_bigint(const BigInt& v) { return Rational(v); }
    static double to_double(const Rational& x) { return x.convert_to<double>(); }
    // Exact backend: equality is equality.
    static bool near(const Rational& a, const Rational& b) { return a == b; }
    static bool nonneg(const Rational& x) { return x >= 0; }
    static std::string str(const Rational& x) { return x.str(); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static constexpr double tol = 1e-12;
    static double ratio(long long num, long long den) {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    static double from_bigint(const BigInt& v) { return v.convert_to<double>(); }
    static double to_double(double x) { return x; }
    static bool near(double a, double b) {
        double scale = std::max({1.0, std::abs(a), std::abs(b)});
        return std::abs(a - b) <= tol * scale;
    }
    static bool nonneg(double x) { return x >= -tol; }
    static std::string str(double x) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return buf;
    }
};

inline BigInt big_binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline BigInt big_factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

template <class S>
S binomial(int n, int k) {
    return scalar_traits<S>::from_bigint(big_binomial(n, k));
}

template <class S>
S factorial(int n) {
    return scalar_traits<S>::from_bigint(big_factorial(n));
}

// Rising factorial [x]_n = x (x+1) ... (x+n-1), with [x]_0 = 1.
template <class S>
S rising(const S& x, int n) {
    S r(1);
    for (int i = 0; i < n; ++i) r *= x + S(i);
    return r;
}

template <class S>
S int_pow(S base, int e) {
    S r(1);
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

}  // namespace regcomp

#endif
