#ifndef REGCOMP_PHI_HPP
#define REGCOMP_PHI_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "regcomp/levy.hpp"
#include "regcomp/scalar.hpp"

namespace regcomp {

enum class Normalization { raw, unit };

struct not_completely_alternating : std::runtime_error {
    int n, m;
    not_completely_alternating(int n_, int m_, const std::string& val)
        : std::runtime_error("sequence is not completely alternating at Phi(" + std::to_string(n_) +
                             ":" + std::to_string(m_) + ") = " + val),
          n(n_),
          m(m_) {}
};

// Laplace exponent at integer arguments together with the binomial moments
// Phi(n:m). Phi(0) = 0 is implicit and never stored.
template <class S>
struct PhiTable {
    int n_max = 0;
    std::vector<S> phi;                  // phi[n-1] = Phi(n)
    std::vector<std::vector<S>> binom;   // binom[n-1][m-1] = Phi(n:m)
    Normalization norm = Normalization::unit;

    const S& at(int n) const { return phi.at(n - 1); }
    const S& at(int n, int m) const { return binom.at(n - 1).at(m - 1); }
};

namespace detail {

// Phi(n:m) = C(n,m) sum_{j=0}^m (-1)^{j+1} C(m,j) Phi(n-m+j), Phi(0)=0.
template <class S>
S binom_moment_from_phi(const std::vector<S>& phi, int n, int m) {
    S sum(0);
    for (int j = 0; j <= m; ++j) {
        int idx = n - m + j;
        if (idx == 0) continue;
        S term = binomial<S>(m, j) * phi[idx - 1];
        if (j % 2 == 0) sum -= term; else sum += term;
    }
    return binomial<S>(n, m) * sum;
}

template <class S>
void apply_normalization(PhiTable<S>& t, Normalization norm) {
    t.norm = norm;
    if (norm == Normalization::raw) return;
    S phi1 = t.phi[0];
    if (!(scalar_traits<S>::to_double(phi1) > 0))
        throw std::runtime_error("cannot unit-normalize: Phi(1) <= 0");
    for (auto& v : t.phi) v /= phi1;
    for (auto& row : t.binom)
        for (auto& v : row) v /= phi1;
}

inline bool is_integer(const Rational& x) {
    return boost::multiprecision::denominator(x) == 1;
}

// Exact Beta(i,j) for positive integers: (i-1)! (j-1)! / (i+j-1)!.
inline Rational exact_beta(int i, int j) {
    return Rational(big_factorial(i - 1) * big_factorial(j - 1), big_factorial(i + j - 1));
}

template <class S>
S beta_function(const S& a, const S& b);

template <>
inline double beta_function<double>(const double& a, const double& b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

template <>
inline Rational beta_function<Rational>(const Rational& a, const Rational& b) {
    if (!is_integer(a) || !is_integer(b))
        throw std::runtime_error("exact backend requires integer beta exponents");
    return exact_beta(a.convert_to<int>(), b.convert_to<int>());
}

}  // namespace detail

// Binomial moments from Levy data:
//   Phi(n:m) = C(n,m) int x^m (1-x)^{n-m} nu(dx) + n d 1(m=1)
// with the integral a finite atom sum or a Beta function, and Phi(n) the row
// sum. TwoParam uses its closed-form Phi(n) with the triangle filled by the
// alternating binomial sum.
template <class S>
PhiTable<S> build_phi_table(const LevyFamily<S>& fam, int n_max,
                            Normalization norm = Normalization::unit) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    validate(fam);

    PhiTable<S> t;
    t.n_max = n_max;
    t.phi.assign(n_max, S(0));
    t.binom.resize(n_max);
    for (int n = 1; n <= n_max; ++n) t.binom[n - 1].assign(n, S(0));

    auto fill_rows_from_integral = [&](auto&& moment, const S& drift) {
        // moment(m, n-m) = int x^m (1-x)^{n-m} nu(dx)
        for (int n = 1; n <= n_max; ++n) {
            S row_sum(0);
            for (int m = 1; m <= n; ++m) {
                S v = binomial<S>(n, m) * moment(m, n - m);
                if (m == 1) v += S(n) * drift;
                t.binom[n - 1][m - 1] = v;
                row_sum += v;
            }
            t.phi[n - 1] = row_sum;
        }
    };

    struct Builder {
        PhiTable<S>& t;
        int n_max;
        decltype(fill_rows_from_integral)& fill;

        void operator()(const DiscreteMeasure<S>& m) const {
            fill([&](int a, int b) {
                S sum(0);
                for (const auto& [x, w] : m.atoms)
                    sum += w * int_pow<S>(x, a) * int_pow<S>(S(1) - x, b);
                return sum;
            }, m.drift);
        }
        void operator()(const BetaDensity<S>& m) const {
            fill([&](int a, int b) {
                return m.scale * detail::beta_function<S>(m.a + S(a), m.b + S(b));
            }, m.drift);
        }
        void operator()(const TwoParam<S>& m) const {
            // Phi(n)/Phi(1) = n [theta+1]_{n-1} / [2+theta-alpha]_{n-1}
            for (int n = 1; n <= n_max; ++n) {
                t.phi[n - 1] = S(n) * rising<S>(m.theta + S(1), n - 1) /
                               rising<S>(S(2) + m.theta - m.alpha, n - 1);
            }
            for (int n = 1; n <= n_max; ++n)
                for (int mm = 1; mm <= n; ++mm)
                    t.binom[n - 1][mm - 1] = detail::binom_moment_from_phi(t.phi, n, mm);
        }
        void operator()(const Degenerate& d) const {
            for (int n = 1; n <= n_max; ++n) {
                if (d.kind == DegenerateKind::singletons) {
                    t.phi[n - 1] = S(n);
                    t.binom[n - 1][0] = S(n);
                } else {
                    t.phi[n - 1] = S(1);
                    t.binom[n - 1][n - 1] = S(1);
                }
            }
        }
    };
    std::visit(Builder{t, n_max, fill_rows_from_integral}, fam);

    detail::apply_normalization(t, norm);
    return t;
}

// Table from a raw sequence Phi(1..n_max). The triangle is filled by the
// alternating binomial sum and every entry must come out non-negative
// (complete alternation); that is exactly the condition for the sequence to
// be a Laplace exponent restricted to the integers.
template <class S>
PhiTable<S> phi_from_sequence(const std::vector<S>& phi_values, int n_max,
                              Normalization norm = Normalization::unit) {
    if (n_max < 1 || static_cast<int>(phi_values.size()) < n_max)
        throw std::invalid_argument("need at least n_max Phi values");
    for (int n = 1; n <= n_max; ++n)
        if (!(scalar_traits<S>::to_double(phi_values[n - 1]) > 0))
            throw std::invalid_argument("Phi(n) must be positive");

    PhiTable<S> t;
    t.n_max = n_max;
    t.phi.assign(phi_values.begin(), phi_values.begin() + n_max);
    t.binom.resize(n_max);
    for (int n = 1; n <= n_max; ++n) {
        t.binom[n - 1].assign(n, S(0));
        for (int m = 1; m <= n; ++m) {
            S v = detail::binom_moment_from_phi(t.phi, n, m);
            if (!scalar_traits<S>::nonneg(v))
                throw not_completely_alternating(n, m, scalar_traits<S>::str(v));
            t.binom[n - 1][m - 1] = v;
        }
    }
    detail::apply_normalization(t, norm);
    return t;
}

// Pascal-type recursion check:
// Phi(n:m) = (m+1)/(n+1) Phi(n+1:m+1) + (n-m+1)/(n+1) Phi(n+1:m).
template <class S>
bool check_pascal_recursion(const PhiTable<S>& t) {
    for (int n = 1; n < t.n_max; ++n)
        for (int m = 1; m <= n; ++m) {
            S rhs = (S(m + 1) * t.at(n + 1, m + 1) + S(n - m + 1) * t.at(n + 1, m)) / S(n + 1);
            if (!scalar_traits<S>::near(t.at(n, m), rhs)) return false;
        }
    return true;
}

}  // namespace regcomp

#endif
