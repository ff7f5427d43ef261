#ifndef REGCOMP_LAW_HPP
#define REGCOMP_LAW_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "regcomp/decrement.hpp"

namespace regcomp {

// Ordered sequence of positive parts. Compositions of n are indexed by the
// 2^{n-1} subsets of break positions: bit i set means a break after ball i+1.
struct Composition {
    std::vector<int> parts;

    int total() const { return std::accumulate(parts.begin(), parts.end(), 0); }
    int num_parts() const { return static_cast<int>(parts.size()); }

    static Composition from_index(std::uint32_t index, int n) {
        Composition c;
        int run = 1;
        for (int i = 0; i < n - 1; ++i) {
            if (index >> i & 1) {
                c.parts.push_back(run);
                run = 1;
            } else {
                ++run;
            }
        }
        c.parts.push_back(run);
        return c;
    }

    std::uint32_t to_index() const {
        std::uint32_t idx = 0;
        int pos = 0;
        for (std::size_t j = 0; j + 1 < parts.size(); ++j) {
            pos += parts[j];
            idx |= 1u << (pos - 1);
        }
        return idx;
    }

    std::string str() const {
        std::string s;
        for (std::size_t j = 0; j < parts.size(); ++j) {
            if (j) s += '-';
            s += std::to_string(parts[j]);
        }
        return s;
    }
};

inline constexpr int kEnumerationCap = 16;

// p(lambda) = prod_j q(N_j : n_j) with N_j the tail sums.
template <class S>
S composition_probability(const DecrementMatrix<S>& q, const Composition& lambda) {
    int n = lambda.total();
    if (n > q.n_max) throw std::invalid_argument("composition total exceeds decrement matrix size");
    S p(1);
    int remaining = n;
    for (int part : lambda.parts) {
        p *= q.at(remaining, part);
        remaining -= part;
    }
    return p;
}

// Exact probability assignment over all 2^{n-1} compositions of n, indexed
// by break mask.
template <class S>
struct CompositionLaw {
    int n = 0;
    std::vector<S> p;

    const S& operator[](std::uint32_t idx) const { return p[idx]; }
    const S& at(const Composition& c) const { return p.at(c.to_index()); }
    S total_mass() const { return std::accumulate(p.begin(), p.end(), S(0)); }
};

template <class S>
CompositionLaw<S> enumerate_law_serial(const DecrementMatrix<S>& q, int n,
                                       int cap = kEnumerationCap) {
    if (n > cap)
        throw std::invalid_argument("enumeration cap exceeded (cap = " + std::to_string(cap) + ")");
    if (n > q.n_max) throw std::invalid_argument("n exceeds decrement matrix size");
    CompositionLaw<S> law;
    law.n = n;
    law.p.resize(std::size_t(1) << (n - 1));
    for (std::uint32_t idx = 0; idx < law.p.size(); ++idx)
        law.p[idx] = composition_probability(q, Composition::from_index(idx, n));
    return law;
}

// Parallel variant; every index is independent, so the result is identical
// to the serial reference regardless of schedule.
template <class S>
CompositionLaw<S> enumerate_law(const DecrementMatrix<S>& q, int n, int cap = kEnumerationCap) {
    if (n > cap)
        throw std::invalid_argument("enumeration cap exceeded (cap = " + std::to_string(cap) + ")");
    if (n > q.n_max) throw std::invalid_argument("n exceeds decrement matrix size");
    CompositionLaw<S> law;
    law.n = n;
    law.p.resize(std::size_t(1) << (n - 1));
    const std::int64_t count = static_cast<std::int64_t>(law.p.size());
#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t idx = 0; idx < count; ++idx)
        law.p[idx] = composition_probability(
            q, Composition::from_index(static_cast<std::uint32_t>(idx), n));
    return law;
}

struct ConsistencyReport {
    bool pass = true;
    Composition failing;
    double residual = 0;
};

// Sampling-consistency recursion: p(lambda) = sum_{mu extends lambda}
// kappa(lambda, mu) p(mu), where kappa is (n_j+1)/(n+1) for growing part j
// and (j+1)/(n+1) for inserting a 1 into a run of j consecutive ones. The
// run weights arise here by summing 1/(n+1) over insertion positions that
// produce the same mu.
template <class S>
ConsistencyReport check_sampling_consistency(const CompositionLaw<S>& law_n,
                                             const CompositionLaw<S>& law_n1) {
    if (law_n1.n != law_n.n + 1)
        throw std::invalid_argument("laws must be at consecutive levels");
    const int n = law_n.n;
    for (std::uint32_t idx = 0; idx < law_n.p.size(); ++idx) {
        Composition lambda = Composition::from_index(idx, n);
        const int k = lambda.num_parts();
        S rhs(0);
        for (int j = 0; j < k; ++j) {
            Composition mu = lambda;
            mu.parts[j] += 1;
            rhs += S(lambda.parts[j] + 1) * law_n1.at(mu);
        }
        for (int pos = 0; pos <= k; ++pos) {
            Composition mu = lambda;
            mu.parts.insert(mu.parts.begin() + pos, 1);
            rhs += law_n1.at(mu);
        }
        rhs /= S(n + 1);
        if (!scalar_traits<S>::near(law_n.p[idx], rhs))
            return {false, lambda, scalar_traits<S>::to_double(law_n.p[idx] - rhs)};
    }
    return {};
}

inline constexpr int kEppfPartsCap = 9;

// EPPF: multinomial^{-1} sum over all k! orderings of the class sizes.
// Repeated sizes are handled by iterating distinct orderings and scaling by
// the product of multiplicity factorials.
template <class S>
S eppf(const DecrementMatrix<S>& q, std::vector<int> sizes, int parts_cap = kEppfPartsCap) {
    const int k = static_cast<int>(sizes.size());
    if (k < 1) throw std::invalid_argument("need at least one class size");
    if (k > parts_cap)
        throw std::invalid_argument("EPPF cap exceeded (cap = " + std::to_string(parts_cap) + ")");
    const int n = std::accumulate(sizes.begin(), sizes.end(), 0);
    if (n > q.n_max) throw std::invalid_argument("total size exceeds decrement matrix size");

    std::sort(sizes.begin(), sizes.end());
    BigInt mult_factor = 1;  // product of multiplicity factorials
    {
        int run = 1;
        for (int i = 1; i <= k; ++i) {
            if (i < k && sizes[i] == sizes[i - 1]) {
                ++run;
            } else {
                mult_factor *= big_factorial(run);
                run = 1;
            }
        }
    }
    S sum(0);
    Composition c;
    do {
        c.parts = sizes;
        sum += composition_probability(q, c);
    } while (std::next_permutation(sizes.begin(), sizes.end()));

    BigInt multinomial = big_factorial(n);
    for (int s : sizes) multinomial /= big_factorial(s);
    return sum * scalar_traits<S>::from_bigint(mult_factor) /
           scalar_traits<S>::from_bigint(multinomial);
}

// Closed form: prod_{i<k} (theta + alpha i) / [1+theta]_{n-1}
//              * prod_i [1-alpha]_{n_i - 1}.
template <class S>
S two_param_eppf(const S& alpha, const S& theta, const std::vector<int>& sizes) {
    const int k = static_cast<int>(sizes.size());
    const int n = std::accumulate(sizes.begin(), sizes.end(), 0);
    S num(1);
    for (int i = 1; i < k; ++i) num *= theta + alpha * S(i);
    for (int s : sizes) num *= rising<S>(S(1) - alpha, s - 1);
    return num / rising<S>(S(1) + theta, n - 1);
}

// Sum over all k! orderings of prod_i ((N_i - n_i) alpha + n_i theta) /
// (N_i ((k-i) alpha + theta)); must equal 1. The last factor is 1 by
// cancellation, which also covers theta = 0.
template <class S>
S ordering_factor_sum(const S& alpha, const S& theta, std::vector<int> sizes) {
    if (sizes.empty()) throw std::invalid_argument("need at least one size");
    if (alpha == S(0) && theta == S(0))
        throw std::invalid_argument("alpha = theta = 0 is degenerate");
    const int k = static_cast<int>(sizes.size());
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    S sum(0);
    do {
        S prod(1);
        int tail = std::accumulate(sizes.begin(), sizes.end(), 0);
        for (int i = 0; i < k - 1; ++i) {
            int ni = sizes[order[i]];
            prod *= (S(tail - ni) * alpha + S(ni) * theta) /
                    (S(tail) * (S(k - 1 - i) * alpha + theta));
            tail -= ni;
        }
        sum += prod;
    } while (std::next_permutation(order.begin(), order.end()));
    return sum;
}

// g(n,j): probability that the decrement chain started at n ever visits j.
template <class S>
struct GreenMatrix {
    int n_max = 0;
    std::vector<std::vector<S>> g;  // g[n-1][j-1]

    const S& at(int n, int j) const { return g.at(n - 1).at(j - 1); }
};

// Hitting-probability DP: g(j,j) = 1, g(n,j) = sum_m q(n:m) g(n-m,j).
template <class S>
GreenMatrix<S> green_matrix(const DecrementMatrix<S>& q) {
    GreenMatrix<S> gm;
    gm.n_max = q.n_max;
    gm.g.resize(gm.n_max);
    for (int n = 1; n <= gm.n_max; ++n) {
        gm.g[n - 1].assign(n, S(0));
        gm.g[n - 1][n - 1] = S(1);
        for (int j = 1; j < n; ++j) {
            S sum(0);
            for (int m = 1; m <= n - j; ++m) sum += q.at(n, m) * gm.g[n - m - 1][j - 1];
            gm.g[n - 1][j - 1] = sum;
        }
    }
    return gm;
}

// Alternating-sum formula g(n,j) = Phi(j) C(n,j) sum_a C(n-j,a)(-1)^a/Phi(j+a).
// Exact-backend cross-check; cancellation makes it useless in floats for
// large n.
template <class S>
GreenMatrix<S> green_matrix_formula(const PhiTable<S>& t) {
    GreenMatrix<S> gm;
    gm.n_max = t.n_max;
    gm.g.resize(gm.n_max);
    for (int n = 1; n <= gm.n_max; ++n) {
        gm.g[n - 1].assign(n, S(0));
        for (int j = 1; j <= n; ++j) {
            S sum(0);
            for (int a = 0; a <= n - j; ++a) {
                S term = binomial<S>(n - j, a) / t.at(j + a);
                if (a % 2 == 0) sum += term; else sum -= term;
            }
            gm.g[n - 1][j - 1] = t.at(j) * binomial<S>(n, j) * sum;
        }
    }
    return gm;
}

// P(L_n = j) = g(n,j) q(j:j).
template <class S>
std::vector<S> last_part_law(const DecrementMatrix<S>& q, const GreenMatrix<S>& green, int n) {
    std::vector<S> law(n);
    for (int j = 1; j <= n; ++j) law[j - 1] = green.at(n, j) * q.at(j, j);
    return law;
}

template <class S>
std::vector<S> first_part_law(const DecrementMatrix<S>& q, int n) {
    std::vector<S> law(n);
    for (int m = 1; m <= n; ++m) law[m - 1] = q.at(n, m);
    return law;
}

// Joint moments of the tripartite split (G, H, D) of [0,1] around the
// interval covering one uniform point, for a unit-normalized table:
//   E G^i H^{j-1} D^k = (sum_{a=0}^i C(i,a)(-1)^a / Phi(a+j+k))
//                       (sum_{b=0}^k C(k,b)(-1)^b Phi(j+b : j+b)).
// The second factor expands E[V^{j-1}(1-V)^k] for V = H/(1-G) with
// E V^{s-1} = Phi(s:s); the binomial index there runs over k.
template <class S>
S tripartite_moment(const PhiTable<S>& t, int i, int j, int k) {
    if (j < 1 || i < 0 || k < 0) throw std::invalid_argument("need i,k >= 0 and j >= 1");
    if (i + j + k > t.n_max) throw std::invalid_argument("i+j+k exceeds table size");
    if (t.norm != Normalization::unit)
        throw std::invalid_argument("tripartite_moment needs a unit-normalized table");
    S first(0);
    for (int a = 0; a <= i; ++a) {
        S term = binomial<S>(i, a) / t.at(a + j + k);
        if (a % 2 == 0) first += term; else first -= term;
    }
    S second(0);
    for (int b = 0; b <= k; ++b) {
        S term = binomial<S>(k, b) * t.at(j + b, j + b);
        if (b % 2 == 0) second += term; else second -= term;
    }
    return first * second;
}

// E f^n = n! d^n / prod_{i<=n} Phi(i) with the raw-scale table matching d.
template <class S>
S singleton_frequency_moment(const PhiTable<S>& t, const S& drift, int n) {
    if (n < 1 || n > t.n_max) throw std::invalid_argument("n out of range");
    S denom(1);
    for (int i = 1; i <= n; ++i) denom *= t.at(i);
    return factorial<S>(n) * int_pow<S>(drift, n) / denom;
}

}  // namespace regcomp

#endif
