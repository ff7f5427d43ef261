#ifndef REGCOMP_DECREMENT_HPP
#define REGCOMP_DECREMENT_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "regcomp/phi.hpp"

namespace regcomp {

// Lower-triangular row-stochastic matrix q(n:m), the law of the first part.
template <class S>
struct DecrementMatrix {
    int n_max = 0;
    std::vector<std::vector<S>> q;  // q[n-1][m-1]

    const S& at(int n, int m) const { return q.at(n - 1).at(m - 1); }
};

template <class S>
DecrementMatrix<S> decrement_from_phi(const PhiTable<S>& table) {
    DecrementMatrix<S> d;
    d.n_max = table.n_max;
    d.q.resize(d.n_max);
    for (int n = 1; n <= d.n_max; ++n) {
        d.q[n - 1].assign(n, S(0));
        for (int m = 1; m <= n; ++m) d.q[n - 1][m - 1] = table.at(n, m) / table.at(n);
    }
    return d;
}

// q(n:m) = C(n,m) [1-alpha]_{m-1} ((n-m) alpha + m theta) / (n [theta+n-m]_m)
// for m < n; the diagonal is q(n:n) = [1-alpha]_{n-1} / [1+theta]_{n-1}, which
// also covers theta = 0 where the generic expression is 0/0.
template <class S>
DecrementMatrix<S> two_param_decrement(const S& alpha, const S& theta, int n_max) {
    if (alpha < S(0) || alpha >= S(1) || theta < S(0))
        throw std::invalid_argument("two-parameter family needs 0 <= alpha < 1, theta >= 0");
    DecrementMatrix<S> d;
    d.n_max = n_max;
    d.q.resize(n_max);
    for (int n = 1; n <= n_max; ++n) {
        d.q[n - 1].assign(n, S(0));
        if (alpha == S(0) && theta == S(0)) {
            // one-part degenerate limit
            d.q[n - 1][n - 1] = S(1);
            continue;
        }
        for (int m = 1; m < n; ++m) {
            d.q[n - 1][m - 1] = binomial<S>(n, m) * rising<S>(S(1) - alpha, m - 1) *
                                (S(n - m) * alpha + S(m) * theta) /
                                (S(n) * rising<S>(theta + S(n - m), m));
        }
        d.q[n - 1][n - 1] = rising<S>(S(1) - alpha, n - 1) / rising<S>(theta + S(1), n - 1);
    }
    return d;
}

template <class S>
DecrementMatrix<S> degenerate_decrement(DegenerateKind kind, int n_max) {
    DecrementMatrix<S> d;
    d.n_max = n_max;
    d.q.resize(n_max);
    for (int n = 1; n <= n_max; ++n) {
        d.q[n - 1].assign(n, S(0));
        d.q[n - 1][kind == DegenerateKind::singletons ? 0 : n - 1] = S(1);
    }
    return d;
}

// Stick-breaking with cut distribution given by probability atoms on (0,1]:
// q(n:m) = C(n,m) E[X^m (1-X)^{n-m}] / E[1 - (1-X)^n].
template <class S>
DecrementMatrix<S> stick_breaking_decrement(const std::vector<std::pair<S, S>>& x_atoms,
                                            int n_max) {
    S total(0);
    for (const auto& [x, w] : x_atoms) {
        if (!(x > S(0)) || x > S(1)) throw std::invalid_argument("atom outside (0,1]");
        total += w;
    }
    if (!scalar_traits<S>::near(total, S(1)))
        throw std::invalid_argument("stick-breaking atom weights must sum to 1");
    DiscreteMeasure<S> m;
    m.drift = S(0);
    m.atoms = x_atoms;
    return decrement_from_phi(build_phi_table<S>(LevyFamily<S>(m), n_max, Normalization::raw));
}

struct RecursionReport {
    bool pass = true;
    int n = 0, m = 0;
    double residual = 0;
};

// Defining recursion of a regenerative decrement matrix:
// q(n:m) = (m+1)/(n+1) q(n+1:m+1) + (n+1-m)/(n+1) q(n+1:m)
//          + 1/(n+1) q(n+1:1) q(n:m).
template <class S>
RecursionReport verify_decrement_recursion(const DecrementMatrix<S>& d) {
    for (int n = 1; n < d.n_max; ++n)
        for (int m = 1; m <= n; ++m) {
            S rhs = (S(m + 1) * d.at(n + 1, m + 1) + S(n + 1 - m) * d.at(n + 1, m) +
                     d.at(n + 1, 1) * d.at(n, m)) /
                    S(n + 1);
            if (!scalar_traits<S>::near(d.at(n, m), rhs))
                return {false, n, m, scalar_traits<S>::to_double(d.at(n, m) - rhs)};
        }
    return {};
}

// Rebuild Phi from structural moments p(n) = q(n:n) via
// Phi(n)(p(n) + (-1)^n) = sum_{j<n} (-1)^{j+1} C(n,j) Phi(j), Phi(1) = 1.
template <class S>
PhiTable<S> phi_from_structural_moments(const std::vector<S>& p, int n_max) {
    if (n_max < 1 || static_cast<int>(p.size()) < n_max)
        throw std::invalid_argument("need n_max structural moments");
    if (p[0] != S(1)) throw std::invalid_argument("p(1) must be 1");
    std::vector<S> phi(n_max);
    phi[0] = S(1);
    for (int n = 2; n <= n_max; ++n) {
        S denom = p[n - 1] + (n % 2 == 0 ? S(1) : S(-1));
        if (denom == S(0))
            throw std::invalid_argument("degenerate structural moments (use a preset)");
        S rhs(0);
        for (int j = 1; j < n; ++j) {
            S term = binomial<S>(n, j) * phi[j - 1];
            if (j % 2 == 1) rhs += term; else rhs -= term;
        }
        phi[n - 1] = rhs / denom;
        if (!(scalar_traits<S>::to_double(phi[n - 1]) > 0))
            throw not_completely_alternating(n, n, scalar_traits<S>::str(phi[n - 1]));
    }
    return phi_from_sequence(phi, n_max, Normalization::unit);
}

// e(n) = q(n:1) q(n-1:1) ... q(2:1), the probability that n balls land in n
// distinct boxes.
template <class S>
std::vector<S> singleton_probs_from_q(const DecrementMatrix<S>& d) {
    std::vector<S> e(d.n_max);
    e[0] = S(1);
    for (int n = 2; n <= d.n_max; ++n) e[n - 1] = e[n - 2] * d.at(n, 1);
    return e;
}

// Inverse: Phi(1)/Phi(n) = prod_{j=2}^n (1 - e(j)/(j e(j-1))).
template <class S>
PhiTable<S> phi_from_singleton_probs(const std::vector<S>& e, int n_max) {
    if (n_max < 1 || static_cast<int>(e.size()) < n_max)
        throw std::invalid_argument("need n_max singleton probabilities");
    if (e[0] != S(1)) throw std::invalid_argument("e(1) must be 1");
    std::vector<S> phi(n_max);
    phi[0] = S(1);
    S inv(1);  // Phi(1)/Phi(n)
    for (int n = 2; n <= n_max; ++n) {
        S factor = S(1) - e[n - 1] / (S(n) * e[n - 2]);
        if (!(scalar_traits<S>::to_double(factor) > 0))
            throw std::invalid_argument("singleton probabilities force non-positive Phi");
        inv *= factor;
        phi[n - 1] = S(1) / inv;
    }
    return phi_from_sequence(phi, n_max, Normalization::unit);
}

// Polynomial reconstruction of the full matrix from the first column:
// q(n:m) = C(n,m) sum_{j=0}^m (-1)^{m-j+1} C(m,j)
//                 prod_{k=0}^{j-1} (1 - q(n-k:1)/(n-k)).
template <class S>
DecrementMatrix<S> decrement_from_first_column(const std::vector<S>& q1, int n_max) {
    DecrementMatrix<S> d;
    d.n_max = n_max;
    d.q.resize(n_max);
    for (int n = 1; n <= n_max; ++n) {
        d.q[n - 1].assign(n, S(0));
        for (int m = 1; m <= n; ++m) {
            S sum(0);
            for (int j = 0; j <= m; ++j) {
                S prod(1);
                for (int k = 0; k < j; ++k) prod *= S(1) - q1[n - k - 1] / S(n - k);
                S term = binomial<S>(m, j) * prod;
                if ((m - j) % 2 == 0) sum -= term; else sum += term;
            }
            d.q[n - 1][m - 1] = binomial<S>(n, m) * sum;
        }
    }
    return d;
}

template <class S>
struct SymmetryVerdict {
    bool symmetric = false;
    S alpha{};           // valid when symmetric
    int first_bad_n = 0; // valid when asymmetric
    bool inconsistent = false;  // first/last equal but Phi != Phi_alpha
};

// P(L_n = 1) = n [1 - sum_{k=2}^n C(n-1,k-1) (-1)^k / Phi(k)], unit scale.
template <class S>
S last_part_singleton_prob(const PhiTable<S>& t, int n) {
    S sum(0);
    for (int k = 2; k <= n; ++k) {
        S term = binomial<S>(n - 1, k - 1) / t.at(k);
        if (k % 2 == 0) sum += term; else sum -= term;
    }
    return S(n) * (S(1) - sum);
}

// A regenerative composition structure is reversible iff P(F_n=1) = P(L_n=1)
// for all n, in which case Phi is the (alpha,alpha) exponent
// Phi_alpha(n) = [1+alpha]_{n-1}/(n-1)! with alpha = Phi(2) - 1.
template <class S>
SymmetryVerdict<S> detect_symmetry(const PhiTable<S>& t) {
    if (t.norm != Normalization::unit)
        throw std::invalid_argument("detect_symmetry needs a unit-normalized table");
    if (t.n_max < 3) throw std::invalid_argument("detect_symmetry needs n_max >= 3");
    constexpr double tol = scalar_traits<S>::exact ? 0.0 : 1e-9;
    for (int n = 3; n <= t.n_max; ++n) {
        S first = S(n) * (t.at(n) - t.at(n - 1)) / t.at(n);
        S last = last_part_singleton_prob(t, n);
        if (scalar_traits<S>::to_double(first - last) > tol ||
            scalar_traits<S>::to_double(last - first) > tol)
            return {false, S(0), n, false};
    }
    S alpha = t.at(2) - S(1);
    for (int n = 2; n <= t.n_max; ++n) {
        S expect = rising<S>(S(1) + alpha, n - 1) / factorial<S>(n - 1);
        if (scalar_traits<S>::to_double(t.at(n) - expect) > tol ||
            scalar_traits<S>::to_double(expect - t.at(n)) > tol)
            return {false, alpha, n, true};
    }
    return {true, alpha, 0, false};
}

}  // namespace regcomp

#endif
