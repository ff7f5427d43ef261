#include <doctest.h>

#include "regcomp/law.hpp"

using namespace regcomp;

namespace {

Rational rat(long long n, long long d = 1) { return Rational(n, d); }

Composition comp(std::initializer_list<int> parts) {
    Composition c;
    c.parts = parts;
    return c;
}

}  // namespace

TEST_CASE("composition indexing roundtrip") {
    for (int n = 1; n <= 8; ++n)
        for (std::uint32_t idx = 0; idx < (1u << (n - 1)); ++idx) {
            Composition c = Composition::from_index(idx, n);
            CHECK(c.total() == n);
            CHECK(c.to_index() == idx);
        }
    CHECK(comp({2, 1, 3}).str() == "2-1-3");
}

TEST_CASE("composition probabilities for (0,1) at n = 3") {
    auto q = two_param_decrement<Rational>(rat(0), rat(1), 3);
    CHECK(composition_probability(q, comp({3})) == rat(1, 3));
    CHECK(composition_probability(q, comp({2, 1})) == rat(1, 3));
    CHECK(composition_probability(q, comp({1, 2})) == rat(1, 6));
    CHECK(composition_probability(q, comp({1, 1, 1})) == rat(1, 6));
}

TEST_CASE("enumerated laws sum to one and match the serial reference") {
    std::vector<DecrementMatrix<Rational>> mats = {
        two_param_decrement<Rational>(rat(0), rat(1), 9),
        two_param_decrement<Rational>(rat(1, 2), rat(1, 2), 9),
        stick_breaking_decrement<Rational>({{rat(1, 2), rat(1)}}, 9)};
    for (const auto& q : mats)
        for (int n = 1; n <= 9; ++n) {
            auto law = enumerate_law(q, n);
            auto ref = enumerate_law_serial(q, n);
            CHECK(law.p == ref.p);
            CHECK(law.total_mass() == rat(1));
        }

    CHECK_THROWS(enumerate_law(mats[0], 17));
}

TEST_CASE("sampling consistency holds, and fails after a perturbation") {
    auto q = two_param_decrement<Rational>(rat(1, 2), rat(1, 2), 8);
    for (int n = 1; n <= 7; ++n) {
        auto rep = check_sampling_consistency(enumerate_law(q, n), enumerate_law(q, n + 1));
        CHECK(rep.pass);
    }

    auto law3 = enumerate_law(q, 3);
    auto law4 = enumerate_law(q, 4);
    law4.p[0] += rat(1, 100);
    law4.p[1] -= rat(1, 100);
    CHECK_FALSE(check_sampling_consistency(law3, law4).pass);
}

TEST_CASE("EPPF matches the two-parameter closed form") {
    std::vector<std::pair<Rational, Rational>> params = {
        {rat(0), rat(1)}, {rat(1, 2), rat(1, 2)}, {rat(1, 3), rat(2, 5)}, {rat(1, 2), rat(0)}};
    std::vector<std::vector<int>> size_sets = {{3}, {2, 1}, {1, 1, 1}, {2, 2}, {3, 2, 1},
                                               {4, 1, 1}, {2, 2, 2, 1}, {1, 1, 1, 1, 1}};
    for (const auto& [alpha, theta] : params) {
        auto q = two_param_decrement<Rational>(alpha, theta, 8);
        for (const auto& sizes : size_sets)
            CHECK(eppf(q, sizes) == two_param_eppf(alpha, theta, sizes));
    }

    // Ewens theta = 1: eppf = prod (n_i - 1)! / n!
    auto q = two_param_decrement<Rational>(rat(0), rat(1), 6);
    CHECK(eppf(q, {3, 2, 1}) == rat(2, 720));
    CHECK(eppf(q, {2, 2}) == rat(1, 24));
}

TEST_CASE("EPPF sums over set partitions to one") {
    // sum over partitions of [n] of eppf(block sizes) = 1; iterate partitions
    // via restricted growth strings
    auto q = two_param_decrement<Rational>(rat(1, 3), rat(2, 5), 7);
    for (int n = 2; n <= 7; ++n) {
        Rational total(0);
        std::vector<int> rgs(n, 0);
        auto block_sizes = [&]() {
            int k = *std::max_element(rgs.begin(), rgs.end()) + 1;
            std::vector<int> sizes(k, 0);
            for (int v : rgs) sizes[v]++;
            return sizes;
        };
        while (true) {
            total += eppf(q, block_sizes());
            int i = n - 1;
            for (; i >= 1; --i) {
                int cap = *std::max_element(rgs.begin(), rgs.begin() + i) + 1;
                if (rgs[i] < cap) {
                    rgs[i]++;
                    std::fill(rgs.begin() + i + 1, rgs.end(), 0);
                    break;
                }
                rgs[i] = 0;
            }
            if (i == 0) break;
        }
        CHECK(total == rat(1));
    }
}

TEST_CASE("ordering factor sums equal one") {
    std::vector<std::pair<Rational, Rational>> params = {
        {rat(1, 2), rat(1, 2)}, {rat(0), rat(1)}, {rat(1, 2), rat(0)}, {rat(1, 3), rat(7, 2)}};
    for (const auto& [alpha, theta] : params) {
        CHECK(ordering_factor_sum(alpha, theta, {5}) == rat(1));
        CHECK(ordering_factor_sum(alpha, theta, {3, 2}) == rat(1));
        CHECK(ordering_factor_sum(alpha, theta, {4, 2, 2, 1}) == rat(1));
    }
    CHECK_THROWS(ordering_factor_sum(rat(0), rat(0), {2, 1}));
}

TEST_CASE("Green matrix closed forms") {
    // (0,theta): g(n,j) = theta/(theta+j) for j < n
    auto q = two_param_decrement<Rational>(rat(0), rat(1), 10);
    auto g = green_matrix(q);
    CHECK(g.at(3, 1) == rat(1, 2));
    CHECK(g.at(3, 2) == rat(1, 3));
    for (int n = 2; n <= 10; ++n)
        for (int j = 1; j < n; ++j) CHECK(g.at(n, j) == rat(1, j + 1));

    auto qt = two_param_decrement<Rational>(rat(0), rat(5, 2), 10);
    auto gt = green_matrix(qt);
    for (int n = 2; n <= 10; ++n)
        for (int j = 1; j < n; ++j) CHECK(gt.at(n, j) == rat(5, 2) / (rat(5, 2) + j));

    // (alpha,0): g(n,j) = [alpha]_{n-j}/(n-j)!
    auto qa = two_param_decrement<Rational>(rat(1, 2), rat(0), 10);
    auto ga = green_matrix(qa);
    CHECK(ga.at(4, 2) == rat(3, 8));
    for (int n = 1; n <= 10; ++n)
        for (int j = 1; j <= n; ++j)
            CHECK(ga.at(n, j) ==
                  rising<Rational>(rat(1, 2), n - j) / factorial<Rational>(n - j));
}

TEST_CASE("Green matrix DP agrees with the alternating-sum formula") {
    std::vector<LevyFamily<Rational>> fams = {TwoParam<Rational>{rat(0), rat(1)},
                                              TwoParam<Rational>{rat(1, 2), rat(1, 2)},
                                              TwoParam<Rational>{rat(1, 3), rat(2, 5)}};
    for (const auto& fam : fams) {
        auto t = build_phi_table<Rational>(fam, 12);
        auto q = decrement_from_phi(t);
        auto dp = green_matrix(q);
        auto formula = green_matrix_formula(t);
        for (int n = 1; n <= 12; ++n)
            for (int j = 1; j <= n; ++j) CHECK(dp.at(n, j) == formula.at(n, j));
    }
}

TEST_CASE("last-part law") {
    auto q = two_param_decrement<Rational>(rat(0), rat(1), 8);
    auto g = green_matrix(q);
    auto law3 = last_part_law(q, g, 3);
    CHECK(law3 == std::vector<Rational>{rat(1, 2), rat(1, 6), rat(1, 3)});

    // oracle: accumulate the last part over the full enumeration
    for (int n = 2; n <= 8; ++n) {
        auto law = last_part_law(q, g, n);
        std::vector<Rational> oracle(n, rat(0));
        auto full = enumerate_law(q, n);
        for (std::uint32_t idx = 0; idx < full.p.size(); ++idx) {
            Composition c = Composition::from_index(idx, n);
            oracle[c.parts.back() - 1] += full.p[idx];
        }
        CHECK(law == oracle);
        CHECK(std::accumulate(law.begin(), law.end(), rat(0)) == rat(1));
    }

    // first-part law is just the decrement row
    auto f = first_part_law(q, 5);
    for (int m = 1; m <= 5; ++m) CHECK(f[m - 1] == rat(1, 5));
}

TEST_CASE("tripartite split moments") {
    auto t = build_phi_table<Rational>(TwoParam<Rational>{rat(0), rat(1)}, 10);
    // E G = 1 - 1/Phi(2) = 1/4
    CHECK(tripartite_moment(t, 1, 1, 0) == rat(1, 4));
    // E H = Phi(1:1)/Phi(1) specialization: i = 0, k = 0, j = 2 gives E H
    // through E H^{j-1}; with j = 2 this is Phi(2:2)/Phi(2)/... via formula
    CHECK(tripartite_moment(t, 0, 2, 0) == t.at(2, 2) / t.at(2));
    // second moments of the left and right gaps differ when the structure is
    // asymmetric (first moments coincide since E[G + H + D] = 1 regardless)
    CHECK(tripartite_moment(t, 2, 1, 0) == rat(1, 6));
    CHECK(tripartite_moment(t, 0, 1, 2) == rat(1, 9));

    // drift-only: H is a point, so any j >= 2 moment vanishes
    auto td = build_phi_table<Rational>(LevyFamily<Rational>(Degenerate{DegenerateKind::singletons}), 6);
    CHECK(tripartite_moment(td, 0, 2, 0) == rat(0));
    CHECK(tripartite_moment(td, 1, 3, 1) == rat(0));
}

TEST_CASE("tripartite moments against the enumeration oracle") {
    // C(n-1; i, j-1, k) E[G^i H^{j-1} D^k] equals the probability that the
    // part covering a uniformly chosen ball has size j with i balls before
    // and k after, computed by enumeration.
    std::vector<LevyFamily<Rational>> fams = {TwoParam<Rational>{rat(0), rat(1)},
                                              TwoParam<Rational>{rat(1, 2), rat(1, 2)}};
    for (const auto& fam : fams) {
        auto t = build_phi_table<Rational>(fam, 8);
        auto q = decrement_from_phi(t);
        for (int n = 2; n <= 7; ++n) {
            auto law = enumerate_law(q, n);
            for (int j = 1; j <= n; ++j)
                for (int i = 0; i + j <= n; ++i) {
                    int k = n - i - j;
                    Rational oracle(0);
                    for (std::uint32_t idx = 0; idx < law.p.size(); ++idx) {
                        Composition c = Composition::from_index(idx, n);
                        int before = 0;
                        for (int part : c.parts) {
                            if (part == j && before == i) oracle += law.p[idx] * rat(j, n);
                            before += part;
                        }
                    }
                    Rational coef = factorial<Rational>(n - 1) /
                                    (factorial<Rational>(i) * factorial<Rational>(j - 1) *
                                     factorial<Rational>(k));
                    CHECK(coef * tripartite_moment(t, i, j, k) == oracle);
                }
        }
    }
}

TEST_CASE("singleton frequency moments") {
    // unit atom at 1/2 with unit drift: Phi(i) = i + 1 - 2^{-i}
    DiscreteMeasure<Rational> fam;
    fam.drift = rat(1);
    fam.atoms = {{rat(1, 2), rat(1)}};
    auto t = build_phi_table<Rational>(LevyFamily<Rational>(fam), 6, Normalization::raw);
    for (int i = 1; i <= 6; ++i)
        CHECK(t.at(i) == rat(i + 1) - Rational(1) / int_pow<Rational>(rat(2), i));
    CHECK(singleton_frequency_moment(t, rat(1), 1) == rat(2, 3));
    CHECK(singleton_frequency_moment(t, rat(1), 2) == rat(16, 33));

    // drift only: f = 1 almost surely
    DiscreteMeasure<Rational> drift;
    drift.drift = rat(1);
    auto td = build_phi_table<Rational>(LevyFamily<Rational>(drift), 5, Normalization::raw);
    for (int i = 1; i <= 5; ++i) CHECK(singleton_frequency_moment(td, rat(1), i) == rat(1));

    // no drift: f = 0 almost surely
    DiscreteMeasure<Rational> no_drift;
    no_drift.atoms = {{rat(1, 2), rat(1)}};
    auto t0 = build_phi_table<Rational>(LevyFamily<Rational>(no_drift), 5, Normalization::raw);
    CHECK(singleton_frequency_moment(t0, rat(0), 3) == rat(0));
}
