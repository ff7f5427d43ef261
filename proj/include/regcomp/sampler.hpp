#ifndef REGCOMP_SAMPLER_HPP
#define REGCOMP_SAMPLER_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "regcomp/law.hpp"

namespace regcomp {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

// Deterministic xoshiro256++ stream. Identical seed gives an identical draw
// sequence; independent streams come from substream(), which reseeds through
// splitmix64 on (seed, index).
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = detail::splitmix64(sm);
    }

    RngStream substream(std::uint64_t index) const {
        std::uint64_t mix = base_seed_ ^ (0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL);
        RngStream r(mix);
        r.base_seed_ = mix;
        return r;
    }

    std::uint64_t next() {
        auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // index into a cumulative weight vector ending at ~1
    int categorical(const std::vector<double>& cumulative) {
        double u = uniform();
        for (std::size_t i = 0; i + 1 < cumulative.size(); ++i)
            if (u < cumulative[i]) return static_cast<int>(i);
        return static_cast<int>(cumulative.size()) - 1;
    }

  private:
    std::uint64_t s_[4];
    std::uint64_t base_seed_ = 0;

    friend RngStream make_stream(std::uint64_t);
};

inline RngStream make_stream(std::uint64_t seed) {
    RngStream r(seed);
    r.base_seed_ = seed;
    return r;
}

// Decrement matrix lowered to cumulative double rows for sampling. Rows are
// renormalized to absorb the lowering error.
template <class S>
struct SamplerTable {
    int n_max = 0;
    std::vector<std::vector<double>> cumulative;  // cumulative[n-1]

    explicit SamplerTable(const DecrementMatrix<S>& q) : n_max(q.n_max) {
        cumulative.resize(n_max);
        for (int n = 1; n <= n_max; ++n) {
            auto& row = cumulative[n - 1];
            row.resize(n);
            double total = 0;
            for (int m = 1; m <= n; ++m) total += scalar_traits<S>::to_double(q.at(n, m));
            double acc = 0;
            for (int m = 1; m <= n; ++m) {
                acc += scalar_traits<S>::to_double(q.at(n, m)) / total;
                row[m - 1] = acc;
            }
            row[n - 1] = 1.0;
        }
    }
};

// Runs the decrement chain from n: draw the first part from q(n:.), recurse
// on the remainder.
template <class S>
Composition sample_composition(const SamplerTable<S>& table, int n, RngStream& rng) {
    if (n > table.n_max) throw std::invalid_argument("n exceeds sampler table size");
    Composition c;
    int remaining = n;
    while (remaining > 0) {
        int m = rng.categorical(table.cumulative[remaining - 1]) + 1;
        c.parts.push_back(m);
        remaining -= m;
    }
    return c;
}

// One step of the sequential growth kernel: walk the blocks left to right;
// at block i either insert a singleton in front of it or adjoin the new
// element to it, otherwise move on. Falling off the end appends a singleton
// (the residual branch, which has conditional probability q(1:1) = 1).
template <class S>
Composition grow_composition(const DecrementMatrix<S>& q, const Composition& current,
                             RngStream& rng) {
    const int n = current.total();
    if (n + 1 > q.n_max) throw std::invalid_argument("grown composition exceeds matrix size");
    Composition next;
    next.parts = current.parts;
    int tail = n;  // N_i
    for (std::size_t i = 0; i < current.parts.size(); ++i) {
        const int ni = current.parts[i];
        const double qdenom = scalar_traits<S>::to_double(q.at(tail, ni));
        if (qdenom <= 0.0)
            throw std::logic_error("growth kernel hit a zero-probability state");
        const double insert_p =
            scalar_traits<S>::to_double(q.at(tail + 1, 1)) / (tail + 1);
        const double adjoin_p = static_cast<double>(ni + 1) / (tail + 1) *
                                scalar_traits<S>::to_double(q.at(tail + 1, ni + 1)) / qdenom;
        const double u = rng.uniform();
        if (u < insert_p) {
            next.parts.insert(next.parts.begin() + i, 1);
            return next;
        }
        if (u < insert_p + adjoin_p) {
            next.parts[i] += 1;
            return next;
        }
        tail -= ni;
    }
    next.parts.push_back(1);
    return next;
}

// Exact pushforward of a level-n law through the growth kernel's branch
// probabilities. This is the constructive face of sampling consistency: the
// result must equal enumerate_law(q, n+1).
template <class S>
CompositionLaw<S> grow_law_pushforward(const DecrementMatrix<S>& q,
                                       const CompositionLaw<S>& law_n) {
    const int n = law_n.n;
    CompositionLaw<S> out;
    out.n = n + 1;
    out.p.assign(std::size_t(1) << n, S(0));
    for (std::uint32_t idx = 0; idx < law_n.p.size(); ++idx) {
        const S& mass = law_n.p[idx];
        if (mass == S(0)) continue;
        Composition lambda = Composition::from_index(idx, n);
        S skip(1);  // probability of having passed all previous blocks
        int tail = n;
        for (std::size_t i = 0; i < lambda.parts.size(); ++i) {
            const int ni = lambda.parts[i];
            S insert_p = q.at(tail + 1, 1) / S(tail + 1);
            S adjoin_p = S(ni + 1) / S(tail + 1) * q.at(tail + 1, ni + 1) / q.at(tail, ni);
            {
                Composition mu = lambda;
                mu.parts.insert(mu.parts.begin() + i, 1);
                out.p[mu.to_index()] += mass * skip * insert_p;
            }
            {
                Composition mu = lambda;
                mu.parts[i] += 1;
                out.p[mu.to_index()] += mass * skip * adjoin_p;
            }
            skip *= S(1) - insert_p - adjoin_p;
            tail -= ni;
        }
        Composition mu = lambda;
        mu.parts.push_back(1);
        out.p[mu.to_index()] += mass * skip;
    }
    return out;
}

// Stick-breaking sampler: break [0,1] by i.i.d. relative cuts drawn from the
// atom distribution, throw n uniforms, group them by interval.
inline Composition sample_stick_breaking(const std::vector<std::pair<double, double>>& x_atoms,
                                         int n, RngStream& rng, int draw_cap = 10000) {
    std::vector<double> cum;
    {
        double total = 0;
        for (const auto& [x, w] : x_atoms) total += w;
        double acc = 0;
        for (const auto& [x, w] : x_atoms) {
            acc += w / total;
            cum.push_back(acc);
        }
        cum.back() = 1.0;
    }
    std::vector<double> u(n);
    for (auto& v : u) v = rng.uniform();
    std::sort(u.begin(), u.end());

    Composition c;
    std::size_t next_point = 0;
    double y = 0;  // right endpoint reached so far
    int iterations = 0;
    while (next_point < u.size()) {
        if (++iterations > draw_cap)
            throw std::runtime_error("stick-breaking draw cap exceeded (X too close to 0)");
        double x = x_atoms[rng.categorical(cum)].first;
        y = 1.0 - (1.0 - y) * (1.0 - x);
        int count = 0;
        while (next_point < u.size() && u[next_point] < y) {
            ++count;
            ++next_point;
        }
        if (count > 0) c.parts.push_back(count);
    }
    return c;
}

// Example-5 construction: alternate beta(1, 1/d) breaks (closed singleton
// stretches) with X breaks (gaps); return the total closed length, a draw of
// the singleton frequency f up to O(eps) truncation bias.
inline double sample_myriads_frequency(const std::vector<std::pair<double, double>>& x_atoms,
                                       double drift, double eps, RngStream& rng) {
    if (!(drift > 0)) throw std::invalid_argument("myriads construction needs d > 0");
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("eps must lie in (0,1)");
    std::vector<double> cum;
    {
        double total = 0;
        for (const auto& [x, w] : x_atoms) total += w;
        double acc = 0;
        for (const auto& [x, w] : x_atoms) {
            acc += w / total;
            cum.push_back(acc);
        }
        cum.back() = 1.0;
    }
    double closed = 0;
    double stick = 1.0;
    while (stick >= eps) {
        // beta(1, 1/d) via inverse CDF: Z = 1 - U^{d}
        double z = 1.0 - std::pow(rng.uniform(), drift);
        closed += stick * z;
        stick *= 1.0 - z;
        double x = x_atoms[rng.categorical(cum)].first;
        stick *= 1.0 - x;
    }
    return closed;
}

struct EmpiricalLaw {
    int n = 0;
    std::vector<std::uint64_t> counts;  // indexed by break mask
    std::uint64_t sample_size = 0;

    void add(const Composition& c) {
        counts.at(c.to_index())++;
        sample_size++;
    }
};

inline EmpiricalLaw make_empirical(int n) {
    EmpiricalLaw e;
    e.n = n;
    e.counts.assign(std::size_t(1) << (n - 1), 0);
    return e;
}

// Batch chain sampling. Work is split into fixed-size chunks, each with its
// own substream, so counts are identical for any thread count.
template <class S>
EmpiricalLaw sample_batch(const SamplerTable<S>& table, int n, std::uint64_t count,
                          std::uint64_t seed, int chunk = 4096) {
    EmpiricalLaw emp = make_empirical(n);
    const std::int64_t num_chunks = static_cast<std::int64_t>((count + chunk - 1) / chunk);
    RngStream root = make_stream(seed);
#pragma omp parallel
    {
        EmpiricalLaw local = make_empirical(n);
#pragma omp for schedule(dynamic)
        for (std::int64_t c = 0; c < num_chunks; ++c) {
            RngStream rng = root.substream(static_cast<std::uint64_t>(c));
            std::uint64_t lo = static_cast<std::uint64_t>(c) * chunk;
            std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, count);
            for (std::uint64_t i = lo; i < hi; ++i) local.add(sample_composition(table, n, rng));
        }
#pragma omp critical
        {
            for (std::size_t i = 0; i < emp.counts.size(); ++i) emp.counts[i] += local.counts[i];
            emp.sample_size += local.sample_size;
        }
    }
    return emp;
}

template <class S>
EmpiricalLaw sample_batch_serial(const SamplerTable<S>& table, int n, std::uint64_t count,
                                 std::uint64_t seed, int chunk = 4096) {
    EmpiricalLaw emp = make_empirical(n);
    RngStream root = make_stream(seed);
    const std::uint64_t num_chunks = (count + chunk - 1) / chunk;
    for (std::uint64_t c = 0; c < num_chunks; ++c) {
        RngStream rng = root.substream(c);
        std::uint64_t lo = c * chunk;
        std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, count);
        for (std::uint64_t i = lo; i < hi; ++i) emp.add(sample_composition(table, n, rng));
    }
    return emp;
}

template <class S>
double tv_distance(const EmpiricalLaw& emp, const CompositionLaw<S>& exact) {
    if (emp.n != exact.n) throw std::invalid_argument("mismatched n");
    double tv = 0;
    for (std::size_t i = 0; i < emp.counts.size(); ++i) {
        double freq = static_cast<double>(emp.counts[i]) / emp.sample_size;
        tv += std::abs(freq - scalar_traits<S>::to_double(exact.p[i]));
    }
    return tv / 2;
}

struct ChiSquareResult {
    double statistic = 0;
    int dof = 0;
    double p_value = 1;
};

double chi_square_p_value(double statistic, int dof);

// Goodness of fit against an exact law; cells with expected count < 5 are
// pooled into one.
template <class S>
ChiSquareResult chi_square(const EmpiricalLaw& emp, const CompositionLaw<S>& exact) {
    if (emp.n != exact.n) throw std::invalid_argument("mismatched n");
    double stat = 0;
    int cells = 0;
    double pooled_obs = 0, pooled_exp = 0;
    for (std::size_t i = 0; i < emp.counts.size(); ++i) {
        double expected = scalar_traits<S>::to_double(exact.p[i]) * emp.sample_size;
        if (expected < 5.0) {
            pooled_obs += static_cast<double>(emp.counts[i]);
            pooled_exp += expected;
            continue;
        }
        double d = emp.counts[i] - expected;
        stat += d * d / expected;
        ++cells;
    }
    if (pooled_exp > 0) {
        double d = pooled_obs - pooled_exp;
        stat += d * d / pooled_exp;
        ++cells;
    }
    ChiSquareResult r;
    r.statistic = stat;
    r.dof = std::max(1, cells - 1);
    r.p_value = chi_square_p_value(stat, r.dof);
    return r;
}

// Two-sample Kolmogorov-Smirnov p-value (asymptotic).
double ks_two_sample_p_value(std::vector<double> a, std::vector<double> b);

}  // namespace regcomp

#endif
