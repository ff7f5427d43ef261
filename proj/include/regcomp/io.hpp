#ifndef REGCOMP_IO_HPP
#define REGCOMP_IO_HPP

#include <ostream>
#include <string>
#include <vector>

#include "regcomp/law.hpp"
#include "regcomp/phi.hpp"

namespace regcomp {

// One spec-file schema shared by all CLI subcommands. Numbers are parsed
// exactly (integers, {"num","den"} objects, or decimal strings) and lowered
// to doubles when the float backend is requested. A raw decrement matrix may
// be supplied instead of a family, for verifying externally produced
// matrices.
struct SpecFile {
    LevyFamily<Rational> family{TwoParam<Rational>{}};
    bool has_raw_matrix = false;
    std::vector<std::vector<Rational>> raw_q;  // raw_q[n-1][m-1]
    int n_max = 10;
    std::string backend = "exact";  // "exact" | "float"
    Normalization norm = Normalization::unit;
};

SpecFile parse_spec_file(const std::string& path);
SpecFile parse_spec_json(const std::string& json_text);

LevyFamily<double> lower_family(const LevyFamily<Rational>& fam);

template <class S>
DecrementMatrix<S> raw_matrix_from_spec(const SpecFile& spec) {
    DecrementMatrix<S> d;
    d.n_max = static_cast<int>(spec.raw_q.size());
    d.q.resize(d.n_max);
    for (int n = 1; n <= d.n_max; ++n) {
        d.q[n - 1].resize(n);
        for (int m = 1; m <= n; ++m)
            d.q[n - 1][m - 1] = S(scalar_traits<Rational>::to_double(spec.raw_q[n - 1][m - 1]));
    }
    return d;
}

template <>
inline DecrementMatrix<Rational> raw_matrix_from_spec<Rational>(const SpecFile& spec) {
    DecrementMatrix<Rational> d;
    d.n_max = static_cast<int>(spec.raw_q.size());
    d.q = spec.raw_q;
    return d;
}

// CSV layouts: one row per n, entries left empty above the diagonal. Exact
// scalars print as "p/q", floats as shortest round-trip decimals.

template <class S>
void write_phi_csv(std::ostream& os, const PhiTable<S>& t) {
    os << "n,phi";
    for (int m = 1; m <= t.n_max; ++m) os << ",m" << m;
    os << "\n";
    for (int n = 1; n <= t.n_max; ++n) {
        os << n << "," << scalar_traits<S>::str(t.at(n));
        for (int m = 1; m <= t.n_max; ++m)
            os << "," << (m <= n ? scalar_traits<S>::str(t.at(n, m)) : std::string());
        os << "\n";
    }
}

template <class S>
void write_decrement_csv(std::ostream& os, const DecrementMatrix<S>& d) {
    os << "n";
    for (int m = 1; m <= d.n_max; ++m) os << ",m" << m;
    os << "\n";
    for (int n = 1; n <= d.n_max; ++n) {
        os << n;
        for (int m = 1; m <= d.n_max; ++m)
            os << "," << (m <= n ? scalar_traits<S>::str(d.at(n, m)) : std::string());
        os << "\n";
    }
}

template <class S>
void write_green_csv(std::ostream& os, const GreenMatrix<S>& g) {
    os << "n";
    for (int j = 1; j <= g.n_max; ++j) os << ",j" << j;
    os << "\n";
    for (int n = 1; n <= g.n_max; ++n) {
        os << n;
        for (int j = 1; j <= g.n_max; ++j)
            os << "," << (j <= n ? scalar_traits<S>::str(g.at(n, j)) : std::string());
        os << "\n";
    }
}

template <class S>
void write_law_csv(std::ostream& os, const CompositionLaw<S>& law) {
    os << "composition,probability\n";
    for (std::uint32_t idx = 0; idx < law.p.size(); ++idx)
        os << Composition::from_index(idx, law.n).str() << ","
           << scalar_traits<S>::str(law.p[idx]) << "\n";
}

}  // namespace regcomp

#endif
