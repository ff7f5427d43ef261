#ifndef REGCOMP_LEVY_HPP
#define REGCOMP_LEVY_HPP

#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "regcomp/scalar.hpp"

namespace regcomp {

struct invalid_levy_family : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Drift plus a finite discrete measure on (0,1]. An atom at x=1 encodes
// killing (the subordinator's jump to infinity), so one-part structures and
// the (alpha,0)-style terminal interval are representable without a separate
// killing field.
template <class S>
struct DiscreteMeasure {
    S drift{0};
    std::vector<std::pair<S, S>> atoms;  // (location in (0,1], positive weight)
};

// Measure with density c * x^{a-1} (1-x)^{b-1} on (0,1). a > 0 keeps the
// first moment finite. Exact evaluation only for integer a, b.
template <class S>
struct BetaDensity {
    S drift{0};
    S scale{1};
    S a{1};
    S b{1};
};

// Closed-form two-parameter family, 0 <= alpha < 1, theta >= 0.
template <class S>
struct TwoParam {
    S alpha{0};
    S theta{0};
};

enum class DegenerateKind { singletons, one_part };

struct Degenerate {
    DegenerateKind kind;
};

template <class S>
using LevyFamily = std::variant<DiscreteMeasure<S>, BetaDensity<S>, TwoParam<S>, Degenerate>;

template <class S>
void validate(const LevyFamily<S>& fam) {
    struct V {
        void operator()(const DiscreteMeasure<S>& m) const {
            if (m.drift < S(0)) throw invalid_levy_family("negative drift");
            bool mass = m.drift > S(0);
            for (const auto& [x, w] : m.atoms) {
                if (!(x > S(0)) || x > S(1)) throw invalid_levy_family("atom location outside (0,1]");
                if (!(w > S(0))) throw invalid_levy_family("non-positive atom weight");
                mass = true;
            }
            if (!mass) throw invalid_levy_family("drift and measure both zero");
        }
        void operator()(const BetaDensity<S>& m) const {
            if (m.drift < S(0)) throw invalid_levy_family("negative drift");
            if (!(m.scale > S(0))) throw invalid_levy_family("non-positive scale");
            if (!(m.a > S(0)) || !(m.b > S(0)))
                throw invalid_levy_family("beta exponents must be positive");
        }
        void operator()(const TwoParam<S>& m) const {
            if (m.alpha < S(0) || m.alpha >= S(1))
                throw invalid_levy_family("alpha outside [0,1)");
            if (m.theta < S(0)) throw invalid_levy_family("theta negative");
        }
        void operator()(const Degenerate&) const {}
    };
    std::visit(V{}, fam);
}

}  // namespace regcomp

#endif
