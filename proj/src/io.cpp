#include "regcomp/io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace regcomp {

namespace {

using nlohmann::json;

struct spec_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Digit-by-digit accumulation; BigInt's string constructor would read a
// leading zero as an octal prefix.
BigInt bigint_from_digits(const std::string& s, const std::string& field) {
    if (s.empty()) throw spec_error("field '" + field + "': empty number");
    BigInt v = 0;
    for (char c : s) {
        if (c < '0' || c > '9')
            throw spec_error("field '" + field + "': bad number '" + s + "'");
        v = v * 10 + (c - '0');
    }
    return v;
}

Rational rational_from_decimal_string(const std::string& s, const std::string& field) {
    std::string t = s;
    bool neg = false;
    std::size_t pos = 0;
    if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) neg = t[pos++] == '-';
    // fraction form "p/q"
    if (auto slash = t.find('/'); slash != std::string::npos) {
        BigInt den = bigint_from_digits(t.substr(slash + 1), field);
        if (den == 0) throw spec_error("field '" + field + "': zero denominator in '" + s + "'");
        Rational r(bigint_from_digits(t.substr(pos, slash - pos), field), den);
        return neg ? -r : r;
    }
    std::string digits;
    int frac_digits = 0;
    bool seen_dot = false;
    for (; pos < t.size(); ++pos) {
        char c = t[pos];
        if (c == '.') {
            if (seen_dot) throw spec_error("field '" + field + "': bad decimal '" + s + "'");
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits += c;
            if (seen_dot) ++frac_digits;
        } else {
            throw spec_error("field '" + field + "': bad number '" + s + "'");
        }
    }
    Rational r(bigint_from_digits(digits, field),
               boost::multiprecision::pow(BigInt(10), frac_digits));
    return neg ? -r : r;
}

Rational parse_rational(const json& v, const std::string& field) {
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_float()) {
        // exact binary value of the double
        double d = v.get<double>();
        Rational r;
        int exp;
        double mant = std::frexp(d, &exp);
        BigInt num = static_cast<long long>(std::ldexp(mant, 53));
        exp -= 53;
        r = Rational(num);
        if (exp >= 0) r *= Rational(boost::multiprecision::pow(BigInt(2), exp));
        else r /= Rational(boost::multiprecision::pow(BigInt(2), -exp));
        return r;
    }
    if (v.is_string()) return rational_from_decimal_string(v.get<std::string>(), field);
    if (v.is_object()) {
        if (!v.contains("num") || !v.contains("den"))
            throw spec_error("field '" + field + "': rational object needs num and den");
        return Rational(BigInt(v["num"].get<long long>()), BigInt(v["den"].get<long long>()));
    }
    throw spec_error("field '" + field + "': expected a number");
}

LevyFamily<Rational> parse_family(const json& fam) {
    if (!fam.contains("kind")) throw spec_error("family needs a 'kind' discriminator");
    const std::string kind = fam["kind"].get<std::string>();
    if (kind == "discrete") {
        DiscreteMeasure<Rational> m;
        if (fam.contains("drift")) m.drift = parse_rational(fam["drift"], "drift");
        if (fam.contains("atoms"))
            for (const auto& a : fam["atoms"])
                m.atoms.emplace_back(parse_rational(a.at(0), "atom location"),
                                     parse_rational(a.at(1), "atom weight"));
        return m;
    }
    if (kind == "beta") {
        BetaDensity<Rational> m;
        if (fam.contains("drift")) m.drift = parse_rational(fam["drift"], "drift");
        if (fam.contains("scale")) m.scale = parse_rational(fam["scale"], "scale");
        m.a = parse_rational(fam.at("a"), "a");
        m.b = parse_rational(fam.at("b"), "b");
        return m;
    }
    if (kind == "two_param") {
        TwoParam<Rational> m;
        m.alpha = parse_rational(fam.at("alpha"), "alpha");
        m.theta = parse_rational(fam.at("theta"), "theta");
        return m;
    }
    if (kind == "degenerate") {
        const std::string which = fam.at("which").get<std::string>();
        if (which == "singletons") return Degenerate{DegenerateKind::singletons};
        if (which == "one_part") return Degenerate{DegenerateKind::one_part};
        throw spec_error("degenerate 'which' must be singletons or one_part");
    }
    throw spec_error("unknown family kind '" + kind + "'");
}

}  // namespace

SpecFile parse_spec_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("spec parse error: ") + e.what());
    }
    SpecFile spec;
    if (doc.contains("raw_matrix")) {
        spec.has_raw_matrix = true;
        int n = 0;
        for (const auto& row : doc["raw_matrix"]) {
            ++n;
            std::vector<Rational> r;
            for (const auto& v : row) r.push_back(parse_rational(v, "raw_matrix"));
            if (static_cast<int>(r.size()) != n)
                throw std::runtime_error("raw_matrix row " + std::to_string(n) + " must have " +
                                         std::to_string(n) + " entries");
            spec.raw_q.push_back(std::move(r));
        }
        if (n == 0) throw std::runtime_error("raw_matrix is empty");
        spec.n_max = n;
    } else if (doc.contains("family")) {
        spec.family = parse_family(doc["family"]);
    } else {
        throw std::runtime_error("spec needs 'family' or 'raw_matrix'");
    }
    if (doc.contains("n_max")) spec.n_max = doc["n_max"].get<int>();
    if (spec.n_max < 1) throw std::runtime_error("n_max must be >= 1");
    if (doc.contains("backend")) {
        spec.backend = doc["backend"].get<std::string>();
        if (spec.backend != "exact" && spec.backend != "float")
            throw std::runtime_error("backend must be 'exact' or 'float'");
    }
    if (doc.contains("normalization")) {
        const std::string s = doc["normalization"].get<std::string>();
        if (s == "raw") spec.norm = Normalization::raw;
        else if (s == "unit") spec.norm = Normalization::unit;
        else throw std::runtime_error("normalization must be 'raw' or 'unit'");
    }
    return spec;
}

SpecFile parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec_json(ss.str());
}

LevyFamily<double> lower_family(const LevyFamily<Rational>& fam) {
    auto lower = [](const Rational& r) { return scalar_traits<Rational>::to_double(r); };
    struct V {
        decltype(lower)& f;
        LevyFamily<double> operator()(const DiscreteMeasure<Rational>& m) const {
            DiscreteMeasure<double> out;
            out.drift = f(m.drift);
            for (const auto& [x, w] : m.atoms) out.atoms.emplace_back(f(x), f(w));
            return out;
        }
        LevyFamily<double> operator()(const BetaDensity<Rational>& m) const {
            return BetaDensity<double>{f(m.drift), f(m.scale), f(m.a), f(m.b)};
        }
        LevyFamily<double> operator()(const TwoParam<Rational>& m) const {
            return TwoParam<double>{f(m.alpha), f(m.theta)};
        }
        LevyFamily<double> operator()(const Degenerate& d) const { return d; }
    };
    return std::visit(V{lower}, fam);
}

}  // namespace regcomp
