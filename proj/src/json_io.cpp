#include "keller/json_io.hpp"

#include "keller/errors.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace keller {

namespace {

class PolyParser {
public:
    explicit PolyParser(std::string_view text) : s_(text) {}

    BiPoly parse() {
        BiPoly p = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("polynomial: " + what + " at offset " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool starts_factor() {
        char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'x' || c == 'y' || c == 'i' ||
               c == '(';
    }

    BiPoly expr() {
        BiPoly acc = term();
        for (char c = peek(); c == '+' || c == '-'; c = peek()) {
            ++pos_;
            BiPoly t = term();
            acc = c == '+' ? acc + t : acc - t;
        }
        return acc;
    }

    BiPoly term() {
        BiPoly acc = unary();
        for (;;) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                acc *= unary();
            } else if (c == '/') {
                ++pos_;
                BiPoly d = unary();
                if (!d.is_constant() || d.is_zero()) fail("division by a non-constant");
                acc *= d.constant_term().inverse();
            } else if (starts_factor()) {
                acc *= power();
            } else {
                return acc;
            }
        }
    }

    BiPoly unary() {
        char c = peek();
        if (c == '-') {
            ++pos_;
            return -unary();
        }
        if (c == '+') {
            ++pos_;
            return unary();
        }
        return power();
    }

    BiPoly power() {
        BiPoly base = atom();
        if (peek() != '^') return base;
        ++pos_;
        skip();
        unsigned n = 0;
        auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), n);
        if (ec != std::errc()) fail("expected a nonnegative integer exponent");
        pos_ = static_cast<std::size_t>(ptr - s_.data());
        return base.pow(n);
    }

    BiPoly atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            BiPoly inner = expr();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return inner;
        }
        if (c == 'x' || c == 'y' || c == 'i') {
            ++pos_;
            return c == 'x' ? BiPoly::x() : c == 'y' ? BiPoly::y() : BiPoly(Scalar::i());
        }
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (start == pos_) fail("expected a term");
        return BiPoly(Scalar(parse_rational(s_.substr(start, pos_ - start))));
    }
};

UPoly upoly_from_json(const Json& j) {
    BiPoly P = poly_from_json(j);
    if (P.degree_y() > 0) throw ParseError("series coefficient must not depend on y");
    std::vector<Scalar> c(static_cast<std::size_t>(std::max(P.degree_x(), 0)) + 1);
    for (const auto& [e, v] : P.terms()) c[static_cast<std::size_t>(e.i)] = v;
    return UPoly(std::move(c));
}

RatFunc ratfunc_from_json(const Json& j) {
    if (!j.is_object() || j.contains("terms")) return RatFunc(upoly_from_json(j));
    UPoly num = upoly_from_json(j.at("num"));
    UPoly den = j.contains("den") ? upoly_from_json(j.at("den")) : UPoly(1);
    return RatFunc(num, den);
}

Json upoly_to_json(const UPoly& p) {
    BiPoly b;
    const auto& c = p.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) b.add_term(c[k], static_cast<int>(k), 0);
    return to_json(b);
}

} // namespace

BiPoly parse_poly(std::string_view text) { return PolyParser(text).parse(); }

Json to_json(const Scalar& s) { return s.str(); }

Json to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json to_json(const BiPoly& P) {
    Json terms = Json::array();
    for (const auto& [e, c] : P.terms()) terms.push_back({{"c", c.str()}, {"i", e.i}, {"j", e.j}});
    return Json{{"terms", terms}, {"text", P.str()}};
}

Json to_json(const PolyMap& M) {
    return Json{{"F", to_json(M.F())}, {"G", to_json(M.G())}, {"J", to_json(M.jac())}};
}

Json to_json(const CPoint& p) { return Json{{"x", to_json(p.x)}, {"y", to_json(p.y)}}; }

Json to_json(const WitnessPair& w) {
    return Json{{"p0", to_json(w.p0)}, {"p1", to_json(w.p1)}, {"residual", w.residual}, {"separation", w.separation}};
}

Json to_json(const YSeries& P) {
    Json coeffs = Json::array();
    for (const auto& c : P.coeffs()) coeffs.push_back({{"num", upoly_to_json(c.num())}, {"den", upoly_to_json(c.den())}});
    Json j{{"alpha", P.alpha()}, {"trunc", nullptr}, {"coeffs", coeffs}};
    if (!P.is_exact()) j["trunc"] = P.precision();
    return j;
}

Json to_json(const StepResult& r) {
    Json margins = Json::object();
    for (const auto& [name, value] : r.margins) margins[name] = value;
    return Json{{"q0", to_json(r.pair.p0)},
                {"q1", to_json(r.pair.p1)},
                {"s", to_json(r.s)},
                {"t", to_json(r.t)},
                {"u", to_json(r.u)},
                {"v", to_json(r.v)},
                {"w", to_json(r.w)},
                {"ansatz", r.ansatz.str()},
                {"eps", r.eps},
                {"residual", r.pair.residual},
                {"objective_before", r.objective_before},
                {"objective_after", r.objective_after},
                {"constraints_report", margins}};
}

Json to_json(const Trajectory& T) {
    Json pairs = Json::array();
    for (const auto& w : T.pairs) pairs.push_back(to_json(w));
    Json j{{"pairs", pairs}, {"values", T.values}, {"ansatz", T.ansatz}, {"monotone", T.monotone}, {"stall", nullptr}};
    if (T.stall) j["stall"] = *T.stall;
    return j;
}

Json to_json(const WitnessAtlas& A) {
    Json cells = Json::array();
    for (const auto& c : A.cells) {
        Json samples = Json::array();
        for (const auto& w : c.samples) samples.push_back(to_json(w));
        Json cell{{"k0", c.k0}, {"k1", c.k1}, {"count", c.samples.size()}, {"gamma_est", nullptr}, {"samples", samples}};
        if (c.gamma_est) cell["gamma_est"] = *c.gamma_est;
        cells.push_back(std::move(cell));
    }
    Json cmp = Json::array();
    for (const auto& c : A.comparisons)
        cmp.push_back({{"k0", c.k0},
                       {"k1_lo", c.k1_lo},
                       {"k1_hi", c.k1_hi},
                       {"gamma_lo", c.gamma_lo},
                       {"gamma_hi", c.gamma_hi},
                       {"increasing", c.increasing}});
    return Json{{"cells", cells}, {"comparisons", cmp}};
}

Scalar scalar_from_json(const Json& j) {
    if (j.is_string()) return Scalar::parse(j.get<std::string>());
    if (j.is_number_integer()) return Scalar(j.get<long>());
    if (j.is_number()) return Scalar::from_complex(j.get<double>());
    if (j.is_object() && j.contains("re")) return Scalar::from_complex(complex_from_json(j));
    throw ParseError("expected an exact scalar, got " + j.dump());
}

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0};
    if (j.is_string()) return Scalar::parse(j.get<std::string>()).to_complex();
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_object()) return {j.value("re", 0.0), j.value("im", 0.0)};
    throw ParseError("expected a complex number, got " + j.dump());
}

BiPoly poly_from_json(const Json& j) {
    if (j.is_string()) return parse_poly(j.get<std::string>());
    if (j.is_number_integer()) return BiPoly(Scalar(j.get<long>()));
    if (!j.is_object() || !j.contains("terms")) throw ParseError("expected a polynomial, got " + j.dump());
    BiPoly P;
    for (const auto& t : j.at("terms")) {
        int i = t.at("i").get<int>(), k = t.at("j").get<int>();
        if (i < 0 || k < 0) throw ParseError("negative exponent in polynomial");
        P.add_term(scalar_from_json(t.at("c")), i, k);
    }
    return P;
}

PolyMap map_from_json(const Json& j) { return PolyMap(poly_from_json(j.at("F")), poly_from_json(j.at("G"))); }

Point point_from_json(const Json& j) {
    if (j.is_array() && j.size() == 2) return {scalar_from_json(j[0]), scalar_from_json(j[1])};
    return {scalar_from_json(j.at("x")), scalar_from_json(j.at("y"))};
}

CPoint cpoint_from_json(const Json& j) {
    if (j.is_array() && j.size() == 2) return {complex_from_json(j[0]), complex_from_json(j[1])};
    return {complex_from_json(j.at("x")), complex_from_json(j.at("y"))};
}

WitnessPair pair_from_json(const PolyMap& M, const Json& j) {
    return make_pair(M, cpoint_from_json(j.at("p0")), cpoint_from_json(j.at("p1")));
}

YSeries series_from_json(const Json& j) {
    std::vector<RatFunc> c;
    for (const auto& item : j.at("coeffs")) c.push_back(ratfunc_from_json(item));
    int alpha = j.value("alpha", 0);
    if (!j.contains("trunc") || j.at("trunc").is_null()) return YSeries::exact(alpha, std::move(c));
    return YSeries::truncated(alpha, std::move(c), j.at("trunc").get<long>());
}

Majorant majorant_from_json(const Json& j) {
    YSeries s = series_from_json(j);
    std::vector<Rational> c;
    for (const auto& f : s.coeffs()) {
        if (!f.is_constant() || !f.constant().is_real()) throw ParseError("majorant coefficients must be rational");
        c.push_back(f.constant().re());
    }
    if (s.is_exact()) return Majorant::exact(s.alpha(), std::move(c));
    return Majorant(QSeries::truncated(s.alpha(), std::move(c), s.precision()));
}

Kappas kappas_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 6) throw ParseError("kappas must be an array of six numbers");
    Kappas K;
    for (std::size_t i = 0; i < 6; ++i) K.k[i] = j[i].get<double>();
    K.validate();
    return K;
}

StepConstraint constraint_from_json(const Json& j) {
    StepConstraint c;
    if (j.contains("keep_abs"))
        for (const auto& k : j.at("keep_abs"))
            c.keep_abs.emplace_back(parse_coord(k.at("coord").get<std::string>()), k.at("value").get<double>());
    if (j.contains("increase_abs")) c.increase_abs = parse_coord(j.at("increase_abs").get<std::string>());
    if (j.contains("decrease_metric")) {
        const auto& d = j.at("decrease_metric");
        c.decrease_metric = std::make_pair(complex_from_json(d.at("xi0")), complex_from_json(d.at("xi1")));
    }
    if (j.contains("kappa_band")) c.kappa_band = kappas_from_json(j.at("kappa_band"));
    return c;
}

MetricSpec metric_from_json(const Json& j) {
    MetricSpec m;
    m.kind = parse_metric(j.value("kind", std::string("h")));
    if (j.contains("kappas")) m.kappas = kappas_from_json(j.at("kappas"));
    if (j.contains("xi")) m.xi = {complex_from_json(j.at("xi")[0]), complex_from_json(j.at("xi")[1])};
    m.tau = j.value("tau", m.tau);
    m.S0 = j.value("S0", m.S0);
    m.validate();
    return m;
}

namespace {

std::string num(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

std::string trajectory_csv(const Trajectory& T) {
    std::ostringstream os;
    os << "step,value,ansatz,x0_re,x0_im,y0_re,y0_im,x1_re,x1_im,y1_re,y1_im,residual\n";
    for (std::size_t i = 0; i < T.pairs.size(); ++i) {
        const auto& w = T.pairs[i];
        os << i << ',' << num(T.values[i]) << ',' << (i == 0 ? "start" : T.ansatz[i - 1]);
        for (Complex z : {w.p0.x, w.p0.y, w.p1.x, w.p1.y}) os << ',' << num(z.real()) << ',' << num(z.imag());
        os << ',' << num(w.residual) << '\n';
    }
    return os.str();
}

std::string atlas_csv(const WitnessAtlas& A) {
    std::ostringstream os;
    os << "k0,k1,count,gamma_est\n";
    for (const auto& c : A.cells)
        os << num(c.k0) << ',' << num(c.k1) << ',' << c.samples.size() << ','
           << (c.gamma_est ? num(*c.gamma_est) : std::string()) << '\n';
    return os.str();
}

} // namespace keller
