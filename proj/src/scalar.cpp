#include "keller/scalar.hpp"

#include "keller/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>

namespace keller {

namespace {

std::string strip(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        if (c != ' ' && c != '\t' && c != '\n') out.push_back(c);
    return out;
}

Rational pow10(long e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

Rational parse_decimal(const std::string& s) {
    // [sign] digits [. digits] [e [sign] digits]
    std::size_t pos = 0;
    bool neg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) neg = s[pos++] == '-';
    std::string digits;
    long shift = 0;
    bool seen_digit = false;
    bool seen_dot = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) --shift;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw ParseError("bad number '" + s + "'");
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
        ++pos;
        long e = 0;
        auto [ptr, ec] = std::from_chars(s.data() + pos + (s[pos] == '+' ? 1 : 0),
                                         s.data() + s.size(), e);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw ParseError("bad exponent in '" + s + "'");
        shift += e;
        pos = s.size();
    }
    if (pos != s.size()) throw ParseError("trailing characters in '" + s + "'");
    Rational q(mpz_class(digits, 10));
    q *= pow10(shift);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

} // namespace

Rational parse_rational(std::string_view text) {
    std::string s = strip(text);
    if (s.empty()) throw ParseError("empty rational");
    auto slash = s.find('/');
    if (slash == std::string::npos) return parse_decimal(s);
    Rational num = parse_decimal(s.substr(0, slash));
    Rational den = parse_decimal(s.substr(slash + 1));
    if (sgn(den) == 0) throw ParseError("zero denominator in '" + s + "'");
    Rational q = num / den;
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational rational_from_double(double v) {
    if (!std::isfinite(v)) throw DomainError("non-finite double");
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw DomainError("to_chars failed");
    return parse_decimal(std::string(buf.data(), ptr));
}

Rational binomial(const Rational& a, long i) {
    if (i < 0) return 0;
    Rational r = 1;
    for (long k = 0; k < i; ++k) {
        r *= a - k;
        r /= k + 1;
    }
    return r;
}

Rational rational_upper(double v) {
    if (!std::isfinite(v)) throw DomainError("non-finite bound");
    double w = v;
    for (int k = 0; k < 4; ++k) w = std::nextafter(w, INFINITY);
    return Rational(w);
}

Rational rational_lower(double v) {
    if (!std::isfinite(v)) throw DomainError("non-finite bound");
    double w = v;
    for (int k = 0; k < 4; ++k) w = std::nextafter(w, -INFINITY);
    return Rational(w);
}

Scalar Scalar::parse(std::string_view text) {
    std::string s = strip(text);
    if (s.empty()) throw ParseError("empty scalar");
    if (s.back() != 'i') return Scalar(parse_rational(s));

    // split at the last sign that is not part of an exponent
    std::size_t split = 0;
    for (std::size_t k = s.size() - 1; k > 0; --k) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    std::string re_part = s.substr(0, split);
    std::string im_part = s.substr(split, s.size() - split - 1);
    if (!im_part.empty() && im_part.back() == '*') im_part.pop_back();

    Rational im;
    if (im_part.empty() || im_part == "+")
        im = 1;
    else if (im_part == "-")
        im = -1;
    else
        im = parse_rational(im_part);
    Rational re = re_part.empty() ? Rational(0) : parse_rational(re_part);
    return Scalar(re, im);
}

Scalar Scalar::from_complex(Complex z) {
    return Scalar(rational_from_double(z.real()), rational_from_double(z.imag()));
}

Scalar Scalar::inverse() const {
    Rational n = norm();
    if (sgn(n) == 0) throw DomainError("division by zero scalar");
    return Scalar(re_ / n, -im_ / n);
}

Scalar Scalar::pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    Scalar result(1);
    Scalar base = *this;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n) base *= base;
    }
    return result;
}

Complex Scalar::principal_pow(double b) const { return keller::principal_pow(to_complex(), b); }

Scalar& Scalar::operator+=(const Scalar& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    if (o.is_zero()) throw DomainError("division by zero scalar");
    if (sgn(o.im_) == 0) {
        re_ /= o.re_;
        im_ /= o.re_;
        return *this;
    }
    return *this *= o.inverse();
}

std::string Scalar::str() const {
    if (sgn(im_) == 0) return to_string(re_);
    std::string imag;
    Rational a = ::abs(im_);
    imag = (a == 1) ? "i" : to_string(a) + "*i";
    if (sgn(re_) == 0) return (sgn(im_) < 0 ? "-" : "") + imag;
    return to_string(re_) + (sgn(im_) < 0 ? "-" : "+") + imag;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

Complex principal_pow(Complex a, double b) {
    if (a == Complex(0.0, 0.0)) {
        if (b > 0) return {0.0, 0.0};
        if (b == 0) return {1.0, 0.0};
        throw DomainError("non-positive power of zero");
    }
    double r = std::abs(a);
    double theta = std::atan2(a.imag(), a.real());
    if (theta <= -std::numbers::pi) theta += 2 * std::numbers::pi;
    double mod = std::pow(r, b);
    return std::polar(mod, b * theta);
}

Rational abs_upper(const Scalar& z) {
    Rational n = z.norm();
    if (sgn(n) == 0) return 0;
    Rational u = rational_upper(std::sqrt(n.get_d()));
    while (u * u < n) u *= Rational(1000001, 1000000);
    return u;
}

Rational abs_lower(const Scalar& z) {
    Rational n = z.norm();
    if (sgn(n) == 0) return 0;
    double d = std::sqrt(n.get_d());
    Rational l = d > 0 ? rational_lower(d) : Rational(0);
    if (sgn(l) < 0) l = 0;
    while (l * l > n) l *= Rational(999999, 1000000);
    return l;
}

} // namespace keller
