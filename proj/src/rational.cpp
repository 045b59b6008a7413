#include "loopfree/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace loopfree {

BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }

BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

bool is_integer(const Rational& r) { return denominator(r) == 1; }

BigInt floor(const Rational& r) {
    BigInt num = numerator(r);
    BigInt den = denominator(r);
    BigInt q = num / den;  // truncates toward zero
    if (num < 0 && q * den != num) {
        q -= 1;
    }
    return q;
}

BigInt ceil(const Rational& r) { return -floor(-r); }

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

BigInt parse_integer(std::string_view s) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) {
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    }
    BigInt v{std::string(s)};
    return negative ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) {
        throw std::invalid_argument("empty rational literal");
    }
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        BigInt num = parse_integer(text.substr(0, slash));
        BigInt den = parse_integer(text.substr(slash + 1));
        if (den == 0) {
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        }
        return Rational(num, den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        bool negative = !whole.empty() && whole.front() == '-';
        if (!frac.empty() && !all_digits(frac)) {
            throw std::invalid_argument("bad decimal literal '" + std::string(text) + "'");
        }
        BigInt w = (whole.empty() || whole == "-" || whole == "+") ? BigInt(0) : parse_integer(whole);
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        BigInt f = frac.empty() ? BigInt(0) : BigInt(std::string(frac));
        Rational magnitude = Rational(boost::multiprecision::abs(w)) + Rational(f, scale);
        return negative ? Rational(-magnitude) : magnitude;
    }
    return Rational(parse_integer(text));
}

std::string to_string(const Rational& r) {
    if (is_integer(r)) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

BigInt lcm(const BigInt& a, const BigInt& b) {
    if (a == 0 || b == 0) return 0;
    return boost::multiprecision::abs(a / boost::multiprecision::gcd(a, b) * b);
}

}  // namespace loopfree
