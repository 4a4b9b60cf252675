#include "mctree/rational.hpp"

#include "mctree/error.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace mctree {

namespace {

bool is_integer_literal(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+'))
        s.remove_prefix(1);
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

Integer to_integer(std::string_view s) {
    std::string digits(s);
    if (!digits.empty() && digits.front() == '+')
        digits.erase(0, 1);
    return Integer(digits, 10);
}

} // namespace

Rational make_rational(long num, long den) {
    if (den == 0)
        throw std::domain_error("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational parse_rational(std::string_view text) {
    const std::string_view s = trim(text);
    const auto slash = s.find('/');
    std::string_view num = s.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' || den.front() == '+')
        throw ParseError("malformed rational literal '" + std::string(text) + "'");
    Integer d = to_integer(den);
    if (d == 0)
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational r(to_integer(num), d);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& value) {
    if (value.get_den() == 1)
        return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double to_double(const Rational& value) { return value.get_d(); }

double rounded_12(const Rational& value) {
    // mpq_get_d truncates; go through mpf for a correctly rounded decimal.
    mpf_class f(value, 256);
    mp_exp_t exp = 0;
    std::string digits = f.get_str(exp, 10, 12);
    if (digits.empty())
        return 0.0;
    bool negative = digits.front() == '-';
    if (negative)
        digits.erase(0, 1);
    std::string lit = (negative ? "-0." : "0.") + digits + "e" + std::to_string(exp);
    return std::strtod(lit.c_str(), nullptr);
}

} // namespace mctree
