#include "gpikit/rational.hpp"

#include <cctype>

#include "gpikit/errors.hpp"

namespace gpikit {

mpz_class double_factorial(long n) {
    mpz_class r = 1;
    for (long m = n; m > 1; m -= 2) r *= m;
    return r;
}

mpz_class gaussian_moment_product(const std::vector<int>& p) {
    mpz_class r = 1;
    for (int pi : p) r *= double_factorial(pi - 1);
    return r;
}

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        s.erase(0, 1);
    }
    if (s.empty()) throw InvalidArgument("empty rational literal: '" + text + "'");

    Rational value;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw InvalidArgument("bad rational literal: '" + text + "'");
        mpz_class d(den);
        if (d == 0) throw InvalidArgument("zero denominator: '" + text + "'");
        value = Rational(mpz_class(num), d);
    } else if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string whole = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        if (whole.empty()) whole = "0";
        if (!all_digits(whole) || (!frac.empty() && !all_digits(frac)))
            throw InvalidArgument("bad decimal literal: '" + text + "'");
        mpz_class den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        value = Rational(mpz_class(whole) * den + mpz_class(frac.empty() ? "0" : frac), den);
    } else {
        if (!all_digits(s)) throw InvalidArgument("bad integer literal: '" + text + "'");
        value = Rational(mpz_class(s));
    }
    value.canonicalize();
    if (negative) value = -value;
    return value;
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace gpikit
