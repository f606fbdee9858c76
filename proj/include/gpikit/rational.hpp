#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace gpikit {

/// Exact arbitrary-precision rational scalar.
using Rational = mpq_class;

/// n!! for n >= -1, with (-1)!! = 0!! = 1.
mpz_class double_factorial(long n);

/// prod (p_i - 1)!! over an even exponent triple; the value of Phi at I_3.
mpz_class gaussian_moment_product(const std::vector<int>& p);

/// Parses "3", "-7/2" or a plain decimal such as "0.25" (expanded literally
/// to 25/100 and canonicalized). Throws InvalidArgument on anything else.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace gpikit
