#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace loopfree {

// Exact rational arithmetic for capacities, flows, overload rates and
// topological states. Expression templates are off so `auto` is safe.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

BigInt numerator(const Rational& r);
BigInt denominator(const Rational& r);

bool is_integer(const Rational& r);
BigInt floor(const Rational& r);
BigInt ceil(const Rational& r);

// Accepts "7", "-3", "1/2" and finite decimals such as "2.5".
Rational parse_rational(std::string_view text);

// Integers print bare ("7"), everything else as "p/q".
std::string to_string(const Rational& r);

double to_double(const Rational& r);

BigInt lcm(const BigInt& a, const BigInt& b);

}  // namespace loopfree
