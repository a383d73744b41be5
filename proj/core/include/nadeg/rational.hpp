#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace nadeg {

using Rational = boost::multiprecision::mpq_rational;
using RVector = std::vector<Rational>;
// Row-major; each inner vector is one row.
using RMatrix = std::vector<RVector>;

/// Parses "p/q", "-3", "1.25", "2.5e-3". Throws Error(ParseError) otherwise.
Rational parse_rational(std::string_view text);

/// Exact value of a finite double (every double is a dyadic rational).
Rational exact_rational(double x);

/// The rational with the shortest decimal expansion that round-trips to x,
/// so 0.1 becomes 1/10 rather than its binary expansion.
Rational decimal_rational(double x);

double to_double(const Rational& q);
long double to_long_double(const Rational& q);
std::string to_string(const Rational& q);

Rational dot(const RVector& a, const RVector& b);
RVector operator+(const RVector& a, const RVector& b);
RVector operator-(const RVector& a, const RVector& b);
RVector operator*(const Rational& s, const RVector& a);

/// Lexicographic comparison of equal-length vectors.
bool lex_less(const RVector& a, const RVector& b);

std::vector<double> to_doubles(const RVector& v);

}  // namespace nadeg
