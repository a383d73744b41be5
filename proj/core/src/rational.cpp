#include "nadeg/rational.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "nadeg/error.hpp"

namespace nadeg {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

// Decimal digits only; a leading zero would otherwise select octal.
boost::multiprecision::mpz_int decimal_int(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return boost::multiprecision::mpz_int{std::string(digits)};
}

Rational pow10(long e) {
  boost::multiprecision::mpz_int p = 1;
  for (long i = 0; i < std::labs(e); ++i) p *= 10;
  return e >= 0 ? Rational(p) : Rational(1) / Rational(p);
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegeneratePolytope: return "DegeneratePolytope";
    case ErrorKind::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorKind::UnboundedPolytope: return "UnboundedPolytope";
    case ErrorKind::InconsistentRepresentation: return "InconsistentRepresentation";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::NonpositiveScale: return "NonpositiveScale";
    case ErrorKind::MissingTorusWeights: return "MissingTorusWeights";
    case ErrorKind::MissingLevel: return "MissingLevel";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotABasis: return "NotABasis";
    case ErrorKind::InvalidFlag: return "InvalidFlag";
    case ErrorKind::InvalidWeightFiltration: return "InvalidWeightFiltration";
    case ErrorKind::NegativeSupport: return "NegativeSupport";
    case ErrorKind::InconsistentDecomposition: return "InconsistentDecomposition";
    case ErrorKind::InsufficientDegrees: return "InsufficientDegrees";
    case ErrorKind::OriginNotInterior: return "OriginNotInterior";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::DenominatorVanishes: return "DenominatorVanishes";
    case ErrorKind::InvalidVolumeFunction: return "InvalidVolumeFunction";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

bool is_input_error(ErrorKind kind) {
  return kind == ErrorKind::ParseError || kind == ErrorKind::InvalidInput;
}

Rational parse_rational(std::string_view text) {
  auto fail = [&] {
    return Error(ErrorKind::ParseError, "not a rational number: '" + std::string(text) + "'");
  };
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    std::string_view num_digits = num;
    if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+')) {
      num_digits.remove_prefix(1);
    }
    if (!all_digits(num_digits) || !all_digits(den)) throw fail();
    const auto d = decimal_int(den);
    if (d == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
    const Rational n(decimal_int(num_digits));
    return (num.front() == '-' ? Rational(-n) : n) / Rational(d);
  }

  // Decimal with optional exponent.
  bool negative = false;
  std::string_view s = text;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    long value = 0;
    const char* first = exp_part.data();
    if (!exp_part.empty() && exp_part.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, exp_part.data() + exp_part.size(), value);
    if (ec != std::errc() || ptr != exp_part.data() + exp_part.size()) throw fail();
    exponent = value;
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot_pos = s.find('.'); dot_pos != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot_pos);
    std::string_view frac = s.substr(dot_pos + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw fail();
    }
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) throw fail();
    digits = std::string(s);
  }
  if (std::labs(exponent) > 4000) throw fail();
  Rational q = Rational(decimal_int(digits)) * pow10(exponent);
  return negative ? Rational(-q) : q;
}

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidInput, "non-finite value has no rational form");
  return Rational(x);
}

Rational decimal_rational(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidInput, "non-finite value has no rational form");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) return exact_rational(x);
  return parse_rational(std::string_view(buf, static_cast<size_t>(ptr - buf)));
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

long double to_long_double(const Rational& q) {
  // Two-term expansion recovers roughly twice the precision of a single rounding.
  double hi = q.convert_to<double>();
  if (!std::isfinite(hi) || hi == 0.0) return hi;
  Rational rest = q - Rational(hi);
  return static_cast<long double>(hi) + static_cast<long double>(rest.convert_to<double>());
}

std::string to_string(const Rational& q) { return q.str(); }

Rational dot(const RVector& a, const RVector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "dot product of unequal lengths");
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RVector operator+(const RVector& a, const RVector& b) {
  RVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RVector operator-(const RVector& a, const RVector& b) {
  RVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RVector operator*(const Rational& s, const RVector& a) {
  RVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

bool lex_less(const RVector& a, const RVector& b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.size() < b.size();
}

std::vector<double> to_doubles(const RVector& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(to_double(q));
  return out;
}

}  // namespace nadeg
