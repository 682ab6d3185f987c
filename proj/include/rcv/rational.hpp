#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace rcv {

/// Exact vote weight. Every tabulation total is a Rational so results are
/// identical on every platform.
using Rational = mpq_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  static_assert(sizeof(long) == sizeof(std::int64_t));
  Rational q(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  q.canonicalize();
  return q;
}

/// Round half away from zero to `digits` fractional digits, rendered in
/// plain decimal notation ("356.11", "-0.50000").
std::string to_decimal(const Rational& value, int digits);

/// Truncate toward zero to `digits` fractional digits.
Rational truncate_decimal(const Rational& value, int digits);

inline double to_double(const Rational& value) { return value.get_d(); }

}  // namespace rcv
