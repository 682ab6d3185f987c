#include "rcv/rational.hpp"

namespace rcv {

namespace {

mpz_class pow10(int digits) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  return p;
}

}  // namespace

std::string to_decimal(const Rational& value, int digits) {
  const mpz_class scale = pow10(digits);
  const Rational scaled = abs(value) * scale + Rational(1, 2);
  mpz_class units = scaled.get_num() / scaled.get_den();  // floor, both positive

  const bool negative = value < 0 && units != 0;
  std::string s = units.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits)) {
      s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    }
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  return negative ? "-" + s : s;
}

Rational truncate_decimal(const Rational& value, int digits) {
  const mpz_class scale = pow10(digits);
  const Rational scaled = value * scale;
  mpz_class units;
  mpz_tdiv_q(units.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
  Rational out(units, scale);
  out.canonicalize();
  return out;
}

}  // namespace rcv
