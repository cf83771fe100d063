#include "boxlab/rational.hpp"

#include <cmath>
#include <cstdio>

#include "boxlab/errors.hpp"

namespace boxlab {

namespace {

bool valid_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den) || den[0] == '-' || den[0] == '+') {
    throw StructuralError("not a rational: \"" + std::string(text) + "\"");
  }
  std::string n(num);
  if (n[0] == '+') n.erase(0, 1);
  mpz_class p(n, 10);
  mpz_class q(std::string(den), 10);
  if (q == 0) throw StructuralError("zero denominator: \"" + std::string(text) + "\"");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational ipow(const Rational& base, unsigned long exponent) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  // Powers of a canonical fraction stay canonical.
  Rational out;
  mpq_set_num(out.get_mpq_t(), num.get_mpz_t());
  mpq_set_den(out.get_mpq_t(), den.get_mpz_t());
  return out;
}

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

std::string to_decimal(double value, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
  return buf;
}

double root_of_power(const Rational& pow, unsigned d) {
  double v = pow.get_d();
  if (v <= 0.0) return 0.0;
  return std::pow(v, 1.0 / static_cast<double>(1ull << d));
}

}  // namespace boxlab
