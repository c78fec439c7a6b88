#include "toca/rational.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace toca {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
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
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash));
    BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  }

  std::string_view s = text;
  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto dot = s.find('.');
  if (dot == std::string_view::npos) {
    if (!all_digits(s)) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    BigInt v{std::string(s)};
    return Rational(negative ? BigInt(-v) : v);
  }
  std::string_view int_part = s.substr(0, dot);
  std::string_view frac_part = s.substr(dot + 1);
  if ((int_part.empty() && frac_part.empty()) ||
      (!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  BigInt num = int_part.empty() ? BigInt(0) : BigInt(std::string(int_part));
  BigInt den = 1;
  for (char c : frac_part) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

BigInt floor(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  BigInt q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

BigInt ceil(const Rational& r) {
  BigInt f = floor(r);
  return Rational(f) == r ? f : BigInt(f + 1);
}

Rational recover_rational(double value, std::int64_t max_den) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value");
  bool negative = value < 0;
  double x = std::fabs(value);
  // Convergents h/k of the continued fraction of x.
  BigInt h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
  BigInt k_prev = 0, k = 1;
  double rem = x - std::floor(x);
  for (int iter = 0; iter < 64 && rem > 1e-15; ++iter) {
    double inv = 1.0 / rem;
    double a_d = std::floor(inv);
    if (a_d > 1e15) break;
    BigInt a = static_cast<std::int64_t>(a_d);
    BigInt k_next = a * k + k_prev;
    if (k_next > max_den) break;
    BigInt h_next = a * h + h_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    rem = inv - a_d;
    Rational approx(h, k);
    if (std::fabs(to_double(approx) - x) <= 1e-15 * std::max(1.0, x)) break;
  }
  Rational r(h, k);
  return negative ? Rational(-r) : r;
}

Rational exact_rational(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value");
  int exp = 0;
  double mant = std::frexp(value, &exp);
  // mant in [0.5,1): scale to a 53-bit integer.
  auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r = Rational(BigInt(m));
  if (exp > 0) {
    r *= Rational(BigInt(1) << exp);
  } else if (exp < 0) {
    r /= Rational(BigInt(1) << (-exp));
  }
  return r;
}

std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("integer out of int64 range");
  }
  return v.convert_to<std::int64_t>();
}

}  // namespace toca
