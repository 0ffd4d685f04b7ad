#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmt {

/// Exact rational scalar. GMP keeps every value in lowest terms with a
/// positive denominator, so equality is structural.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline BigInt factorial(unsigned long n) {
  BigInt f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

/// (2s-1)!! with the convention (-1)!! = 1.
inline BigInt double_factorial_odd(unsigned long s) {
  BigInt f = 1;
  for (unsigned long j = 1; j <= s; ++j) f *= 2 * j - 1;
  return f;
}

inline Rational pow(const Rational& base, unsigned long e) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  return Rational(num, den);  // already canonical
}

inline Rational inverse_square(long n) { return make_rational(1, n * n); }

/// Lossless "p/q" form; integers keep the "/1" suffix so every value parses
/// the same way.
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Accepts "p/q", "p", or a plain decimal such as "0.125" / "1e-3".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto bad = [&] { return std::invalid_argument("malformed rational literal '" + s + "'"); };
  if (s.find_first_of(".eE") != std::string::npos) {
    std::string mantissa = s;
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
      mantissa = s.substr(0, e);
      try {
        std::size_t used = 0;
        exponent = std::stol(s.substr(e + 1), &used);
        if (used != s.size() - e - 1) throw bad();
      } catch (const std::logic_error&) {
        throw bad();
      }
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_point = false;
    for (std::size_t i = 0; i < mantissa.size(); ++i) {
      char c = mantissa[i];
      if (c == '.') {
        if (seen_point) throw bad();
        seen_point = true;
      } else if ((c == '-' || c == '+') && i == 0) {
        if (c == '-') digits.push_back('-');
      } else if (c >= '0' && c <= '9') {
        digits.push_back(c);
        if (seen_point) ++frac_digits;
      } else {
        throw bad();
      }
    }
    if (digits.empty() || digits == "-") throw bad();
    BigInt num(digits, 10);
    BigInt ten_pow;
    long shift = exponent - frac_digits;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    return shift >= 0 ? Rational(num * ten_pow) : make_rational(num, ten_pow);
  }
  Rational r;
  if (r.set_str(s, 10) != 0) throw bad();
  if (r.get_den() == 0) throw bad();
  r.canonicalize();
  return r;
}

}  // namespace rmt
