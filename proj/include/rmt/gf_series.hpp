#pragma once

// Exact power-series coefficients for the Catalan / semicircle generating
// function f(t) = sum m_k t^k and the (1 - t)^(-s) families used to build the
// moment envelopes.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmt/rational.hpp"

namespace rmt {

/// Finite prefix g_0..g_kmax of a power series; index k holds [g(t)]_k.
class SeriesCoefficients {
 public:
  SeriesCoefficients() = default;
  explicit SeriesCoefficients(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {}

  static SeriesCoefficients constant(const Rational& value, int k_max) {
    return SeriesCoefficients(std::vector<Rational>(static_cast<std::size_t>(k_max) + 1, value));
  }

  std::size_t size() const { return coeffs_.size(); }
  int k_max() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Rational& operator[](std::size_t k) const { return coeffs_[k]; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

 private:
  std::vector<Rational> coeffs_;
};

enum class MomentRoute { closed_form, linear_recurrence, convolution };

namespace detail {
inline void require_non_negative(int value, const char* what) {
  if (value < 0) throw std::invalid_argument(std::string(what) + " must be non-negative");
}
}  // namespace detail

/// C_k = binom(2k, k) / (k + 1).
inline Rational catalan(int k) {
  detail::require_non_negative(k, "k");
  return make_rational(binomial(2UL * k, k), BigInt(k + 1));
}

/// m_0..m_kmax along one of three independent routes; all three agree exactly.
inline std::vector<Rational> wigner_moments(int k_max, MomentRoute route = MomentRoute::closed_form) {
  detail::require_non_negative(k_max, "k_max");
  std::vector<Rational> m(static_cast<std::size_t>(k_max) + 1);
  m[0] = 1;
  switch (route) {
    case MomentRoute::closed_form: {
      BigInt four_pow = 1;
      for (int k = 1; k <= k_max; ++k) {
        four_pow *= 4;
        m[k] = make_rational(binomial(2UL * k, k), four_pow * (k + 1));
      }
      break;
    }
    case MomentRoute::linear_recurrence:
      for (int k = 1; k <= k_max; ++k) m[k] = m[k - 1] * make_rational(2 * k - 1, 2 * k + 2);
      break;
    case MomentRoute::convolution:
      for (int k = 1; k <= k_max; ++k) {
        Rational acc = 0;
        for (int j = 0; j < k; ++j) acc += m[k - 1 - j] * m[j];
        m[k] = acc / 4;
      }
      break;
  }
  return m;
}

inline Rational wigner_moment(int k, MomentRoute route = MomentRoute::closed_form) {
  detail::require_non_negative(k, "k");
  if (route == MomentRoute::closed_form) return catalan(k) / pow(Rational(4), static_cast<unsigned long>(k));
  return wigner_moments(k, route)[static_cast<std::size_t>(k)];
}

/// [(1 - t)^(-r - 1/2)]_k = (2k+2r)! r! / (4^k k! (2r)! (k+r)!).
/// The factorial quotients are formed as partial products so no full
/// factorial is ever materialised.
inline Rational coeff_half_integer(int r, int k) {
  detail::require_non_negative(r, "r");
  detail::require_non_negative(k, "k");
  BigInt num = 1;  // (2k+2r)! / (2r)!
  for (long i = 2L * r + 1; i <= 2L * k + 2L * r; ++i) num *= i;
  BigInt den = 1;  // 4^k k! (k+r)! / r!
  for (long i = r + 1; i <= static_cast<long>(k) + r; ++i) den *= i;
  for (long i = 2; i <= k; ++i) den *= i;
  den <<= 2 * static_cast<mp_bitcnt_t>(k);
  return make_rational(num, den);
}

/// Same coefficient through the Catalan form r binom(2k+2r, 2k) / binom(k+r, k+1) m_k.
inline Rational coeff_half_integer_catalan_form(int r, int k) {
  if (r < 1) throw std::invalid_argument("r must be >= 1");
  detail::require_non_negative(k, "k");
  return make_rational(BigInt(r) * binomial(2UL * k + 2UL * r, 2UL * k), binomial(k + r, k + 1)) * wigner_moment(k);
}

/// [(1 - t)^(-l - 1)]_k = binom(k + l, l).
inline Rational coeff_integer(int l, int k) {
  detail::require_non_negative(l, "l");
  detail::require_non_negative(k, "k");
  return Rational(binomial(static_cast<unsigned long>(k) + l, l));
}

/// Brute-force [(1 - t)^(-s)]_k = prod_{j<k} (s + j)/(j + 1) for any rational s.
inline Rational generalized_binomial_coeff(const Rational& s, int k) {
  detail::require_non_negative(k, "k");
  Rational acc = 1;
  for (int j = 0; j < k; ++j) acc *= (s + j) / (j + 1);
  return acc;
}

/// (a * b)_k = sum_{j=0..k} a_{k-j} b_j.
inline Rational convolve(const SeriesCoefficients& a, const SeriesCoefficients& b, int k) {
  detail::require_non_negative(k, "k");
  if (static_cast<std::size_t>(k) >= a.size() || static_cast<std::size_t>(k) >= b.size())
    throw std::out_of_range("convolution index " + std::to_string(k) + " beyond series prefix");
  Rational acc = 0;
  for (int j = 0; j <= k; ++j) acc += a[k - j] * b[j];
  return acc;
}

/// [f(t) + (A / N^2) t^2 (1 - t)^(-5/2)]_k.
inline Rational phi_coeff(int N, const Rational& A, int k) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  detail::require_non_negative(k, "k");
  Rational value = wigner_moment(k);
  if (k >= 2) value += A * inverse_square(N) * coeff_half_integer(2, k - 2);
  return value;
}

}  // namespace rmt
