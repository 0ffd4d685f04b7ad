#pragma once

// Exact finite-N GUE moments, first-order corrections for the three
// Gaussian ensembles, leading covariance coefficients and the two explicit
// moment bounds.

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rmt/gf_series.hpp"
#include "rmt/rational.hpp"

namespace rmt {

enum class EnsembleKind { gue, goe, antisymmetric, band };

/// Symmetry parameter of the Gaussian family: 0 (GUE), 1 (GOE), -1 (anti-symmetric).
/// Band matrices are built from the GUE family.
constexpr int eta(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::goe: return 1;
    case EnsembleKind::antisymmetric: return -1;
    default: return 0;
  }
}

inline std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::gue: return "gue";
    case EnsembleKind::goe: return "goe";
    case EnsembleKind::antisymmetric: return "antisym";
    case EnsembleKind::band: return "band";
  }
  return "?";
}

inline EnsembleKind parse_ensemble_kind(std::string_view name) {
  if (name == "gue") return EnsembleKind::gue;
  if (name == "goe") return EnsembleKind::goe;
  if (name == "antisym" || name == "antisymmetric") return EnsembleKind::antisymmetric;
  if (name == "band") return EnsembleKind::band;
  throw std::invalid_argument("unknown ensemble '" + std::string(name) + "'");
}

/// M_2k^(N) as a polynomial in x = 1/N^2; coefficient j multiplies x^j.
struct MomentPolynomial {
  std::vector<Rational> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  Rational coeff(int j) const {
    return j >= 0 && j < static_cast<int>(coeffs.size()) ? coeffs[j] : Rational(0);
  }

  Rational evaluate(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Rational at_N(int N) const { return evaluate(inverse_square(N)); }
};

namespace detail {

inline void require_positive(long value, const char* what) {
  if (value < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

/// Grow-only cache of Harer-Zagier polynomials. Entries are never modified
/// once appended, and every access holds the mutex.
class HarerZagierTable {
 public:
  MomentPolynomial get(int k) {
    std::lock_guard lock(mutex_);
    if (table_.empty()) {
      table_.push_back({{Rational(1)}});
      table_.push_back({{make_rational(1, 4)}});
    }
    while (static_cast<int>(table_.size()) <= k) extend();
    return table_[static_cast<std::size_t>(k)];
  }

 private:
  // M_2k = (2k-1)/(2k+2) M_{2k-2} + (2k-1)/(2k+2) (2k-3)/(2k) k(k-1)/4 x M_{2k-4}
  void extend() {
    const int k = static_cast<int>(table_.size());
    const Rational first = make_rational(2 * k - 1, 2 * k + 2);
    const Rational second =
        first * make_rational(2 * k - 3, 2 * k) * make_rational(static_cast<long>(k) * (k - 1), 4);
    const auto& prev = table_[k - 1].coeffs;
    const auto& prev2 = table_[k - 2].coeffs;
    std::vector<Rational> next(std::max(prev.size(), prev2.size() + 1));
    for (std::size_t j = 0; j < prev.size(); ++j) next[j] += first * prev[j];
    for (std::size_t j = 0; j < prev2.size(); ++j) next[j + 1] += second * prev2[j];
    table_.push_back({std::move(next)});
  }

  std::mutex mutex_;
  std::vector<MomentPolynomial> table_;
};

inline HarerZagierTable& harer_zagier_table() {
  static HarerZagierTable table;
  return table;
}

}  // namespace detail

/// GUE moment M_2k^(N) as an exact polynomial in 1/N^2.
inline MomentPolynomial hz_moment_poly(int k) {
  detail::require_non_negative(k, "k");
  return detail::harer_zagier_table().get(k);
}

inline Rational hz_moment(int k, int N) {
  detail::require_positive(N, "N");
  return hz_moment_poly(k).at_N(N);
}

/// Scalar run of the same recurrence at fixed N; must agree with hz_moment.
inline Rational hz_moment_direct(int k, int N) {
  detail::require_non_negative(k, "k");
  detail::require_positive(N, "N");
  const Rational x = inverse_square(N);
  Rational prev2 = 1, prev = make_rational(1, 4);
  if (k == 0) return prev2;
  for (int j = 2; j <= k; ++j) {
    const Rational first = make_rational(2 * j - 1, 2 * j + 2);
    Rational next = first * prev + first * make_rational(2 * j - 3, 2 * j) *
                                       make_rational(static_cast<long>(j) * (j - 1), 4) * x * prev2;
    prev2 = prev;
    prev = next;
  }
  return prev;
}

/// m_k^(2) = k(k-1)(k+1)/12 m_k, the 1/N^2 coefficient of the GUE moment.
inline Rational gue_correction(int k) {
  detail::require_non_negative(k, "k");
  return make_rational(static_cast<long>(k) * (k - 1) * (k + 1), 12) * wigner_moment(k);
}

/// 1/N coefficient of the GOE moment: (1 - (k+1) m_k) / 2.
inline Rational goe_correction(int k) {
  detail::require_non_negative(k, "k");
  return (1 - (k + 1) * wigner_moment(k)) / 2;
}

/// 1/N coefficient of the anti-symmetric moment: (delta_{k,0} - (k+1) m_k) / 2.
inline Rational antisym_correction(int k) {
  detail::require_non_negative(k, "k");
  return ((k == 0 ? 1 : 0) - (k + 1) * wigner_moment(k)) / 2;
}

/// r_k with D^(2)_2k = r_k / N^2 + higher order.
///
/// The anti-symmetric value (k+1)/4 is returned as printed for every k >= 1.
/// At k = 1 the ensemble has Tr H = 0 identically so the true covariance is
/// zero; see `cov_leading_is_anomalous`.
inline Rational cov_leading(EnsembleKind kind, int k) {
  detail::require_positive(k, "k");
  switch (kind) {
    case EnsembleKind::gue: return make_rational(k, 4);
    case EnsembleKind::goe: return make_rational(k, 2);
    case EnsembleKind::antisymmetric: return make_rational(k + 1, 4);
    case EnsembleKind::band: break;
  }
  throw std::invalid_argument("leading covariance coefficient is not available for band matrices");
}

inline bool cov_leading_is_anomalous(EnsembleKind kind, int k) {
  return kind == EnsembleKind::antisymmetric && k == 1;
}

/// N-free part of r^(2s)_k: (2s-1)!!/4^s [t^s (1-t)^(-2s)]_k. Multiply by N^(-2s).
inline Rational cov_leading_higher(int s, int k) {
  detail::require_positive(s, "s");
  detail::require_positive(k, "k");
  if (k < s) return 0;
  Rational weight = make_rational(double_factorial_odd(s), BigInt(1) << (2 * static_cast<mp_bitcnt_t>(s)));
  return weight * coeff_integer(2 * s - 1, k - s);
}

/// m_k(u1) = u1^k m_k.
inline Rational band_limit_moment(int k, const Rational& u1) {
  detail::require_non_negative(k, "k");
  if (u1 <= 0) throw std::invalid_argument("u1 must be positive");
  return pow(u1, static_cast<unsigned long>(k)) * wigner_moment(k);
}

/// Lattice-corrected profile mass 1/b + (1/b) sum_l u(l/b) for the indicator of
/// (-1/2, 1/2): 1 for even b, (b+1)/b for odd b.
inline Rational indicator_u_hat1(int b) {
  detail::require_positive(b, "b");
  const long lattice_points = 2L * ((b - 1) / 2) + 1;  // integers l with 2|l| < b
  return make_rational(1 + lattice_points, b);
}

/// (1 + k^2/(8N^2))^(2k) m_k, valid for every k and N.
inline Rational classic_bound(int k, int N) {
  detail::require_non_negative(k, "k");
  detail::require_positive(N, "N");
  const Rational base = 1 + make_rational(static_cast<long>(k) * k, 8L * N * N);
  return pow(base, 2UL * static_cast<unsigned long>(k)) * wigner_moment(k);
}

/// (1 + alpha k(k^2-1)/N^2) m_k with alpha > 1/12.
inline Rational alpha_bound(int k, int N, const Rational& alpha) {
  detail::require_non_negative(k, "k");
  detail::require_positive(N, "N");
  if (alpha <= make_rational(1, 12)) throw std::invalid_argument("alpha must exceed 1/12");
  return (1 + alpha * make_rational(static_cast<long>(k) * (static_cast<long>(k) * k - 1), 1) * inverse_square(N)) *
         wigner_moment(k);
}

}  // namespace rmt
