#pragma once

// Seeded samplers for the Gaussian family H^(eta) and for band matrices.
// Every entry is a pure function of (seed, sample index, entry index), so a
// sample never depends on which thread produced it or in what order.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "rmt/exact_moments.hpp"
#include "rmt/rational.hpp"

namespace rmt {

/// Even, non-negative profile u(t) with u(0) = sup u = 1, non-increasing on t >= 0.
struct BandProfile {
  enum class Shape { indicator, triangle, gaussian, custom };

  Shape shape = Shape::indicator;
  std::string name = "indicator";
  std::function<double(double)> u;  // custom shape only
  double u1 = 1.0;                  // integral of u over the real line
  std::optional<double> support;    // u(t) = 0 for |t| >= support; empty means unbounded

  /// Indicator of the open interval (-1/2, 1/2).
  static BandProfile indicator() { return {}; }

  /// u(t) = max(0, 1 - |t|).
  static BandProfile triangle() { return {Shape::triangle, "triangle", nullptr, 1.0, 1.0}; }

  /// u(t) = exp(-pi t^2).
  static BandProfile gaussian() { return {Shape::gaussian, "gaussian", nullptr, 1.0, std::nullopt}; }

  static BandProfile custom(std::string name, std::function<double(double)> u, double u1,
                            std::optional<double> support = std::nullopt) {
    if (!u) throw std::invalid_argument("custom profile needs a function");
    if (!(u1 > 0)) throw std::invalid_argument("profile mass u1 must be positive");
    if (support && !(*support > 0)) throw std::invalid_argument("profile support must be positive");
    return {Shape::custom, std::move(name), std::move(u), u1, support};
  }

  double operator()(double t) const {
    const double a = std::abs(t);
    switch (shape) {
      case Shape::indicator: return a < 0.5 ? 1.0 : 0.0;
      case Shape::triangle: return a < 1.0 ? 1.0 - a : 0.0;
      case Shape::gaussian: return std::exp(-std::numbers::pi * a * a);
      case Shape::custom: return support && a >= *support ? 0.0 : u(a);
    }
    return 0.0;
  }

  /// u(l / b) for an integer offset l. The indicator uses the integer test
  /// 2|l| < b so the band edge never depends on rounding.
  double value_at_offset(long l, int b) const {
    if (shape == Shape::indicator) return 2 * std::abs(l) < b ? 1.0 : 0.0;
    return (*this)(static_cast<double>(l) / b);
  }

  /// Largest |x - y| with a possibly non-zero entry, capped at N - 1.
  int bandwidth(int b, int N) const {
    long w = N - 1;
    switch (shape) {
      case Shape::indicator: w = (b - 1) / 2; break;
      case Shape::triangle: w = b - 1; break;
      case Shape::gaussian: break;
      case Shape::custom:
        if (support) w = static_cast<long>(std::ceil(*support * b));
        while (w > 0 && value_at_offset(w, b) == 0.0) --w;
        break;
    }
    return static_cast<int>(std::min<long>(w, N - 1));
  }
};

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::gue;
  int N = 1;
  int b = 0;  // band only
  BandProfile profile;

  static EnsembleSpec gaussian(EnsembleKind kind, int N) {
    EnsembleSpec s{kind, N, 0, {}};
    s.validate();
    return s;
  }

  static EnsembleSpec band(int N, int b, BandProfile profile = BandProfile::indicator()) {
    EnsembleSpec s{EnsembleKind::band, N, b, std::move(profile)};
    s.validate();
    return s;
  }

  int eta() const { return rmt::eta(kind); }

  void validate() const {
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    if (kind == EnsembleKind::band) {
      if (b < 1) throw std::invalid_argument("band width b must be >= 1");
      if (b > N) throw std::invalid_argument("band width b must not exceed N");
    }
  }

  int bandwidth() const { return kind == EnsembleKind::band ? profile.bandwidth(b, N) : N - 1; }
};

struct HermitianMatrix {
  Eigen::MatrixXcd data;
  int bandwidth = 0;  // entries with |x - y| > bandwidth are exactly zero

  int dim() const { return static_cast<int>(data.rows()); }
};

namespace detail {

constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: two independent standard normals per entry key.
class EntryNormals {
 public:
  EntryNormals(std::uint64_t seed, std::uint64_t index) : key_(mix64(mix64(seed) ^ (index * 0xd1b54a32d192ed03ULL))) {}

  std::pair<double, double> operator()(std::uint64_t entry) const {
    const std::uint64_t base = mix64(key_ ^ mix64(entry));
    // 53-bit uniforms; u1 in (0, 1] keeps the logarithm finite
    const double u1 = static_cast<double>((mix64(base) >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(mix64(base ^ 0x632be59bd9b4e019ULL) >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

 private:
  std::uint64_t key_;
};

}  // namespace detail

/// One draw. Gaussian family: H_xy = (V + iW)/sqrt(N), Var V = (1+d)(1+eta)/8,
/// Var W = (1-d)(1-eta)/8 with d = [x == y]. Band: the eta = 0 entries without
/// the 1/sqrt(N) factor, times sqrt(u((x-y)/b)/b).
inline HermitianMatrix sample(const EnsembleSpec& spec, std::uint64_t seed, std::uint64_t index) {
  spec.validate();
  const int N = spec.N;
  const bool band = spec.kind == EnsembleKind::band;
  const int eta = band ? 0 : spec.eta();
  const int w = spec.bandwidth();
  const detail::EntryNormals normals(seed, index);

  const double sd_v_diag = std::sqrt((1.0 + eta) / 4.0);
  const double sd_v_off = std::sqrt((1.0 + eta) / 8.0);
  const double sd_w_off = std::sqrt((1.0 - eta) / 8.0);
  const double global = band ? 1.0 : 1.0 / std::sqrt(static_cast<double>(N));

  HermitianMatrix H{Eigen::MatrixXcd::Zero(N, N), w};
  for (int x = 0; x < N; ++x) {
    const int y_end = std::min(N - 1, x + w);
    for (int y = x; y <= y_end; ++y) {
      double scale = global;
      if (band) {
        const double u = spec.profile.value_at_offset(y - x, spec.b);
        if (u == 0.0) continue;
        scale = std::sqrt(u / spec.b);
      }
      const auto [g1, g2] = normals(static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(N) + y);
      if (x == y) {
        H.data(x, x) = {sd_v_diag * g1 * scale, 0.0};
      } else {
        const std::complex<double> h{sd_v_off * g1 * scale, sd_w_off * g2 * scale};
        H.data(x, y) = h;
        H.data(y, x) = std::conj(h);
      }
    }
  }
  return H;
}

/// 1/b + (1/b) sum_l u(l/b); exact for the indicator profile.
struct ProfileMass {
  double value = 0.0;
  std::optional<Rational> exact;
};

inline ProfileMass u_hat1(const BandProfile& profile, int b, double rel_tol = 1e-15, long max_terms = 100'000'000) {
  if (b < 1) throw std::invalid_argument("b must be >= 1");
  if (profile.shape == BandProfile::Shape::indicator) {
    Rational exact = indicator_u_hat1(b);
    return {exact.get_d(), exact};
  }
  double sum = profile.value_at_offset(0, b);
  for (long l = 1;; ++l) {
    if (l > max_terms) throw std::runtime_error("profile lattice sum did not converge");
    const double term = 2.0 * profile.value_at_offset(l, b);
    sum += term;
    const bool past_support = profile.support && static_cast<double>(l) / b >= *profile.support;
    if (past_support || (term <= rel_tol * sum && static_cast<double>(l) > b)) break;
  }
  return {(1.0 + sum) / b, std::nullopt};
}

}  // namespace rmt
