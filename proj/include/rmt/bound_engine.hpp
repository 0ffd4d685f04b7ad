#pragma once

// Auxiliary majorant grids {B_k, R_k^(q)} produced by the triangular scheme of
// recurrent estimates, together with the closed-form envelopes they are
// checked against and the sufficient conditions on the envelope constants.
//
// Domain: B_k for 0 <= k <= k_max and R(k, q) on {k >= 1, 2 <= q <= 2k,
// 2k + q <= 2 k_max}. The domain is closed under the recurrences, so every
// stored value is exact. Outside {2 <= q <= 2k} the grid reads as zero, except
// R(0, 0) = 1.

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmt/exact_moments.hpp"
#include "rmt/gf_series.hpp"
#include "rmt/rational.hpp"

namespace rmt {

enum class SchemeVariant { gue, goe, band };

inline std::string to_string(SchemeVariant v) {
  switch (v) {
    case SchemeVariant::gue: return "gue";
    case SchemeVariant::goe: return "goe";
    case SchemeVariant::band: return "band";
  }
  return "?";
}

inline SchemeVariant parse_scheme_variant(std::string_view name) {
  if (name == "gue") return SchemeVariant::gue;
  if (name == "goe") return SchemeVariant::goe;
  if (name == "band") return SchemeVariant::band;
  throw std::invalid_argument("unknown scheme variant '" + std::string(name) + "'");
}

/// N is used by the GUE/GOE variants; b and u_hat1 by the band variant.
struct SchemeParams {
  int N = 0;
  int b = 0;
  Rational u_hat1 = 1;
  int k_max = 1;

  static SchemeParams gue(int N, int k_max) { return {N, 0, Rational(1), k_max}; }
  static SchemeParams goe(int N, int k_max) { return {N, 0, Rational(1), k_max}; }
  static SchemeParams band(int b, Rational u_hat1, int k_max) { return {0, b, std::move(u_hat1), k_max}; }

  /// Matrix scale entering the 1/N^2 (or 1/b^2) terms.
  int scale(SchemeVariant v) const { return v == SchemeVariant::band ? b : N; }
};

enum class SweepOrder {
  triangular,  // lines k + q = m + 1 from the top point down to (m-1, 2), then B_m
  row_major,   // B_k, then R(k, 2..2k), for k = 1, 2, ...
};

class TriangularGrid {
 public:
  TriangularGrid(SchemeVariant variant, SchemeParams params) : variant_(variant), params_(std::move(params)) {
    const int k_max = params_.k_max;
    b_.assign(static_cast<std::size_t>(k_max) + 1, Rational(0));
    b_done_.assign(b_.size(), false);
    r_.resize(static_cast<std::size_t>(k_max) + 1);
    r_done_.resize(r_.size());
    for (int k = 1; k <= k_max; ++k) {
      r_[k].assign(static_cast<std::size_t>(2 * k) + 1, Rational(0));
      r_done_[k].assign(r_[k].size(), false);
    }
  }

  SchemeVariant variant() const { return variant_; }
  const SchemeParams& params() const { return params_; }
  int k_max() const { return params_.k_max; }

  bool stores(int k, int q) const { return k >= 1 && q >= 2 && q <= 2 * k && 2 * k + q <= 2 * params_.k_max; }

  const Rational& B(int k) const {
    if (k < 0 || k > params_.k_max || !b_done_[k]) throw std::out_of_range("B_" + std::to_string(k) + " not in grid");
    return b_[k];
  }

  Rational R(int k, int q) const {
    if (k == 0 && q == 0) return 1;
    if (k < 1 || q < 2 || q > 2 * k) return 0;
    if (!stores(k, q) || !r_done_[k][q])
      throw std::out_of_range("R(" + std::to_string(k) + "," + std::to_string(q) + ") not in grid");
    return r_[k][q];
  }

  /// Every stored (k, q) pair, ordered by k then q.
  std::vector<std::pair<int, int>> r_points() const {
    std::vector<std::pair<int, int>> pts;
    for (int k = 1; k <= params_.k_max; ++k)
      for (int q = 2; q <= 2 * k; ++q)
        if (stores(k, q)) pts.emplace_back(k, q);
    return pts;
  }

 private:
  friend class SchemeBuilder;

  SchemeVariant variant_;
  SchemeParams params_;
  std::vector<Rational> b_;
  std::vector<bool> b_done_;
  std::vector<std::vector<Rational>> r_;
  std::vector<std::vector<bool>> r_done_;
};

/// Fills a grid one entry at a time. Reading an entry that has not been
/// produced yet throws, so an invalid sweep order cannot go unnoticed.
class SchemeBuilder {
 public:
  explicit SchemeBuilder(TriangularGrid& grid) : g_(grid) {
    const int scale = g_.params_.scale(g_.variant_);
    if (scale < 1) throw std::invalid_argument("scheme scale (N or b) must be >= 1");
    if (g_.params_.k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    if (g_.variant_ == SchemeVariant::band && g_.params_.u_hat1 <= 0)
      throw std::invalid_argument("u_hat1 must be positive");
    inv_scale_ = make_rational(1, scale);
    inv_scale_sq_ = inv_scale_ * inv_scale_;
    g_.b_[0] = 1;
    g_.b_done_[0] = true;
  }

  void compute_B(int k) {
    Rational acc = 0;
    for (int j = 0; j < k; ++j) acc += g_.B(k - 1 - j) * g_.B(j);
    const Rational& u = g_.params_.u_hat1;
    Rational value;
    switch (g_.variant_) {
      case SchemeVariant::gue: value = acc / 4 + g_.R(k - 1, 2) / 4; break;
      case SchemeVariant::goe: value = acc / 4 + make_rational(k, 2) * inv_scale_ * g_.B(k - 1) + g_.R(k - 1, 2) / 4; break;
      case SchemeVariant::band: value = u * acc / 4 + g_.R(k - 1, 2) / 4; break;
    }
    g_.b_[k] = std::move(value);
    g_.b_done_[k] = true;
  }

  void compute_R(int k, int q) {
    Rational self = 0, pair = 0, mixed = 0;
    for (int j = 0; j < k; ++j) {
      self += g_.R(k - 1 - j, q) * g_.B(j);
      pair += g_.R(k - 1 - j, q - 2) * second_derivative_weight(j);
      mixed += g_.R(k - 1 - j, q - 1) * g_.R(j, 2);
    }
    const Rational above = g_.R(k - 1, q + 1);
    const Rational lower = g_.R(k - 1, q - 1);
    const Rational& u = g_.params_.u_hat1;
    const long kk = static_cast<long>(k) * k;
    Rational value;
    switch (g_.variant_) {
      case SchemeVariant::gue:
        value = self / 2 + make_rational(q - 1, 4) * inv_scale_sq_ * pair + above / 4 + mixed / 4 +
                make_rational(kk * q, 2) * inv_scale_sq_ * lower;
        break;
      case SchemeVariant::goe:
        value = self / 2 + make_rational(q - 1, 2) * inv_scale_sq_ * pair + make_rational(k, 2) * inv_scale_ * g_.R(k - 1, q) +
                above / 4 + mixed / 4 + make_rational(kk * q, 1) * inv_scale_sq_ * lower;
        break;
      case SchemeVariant::band:
        value = u * self / 2 + u * make_rational(q - 1, 4) * inv_scale_sq_ * pair + above / 4 + mixed / 4 +
                make_rational(2 * kk * (q - 1), 4) * inv_scale_sq_ * lower;
        break;
    }
    g_.r_[k][q] = std::move(value);
    g_.r_done_[k][q] = true;
  }

 private:
  // B''_j = (2j+2)(2j+1)/2 B_j
  Rational second_derivative_weight(int j) const { return make_rational((j + 1L) * (2L * j + 1), 1) * g_.B(j); }

  TriangularGrid& g_;
  Rational inv_scale_, inv_scale_sq_;
};

inline TriangularGrid run_scheme(SchemeVariant variant, const SchemeParams& params,
                                 SweepOrder order = SweepOrder::triangular) {
  TriangularGrid grid(variant, params);
  SchemeBuilder builder(grid);
  const int k_max = params.k_max;
  if (order == SweepOrder::triangular) {
    for (int m = 1; m <= 2 * k_max; ++m) {
      const int line = m + 1;
      for (int k = (line + 2) / 3; k <= line - 2; ++k)
        if (grid.stores(k, line - k)) builder.compute_R(k, line - k);
      if (m <= k_max) builder.compute_B(m);
    }
  } else {
    for (int k = 1; k <= k_max; ++k) {
      builder.compute_B(k);
      for (int q = 2; q <= 2 * k; ++q)
        if (grid.stores(k, q)) builder.compute_R(k, q);
    }
  }
  return grid;
}

inline bool operator==(const TriangularGrid& a, const TriangularGrid& b) {
  if (a.variant() != b.variant() || a.k_max() != b.k_max()) return false;
  for (int k = 0; k <= a.k_max(); ++k)
    if (a.B(k) != b.B(k)) return false;
  for (auto [k, q] : a.r_points())
    if (a.R(k, q) != b.R(k, q)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Envelopes

/// A, C and chi (theta for band). u_hat1 is used by the band sufficient
/// conditions only; the band envelope reads u_hat1 from the grid.
struct EnvelopeConstants {
  Rational A;
  Rational C;
  Rational chi;
  Rational u_hat1 = 1;

  Rational u_hat() const { return std::max(u_hat1, make_rational(1, 8)); }
};

/// Admissible constant ranges; an empty string means valid.
inline std::string validate_constants(SchemeVariant variant, const EnvelopeConstants& c) {
  auto show = [](const Rational& r) { return to_string(r); };
  if (c.chi <= 0) return "chi/theta must be positive, got " + show(c.chi);
  switch (variant) {
    case SchemeVariant::gue:
    case SchemeVariant::band: {
      if (c.A <= make_rational(1, 16)) return "A must exceed 1/16, got " + show(c.A);
      const Rational upper = std::max(variant == SchemeVariant::gue ? Rational(2 * c.A / 3) : Rational(3 * c.A / 2), Rational(24));
      if (c.C <= make_rational(1, 24) || c.C >= upper)
        return "C must lie in (1/24, " + show(upper) + "), got " + show(c.C);
      if (variant == SchemeVariant::band && c.u_hat1 <= 0) return "u_hat1 must be positive";
      break;
    }
    case SchemeVariant::goe:
      if (c.A <= make_rational(1, 2)) return "A must exceed 1/2, got " + show(c.A);
      if (c.C <= make_rational(1, 4) || c.C >= 1440) return "C must lie in (1/4, 1440), got " + show(c.C);
      break;
  }
  return {};
}

/// Largest k >= 0 with k^3 <= chi scale^2, searching no further than `limit + 1`.
inline int envelope_k0(const Rational& chi, int scale, int limit) {
  const Rational budget = chi * scale * scale;
  int k = 0;
  while (k <= limit && Rational(static_cast<long>(k + 1) * (k + 1) * (k + 1)) <= budget) ++k;
  return k;
}

inline Rational band_u_hat(const SchemeParams& p) { return std::max(p.u_hat1, make_rational(1, 8)); }

/// Envelope value for B_k.
inline Rational envelope_B(const TriangularGrid& grid, const EnvelopeConstants& c, int k) {
  const auto& p = grid.params();
  switch (grid.variant()) {
    case SchemeVariant::gue: return phi_coeff(p.N, c.A, k);
    case SchemeVariant::goe: return wigner_moment(k) + (k >= 1 ? Rational(c.A / p.N) : Rational(0));
    case SchemeVariant::band: {
      Rational value = band_limit_moment(k, p.u_hat1);
      if (k >= 2)
        value += c.A * band_u_hat(p) * inverse_square(p.b) * pow(p.u_hat1, k - 2UL) * coeff_half_integer(2, k - 2);
      return value;
    }
  }
  return 0;
}

/// Envelope value for R(k, q), k >= 1, q >= 2.
inline Rational envelope_R(const TriangularGrid& grid, const EnvelopeConstants& c, int k, int q) {
  const auto& p = grid.params();
  const int s = q / 2;
  const bool even = q % 2 == 0;
  const Rational inv_sq = inverse_square(p.scale(grid.variant()));
  if (grid.variant() == SchemeVariant::band) {
    // tau (1 - tau u_hat1)^(-2s) and tau (1 - tau u_hat1)^(-(2s+1)) with the u_hat^s weights
    const Rational geometric = pow(p.u_hat1, k - 1UL);
    if (even)
      return c.C * pow(band_u_hat(p), s) * Rational(factorial(3UL * s)) * pow(inv_sq, s) * geometric *
             coeff_integer(2 * s - 1, k - 1);
    return c.C * pow(band_u_hat(p), s + 1UL) * Rational(factorial(3UL * s + 3)) * pow(inv_sq, s + 1UL) * geometric *
           coeff_integer(2 * s, k - 1);
  }
  if (even) return c.C * Rational(factorial(3UL * s)) * pow(inv_sq, s) * coeff_integer(2 * s - 1, k - 1);
  return c.C * Rational(factorial(3UL * s + 3)) * pow(inv_sq, s + 1UL) * coeff_half_integer(2 * s + 2, k - 1);
}

struct EnvelopeViolation {
  int k = 0;
  int q = 0;  // 0 marks the B_k envelope
  Rational value;
  Rational bound;
};

struct EnvelopeReport {
  std::string constants_issue;  // empty when the constants are admissible
  int k0 = 0;
  bool domain_covered = true;  // k0 <= grid k_max
  std::size_t comparisons = 0;
  std::optional<EnvelopeViolation> first_violation;

  bool constants_valid() const { return constants_issue.empty(); }
  bool passed() const { return constants_valid() && domain_covered && !first_violation; }
};

/// Compares B_k (k <= k0) and R(k, q) (2k + q <= 2 k0) against their
/// envelopes, where k0 is the largest k with k^3 <= chi N^2 (theta b^2 for
/// band). Comparisons run even when the constants are inadmissible so a
/// threshold violation can still be located.
inline EnvelopeReport envelope_check(const TriangularGrid& grid, const EnvelopeConstants& constants) {
  EnvelopeReport report;
  report.constants_issue = validate_constants(grid.variant(), constants);
  const int scale = grid.params().scale(grid.variant());
  report.k0 = envelope_k0(constants.chi, scale, grid.k_max());
  if (report.k0 > grid.k_max()) {
    report.domain_covered = false;
    return report;
  }
  const int k0 = report.k0;
  for (int k = 0; k <= k0 && !report.first_violation; ++k) {
    ++report.comparisons;
    Rational bound = envelope_B(grid, constants, k);
    if (grid.B(k) > bound) {
      report.first_violation = EnvelopeViolation{k, 0, grid.B(k), std::move(bound)};
      break;
    }
    for (int q = 2; q <= 2 * k && 2 * k + q <= 2 * k0; ++q) {
      ++report.comparisons;
      Rational r_bound = envelope_R(grid, constants, k, q);
      if (grid.R(k, q) > r_bound) {
        report.first_violation = EnvelopeViolation{k, q, grid.R(k, q), std::move(r_bound)};
        break;
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Sufficient conditions on the constants

struct ConditionResult {
  std::string name;
  bool holds = false;
  Rational lhs;
  Rational rhs;
  std::string note;
};

struct SufficientConditionsReport {
  std::vector<ConditionResult> conditions;

  bool all_hold() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.holds; });
  }
};

inline SufficientConditionsReport sufficient_conditions(SchemeVariant variant, const EnvelopeConstants& k) {
  SufficientConditionsReport report;
  auto add = [&](std::string name, bool holds, Rational lhs, Rational rhs, std::string note = {}) {
    report.conditions.push_back({std::move(name), holds, std::move(lhs), std::move(rhs), std::move(note)});
  };
  const Rational& A = k.A;
  const Rational& C = k.C;
  const Rational& chi = k.chi;
  switch (variant) {
    case SchemeVariant::gue: {
      Rational rhs_b = 3 * C / 2 + A * A * chi / 96;
      add("B: A >= 3C/2 + A^2 chi/96", A >= rhs_b, A, rhs_b);
      const Rational K = 1 + 10 * C * (1 + C) + 2 * A * C;
      Rational rhs_s1 = make_rational(1, 24) + 2 * chi * K;
      add("R even (s=1): C > 1/24 + 2 chi K", C > rhs_s1, C, rhs_s1, "K = 1 + 10C(1+C) + 2AC");
      Rational rhs_s2 = C / 24 + 2 * chi * K;
      add("R even (s>=2): C > C/24 + 2 chi K", C > rhs_s2, C, rhs_s2, "K = 1 + 10C(1+C) + 2AC");
      Rational rhs_odd = 24 / (1 + 4 * A * chi);
      add("R odd: C <= 24/(1 + 4 A chi)", C <= rhs_odd, C, rhs_odd);
      break;
    }
    case SchemeVariant::goe: {
      // A >= 1/2 + (A + A^2 + 3C) sqrt(chi), compared exactly after squaring.
      const Rational slack = A - make_rational(1, 2);
      const Rational weight = A + A * A + 3 * C;
      Rational rhs = weight * weight * chi;
      add("B: A >= 1/2 + (A + A^2 + 3C) sqrt(chi)", slack >= 0 && slack * slack >= rhs, slack * slack, rhs,
          "compared as (A - 1/2)^2 >= (A + A^2 + 3C)^2 chi with A >= 1/2");
      break;
    }
    case SchemeVariant::band: {
      const Rational& u1 = k.u_hat1;
      const Rational u = k.u_hat();
      Rational rhs_b = 3 * C / 2 + A * A * u1 * chi / 16;
      add("B: A > 3C/2 + A^2 u_hat1 theta/16", A > rhs_b, A, rhs_b);
      const Rational K = 1 + 10 * u * C * (1 + C) + 2 * u1 * A * C;
      Rational rhs_s1 = make_rational(1, 24) + 2 * chi * K;
      add("R even (s=1): C > 1/24 + 2 theta K", C > rhs_s1, C, rhs_s1, "K = 1 + 10 u C(1+C) + 2 u_hat1 A C");
      Rational rhs_s2 = C / 24 + 2 * chi * K;
      add("R even (s>=2): C > C/24 + 2 theta K", C > rhs_s2, C, rhs_s2, "K = 1 + 10 u C(1+C) + 2 u_hat1 A C");
      Rational lhs = 179 * u;
      Rational rhs_odd = 20 + 3 * u * C + 18 * chi * u * u1 * A;
      add("R odd: 179 u > 20 + 3 u C + 18 theta u u_hat1 A", lhs > rhs_odd, lhs, rhs_odd,
          "numeric constants taken verbatim; their derivation is not given");
      break;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Search for chi

struct FindChiOptions {
  int k_cap = 48;  // largest grid built; chi values needing a bigger k0 are rejected
  /// u_hat1 for each band width (band variant only); indicator profile by default.
  std::function<Rational(int)> u_hat1_for = indicator_u_hat1;
};

/// Largest chi in `chi_grid` whose envelope check passes at every scale in
/// `scales` (N for GUE/GOE, b for band). chi values whose k0 exceeds the
/// validated range count as failures.
inline std::optional<Rational> find_chi(SchemeVariant variant, const Rational& A, const Rational& C,
                                        const std::vector<int>& scales, std::vector<Rational> chi_grid,
                                        const FindChiOptions& options = {}) {
  if (chi_grid.empty() || scales.empty()) return std::nullopt;
  std::sort(chi_grid.begin(), chi_grid.end(), std::greater<>());

  std::vector<TriangularGrid> grids;
  for (int scale : scales) {
    int needed = 1;
    for (const auto& chi : chi_grid) {
      const int k0 = envelope_k0(chi, scale, options.k_cap);
      if (k0 <= options.k_cap) needed = std::max(needed, k0);
    }
    SchemeParams params = variant == SchemeVariant::band
                              ? SchemeParams::band(scale, options.u_hat1_for(scale), needed)
                              : SchemeParams::gue(scale, needed);
    grids.push_back(run_scheme(variant, params));
  }

  for (const auto& chi : chi_grid) {
    bool ok = true;
    for (const auto& grid : grids) {
      EnvelopeConstants constants{A, C, chi, grid.params().u_hat1};
      if (!envelope_check(grid, constants).passed()) {
        ok = false;
        break;
      }
    }
    if (ok) return chi;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Dominance of the true moments by the grid

struct DominanceRow {
  int k = 0;
  std::optional<Rational> moment;  // exact moment when available (GUE)
  Rational bound;                  // B_k
  std::optional<bool> holds;
};

struct DominanceReport {
  SchemeVariant variant{};
  std::vector<DominanceRow> rows;

  bool exact() const { return variant == SchemeVariant::gue; }

  std::optional<int> first_failure() const {
    for (const auto& row : rows)
      if (row.holds && !*row.holds) return row.k;
    return std::nullopt;
  }
};

/// GUE: checks M_2k^(N) <= B_k exactly for every k in the grid. GOE and band
/// grids have no exact moments to compare against; their B_k are emitted for
/// comparison with Monte Carlo estimates.
inline DominanceReport dominance_check(const TriangularGrid& grid) {
  DominanceReport report{grid.variant(), {}};
  for (int k = 0; k <= grid.k_max(); ++k) {
    DominanceRow row;
    row.k = k;
    row.bound = grid.B(k);
    if (grid.variant() == SchemeVariant::gue) {
      row.moment = hz_moment(k, grid.params().N);
      row.holds = *row.moment <= row.bound;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Export

inline nlohmann::json to_json(const TriangularGrid& grid) {
  const auto& p = grid.params();
  nlohmann::json params = {{"k_max", p.k_max}};
  if (grid.variant() == SchemeVariant::band) {
    params["b"] = p.b;
    params["u_hat1"] = to_string(p.u_hat1);
  } else {
    params["N"] = p.N;
  }
  nlohmann::json b = nlohmann::json::array();
  for (int k = 0; k <= grid.k_max(); ++k) b.push_back(to_string(grid.B(k)));
  nlohmann::json r = nlohmann::json::array();
  for (auto [k, q] : grid.r_points()) r.push_back({{"k", k}, {"q", q}, {"value", to_string(grid.R(k, q))}});
  return {{"variant", to_string(grid.variant())}, {"params", params}, {"B", b}, {"R", r}};
}

}  // namespace rmt
