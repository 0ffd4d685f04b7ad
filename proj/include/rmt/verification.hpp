#pragma once

// The verification suite shared by `rmt verify-all` and the acceptance
// binary. Each check returns its report rows; `fast` trades sample counts and
// matrix sizes for speed and is meant for smoke runs, not for the verdicts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "rmt/bound_engine.hpp"
#include "rmt/ensembles.hpp"
#include "rmt/estimators.hpp"
#include "rmt/exact_moments.hpp"
#include "rmt/gf_series.hpp"
#include "rmt/report.hpp"

namespace rmt {

struct VerifyOptions {
  bool fast = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  Report report;
};

inline constexpr int kCriterionCount = 12;

namespace verify {

inline std::uint64_t seed_for(int id) { return 20'240'000ULL + static_cast<std::uint64_t>(id); }

inline ReportRow row(std::string quantity, std::string value, std::string reference, Verdict verdict) {
  ReportRow r;
  r.quantity = std::move(quantity);
  r.value = std::move(value);
  r.reference = std::move(reference);
  r.verdict = verdict;
  return r;
}

inline ReportRow mc_row(std::string quantity, const MCEstimate& e, double scale, std::string reference,
                        Verdict verdict) {
  ReportRow r;
  r.quantity = std::move(quantity);
  r.value = format_double(scale * e.mean);
  r.std_error = format_double(scale * e.std_error);
  r.reference = std::move(reference);
  r.verdict = verdict;
  return r;
}

inline bool within(const MCEstimate& e, double reference, double sigmas = 4.0, double slack = 0.0) {
  return std::abs(e.mean - reference) <= sigmas * e.std_error + slack;
}

inline CriterionResult finish(CriterionResult c) {
  c.passed = c.report.all_pass() && !c.report.rows.empty();
  return c;
}

// 1. Classic bound
inline CriterionResult classic_bound_check(const VerifyOptions&) {
  CriterionResult c{1, "classic bound dominates exact GUE moments", false, {}, {}};
  long total = 0, pairs = 0;
  for (int N : {1, 2, 4, 8, 16, 32, 64}) {
    long violations = 0;
    for (int k = 0; k <= 100; ++k, ++pairs) violations += hz_moment(k, N) > classic_bound(k, N);
    total += violations;
    auto r = row("classic_bound_violations_k<=100", std::to_string(violations), "0", verdict_of(violations == 0));
    r.N = N;
    c.report.rows.push_back(r);
  }
  c.detail = std::to_string(total) + " violations over " + std::to_string(pairs) + " pairs";
  return finish(std::move(c));
}

// 2. First-order coefficient of the exact polynomial
inline CriterionResult correction_coefficient_check(const VerifyOptions&) {
  CriterionResult c{2, "x-coefficient equals k(k-1)(k+1)/12 m_k", false, {}, {}};
  long mismatches = 0;
  for (int k = 0; k <= 50; ++k)
    mismatches +=
        hz_moment_poly(k).coeff(1) != make_rational(static_cast<long>(k) * (k - 1) * (k + 1), 12) * wigner_moment(k);
  c.report.rows.push_back(
      row("x_coefficient_mismatches_k<=50", std::to_string(mismatches), "0", verdict_of(mismatches == 0)));
  c.detail = std::to_string(mismatches) + " mismatches";
  return finish(std::move(c));
}

// 3. Coefficient identities against the brute-force expansion
inline CriterionResult coefficient_identity_check(const VerifyOptions&) {
  CriterionResult c{3, "coefficient closed forms equal series expansion", false, {}, {}};
  auto half = [](int r) { return make_rational(2L * r + 1, 2); };
  long closed = 0, catalan_form = 0, three_halves = 0, five_halves = 0, integer = 0;
  for (int k = 0; k <= 50; ++k) {
    for (int r = 0; r <= 6; ++r) {
      const Rational series = generalized_binomial_coeff(half(r), k);
      closed += coeff_half_integer(r, k) != series;
      if (r >= 1) catalan_form += coeff_half_integer_catalan_form(r, k) != series;
    }
    for (int l = 0; l <= 6; ++l) integer += coeff_integer(l, k) != generalized_binomial_coeff(Rational(l + 1), k);
    three_halves +=
        generalized_binomial_coeff(half(1), k) != make_rational((2L * k + 2) * (2L * k + 1), 2) * wigner_moment(k);
    five_halves += generalized_binomial_coeff(half(2), k) !=
                   make_rational((2L * k + 1) * (2L * k + 2) * (2L * k + 3), 6) * wigner_moment(k);
  }
  auto add = [&](const char* name, long n) {
    c.report.rows.push_back(row(name, std::to_string(n), "0", verdict_of(n == 0)));
  };
  add("half_integer_factorial_form_mismatches", closed);
  add("half_integer_catalan_form_mismatches", catalan_form);
  add("power_3/2_moment_form_mismatches", three_halves);
  add("power_5/2_moment_form_mismatches", five_halves);
  add("integer_power_binomial_mismatches", integer);
  c.detail = std::to_string(closed + catalan_form + three_halves + five_halves + integer) + " mismatches";
  return finish(std::move(c));
}

// 4. Exact moments stay below the GUE grid
inline CriterionResult dominance_criterion(const VerifyOptions&) {
  CriterionResult c{4, "exact moments dominated by the GUE grid", false, {}, {}};
  for (int N : {8, 16, 32}) {
    int k_top = 0;
    while (10L * (k_top + 1) * (k_top + 1) * (k_top + 1) <= static_cast<long>(N) * N) ++k_top;
    const auto grid = run_scheme(SchemeVariant::gue, SchemeParams::gue(N, std::max(k_top, 2)));
    for (int k = 0; k <= k_top; ++k) {
      const Rational M = hz_moment(k, N);
      auto r = row("moment_le_B", to_string(M), to_string(grid.B(k)), verdict_of(M <= grid.B(k)));
      r.k = k;
      r.N = N;
      c.report.rows.push_back(r);
    }
    const Rational expected = make_rational(1, 8) + make_rational(1, 16L * N * N);
    auto eq = row("B_2_equals_moment", to_string(grid.B(2)), to_string(expected),
                  verdict_of(grid.B(2) == expected && hz_moment(2, N) == expected));
    eq.k = 2;
    eq.N = N;
    c.report.rows.push_back(eq);
  }
  c.detail = std::to_string(c.report.count(Verdict::pass)) + "/" + std::to_string(c.report.rows.size()) + " rows hold";
  return finish(std::move(c));
}

// 5. Envelopes at A = 1/8, C = 1/20, and their failure below the A threshold
inline CriterionResult envelope_criterion(const VerifyOptions&) {
  CriterionResult c{5, "envelopes hold for some chi >= 1/100 and fail for A = 1/20", false, {}, {}};
  const Rational A = make_rational(1, 8), C = make_rational(1, 20);
  const std::vector<int> Ns{16, 32, 64};
  std::vector<Rational> chi_grid;
  for (long d : {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000}) chi_grid.push_back(make_rational(1, d));
  const auto chi = find_chi(SchemeVariant::gue, A, C, Ns, chi_grid);
  const Rational floor_chi = make_rational(1, 100);
  c.report.rows.push_back(
      row("find_chi_A=1/8_C=1/20", chi ? to_string(*chi) : "none", ">= 1/100", verdict_of(chi && *chi >= floor_chi)));

  const Rational probe_chi = chi ? *chi : floor_chi;
  bool threshold_failed = false;
  std::string where = "none";
  for (int N : Ns) {
    const int k0 = envelope_k0(probe_chi, N, 64);
    const auto grid = run_scheme(SchemeVariant::gue, SchemeParams::gue(N, std::max(k0, 2)));
    const auto good = envelope_check(grid, {A, C, probe_chi});
    auto r = row("envelope_A=1/8", good.passed() ? "pass" : "fail", "pass", verdict_of(good.passed()));
    r.N = N;
    r.k = good.k0;
    c.report.rows.push_back(r);

    const auto bad = envelope_check(grid, {make_rational(1, 20), C, probe_chi});
    std::string outcome = "none";
    if (bad.first_violation) {
      outcome = "k=" + std::to_string(bad.first_violation->k) + " q=" + std::to_string(bad.first_violation->q);
      if (!threshold_failed) where = "N=" + std::to_string(N) + " " + outcome;
      threshold_failed = true;
    }
    auto t = row("envelope_A=1/20_first_violation", outcome, "some violation", Verdict::info);
    t.N = N;
    c.report.rows.push_back(t);
  }
  c.report.rows.push_back(row("envelope_A=1/20_fails_somewhere", threshold_failed ? "yes" : "no", "yes",
                              verdict_of(threshold_failed)));
  c.detail = "chi = " + (chi ? to_string(*chi) : std::string("none")) + "; A=1/20 violation at " + where;
  return finish(std::move(c));
}

// 6. Explicit bound with alpha = 1/8
inline CriterionResult alpha_bound_criterion(const VerifyOptions&) {
  CriterionResult c{6, "alpha = 1/8 bound dominates exact moments for k^3 <= N^2/20", false, {}, {}};
  const Rational alpha = make_rational(1, 8);
  long pairs = 0, violations = 0, equality_misses = 0;
  for (int N = 1; N <= 64; ++N) {
    for (int k = 0; 20L * k * k * k <= static_cast<long>(N) * N; ++k) {
      ++pairs;
      const Rational M = hz_moment(k, N), bound = alpha_bound(k, N, alpha);
      violations += M > bound;
      if (k == 1) equality_misses += M != bound;
    }
  }
  c.report.rows.push_back(row("alpha_bound_violations", std::to_string(violations), "0", verdict_of(violations == 0)));
  c.report.rows.push_back(
      row("alpha_bound_k=1_equality_misses", std::to_string(equality_misses), "0", verdict_of(equality_misses == 0)));
  c.detail = std::to_string(pairs) + " pairs checked";
  return finish(std::move(c));
}

// 7. Monte Carlo against the exact GUE moments
inline CriterionResult gue_mc_criterion(const VerifyOptions& opt) {
  CriterionResult c{7, "GUE Monte Carlo moments match exact values", false, {}, {}};
  const int N = 8;
  const std::size_t samples = opt.fast ? 20'000 : 200'000;
  const auto est = mc_moments(EnsembleSpec::gaussian(EnsembleKind::gue, N), 4, samples, seed_for(7));
  double worst = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const Rational exact = hz_moment(k, N);
    const auto& e = est.even[k];
    auto r = mc_row("M_2k_gue", e, 1.0, to_string(exact), verdict_of(within(e, exact.get_d())));
    r.k = k;
    r.N = N;
    c.report.rows.push_back(r);
    worst = std::max(worst, std::abs(e.mean - exact.get_d()) / e.std_error);
    c.report.plot.push_back({"gue_mc_moment_N8", static_cast<double>(k), e.mean, e.std_error});
  }
  std::ostringstream os;
  os << "max |z| = " << format_double(worst) << ", " << samples << " samples";
  c.detail = os.str();
  return finish(std::move(c));
}

// 8. First moments of the real symmetric and anti-symmetric ensembles
inline CriterionResult first_moment_criterion(const VerifyOptions& opt) {
  CriterionResult c{8, "GOE and anti-symmetric second moments at N = 16", false, {}, {}};
  const int N = 16;
  const std::size_t samples = opt.fast ? 20'000 : 200'000;
  for (auto kind : {EnsembleKind::goe, EnsembleKind::antisymmetric}) {
    const auto est = mc_moments(EnsembleSpec::gaussian(kind, N), 1, samples, seed_for(8));
    const Rational corr = kind == EnsembleKind::goe ? goe_correction(1) : antisym_correction(1);
    const Rational ref = wigner_moment(1) + corr / N;
    auto r = mc_row("M_2_" + to_string(kind), est.even[1], 1.0, to_string(ref),
                    verdict_of(within(est.even[1], ref.get_d())));
    r.k = 1;
    r.N = N;
    c.report.rows.push_back(r);
    if (!c.detail.empty()) c.detail += "; ";
    c.detail += to_string(kind) + " " + format_double(est.even[1].mean) + " vs " + to_string(ref);
  }
  return finish(std::move(c));
}

// 9. Leading covariance coefficients
inline CriterionResult covariance_criterion(const VerifyOptions& opt) {
  CriterionResult c{9, "N^2 D_4 matches the leading covariance coefficient at N = 8", false, {}, {}};
  const int N = 8, k = 2;
  const double n2 = static_cast<double>(N) * N;
  const std::size_t samples = opt.fast ? 10'000 : 1'000'000;
  std::ostringstream detail;
  for (auto kind : {EnsembleKind::gue, EnsembleKind::goe, EnsembleKind::antisymmetric}) {
    const auto e = mc_covariance(EnsembleSpec::gaussian(kind, N), k, samples, seed_for(9));
    const Rational ref = cov_leading(kind, k);
    const bool ok = std::abs(n2 * e.mean - ref.get_d()) <= 4.0 * n2 * e.std_error + 0.05;
    auto r = mc_row("N2_D4_" + to_string(kind), e, n2, to_string(ref), verdict_of(ok));
    r.k = k;
    r.N = N;
    c.report.rows.push_back(r);
    detail << to_string(kind) << " " << format_double(n2 * e.mean) << " vs " << to_string(ref) << "; ";
  }
  const auto zero = mc_covariance(EnsembleSpec::gaussian(EnsembleKind::antisymmetric, N), 1, samples, seed_for(9));
  auto r = mc_row("D2_antisym_exact_zero", zero, 1.0, "0", verdict_of(zero.mean == 0.0 && zero.std_error == 0.0));
  r.k = 1;
  r.N = N;
  c.report.rows.push_back(r);
  c.detail = detail.str() + "antisym k=1 " + format_double(zero.mean);
  return finish(std::move(c));
}

// 10. Integration-by-parts identity
inline CriterionResult ibp_criterion(const VerifyOptions& opt) {
  CriterionResult c{10, "Gaussian integration-by-parts identity", false, {}, {}};
  const int N = 8;
  const std::size_t samples = opt.fast ? 20'000 : 200'000;
  int agreeing = 0, total = 0;
  for (auto kind : {EnsembleKind::antisymmetric, EnsembleKind::gue, EnsembleKind::goe}) {
    for (auto [x, y] : {std::pair{1, 1}, std::pair{1, 2}}) {
      for (int l = 1; l <= 3; ++l) {
        const auto res = ibp_check(EnsembleSpec::gaussian(kind, N), x, y, l, samples, seed_for(10));
        const bool ok = res.agrees();
        ++total;
        agreeing += ok;
        const std::string tag = "ibp_" + to_string(kind) + "_x" + std::to_string(x) + "_y" + std::to_string(y) +
                                "_l" + std::to_string(l);
        for (int part = 0; part < 2; ++part) {
          const auto& left = part == 0 ? res.left.re : res.left.im;
          const auto& right = part == 0 ? res.right.re : res.right.im;
          ReportRow r;
          r.quantity = tag + (part == 0 ? "_re" : "_im");
          r.k = l;
          r.N = N;
          r.value = format_double(left.mean);
          r.std_error = format_double(std::hypot(left.std_error, right.std_error));
          r.reference = format_double(right.mean);
          r.verdict = verdict_of(std::abs(left.mean - right.mean) <= 4.0 * std::hypot(left.std_error, right.std_error));
          c.report.rows.push_back(r);
        }
      }
    }
  }
  c.detail = std::to_string(agreeing) + "/" + std::to_string(total) + " cases agree";
  return finish(std::move(c));
}

// 11. Band moments below the explicit envelope
inline CriterionResult band_moment_criterion(const VerifyOptions& opt) {
  CriterionResult c{11, "band moments below the explicit band envelope", false, {}, {}};
  const int N = 256, b = 32;
  const std::size_t samples = opt.fast ? 1'000 : 20'000;
  const auto spec = EnsembleSpec::band(N, b);
  const Rational u1 = *u_hat1(spec.profile, b).exact;
  const Rational u = std::max(u1, make_rational(1, 8));
  const auto est = mc_moments(spec, 3, samples, seed_for(11));
  for (int k = 1; k <= 3; ++k) {
    const Rational bound = (1 + make_rational(1, 8) * u * make_rational(static_cast<long>(k + 1) * (k + 1) * (k + 1),
                                                                       static_cast<long>(b) * b)) *
                           band_limit_moment(k, u1);
    const auto& e = est.even[k];
    auto r = mc_row("M_2k_band", e, 1.0, to_string(bound), verdict_of(e.mean <= bound.get_d() + 4.0 * e.std_error));
    r.k = k;
    r.N = N;
    r.b = b;
    c.report.rows.push_back(r);
    if (!c.detail.empty()) c.detail += "; ";
    c.detail += "k=" + std::to_string(k) + " " + format_double(e.mean) + " vs " + format_double(bound.get_d());
  }
  auto r = row("u_hat1_indicator", to_string(u1), "1/1", verdict_of(u1 == 1));
  r.b = b;
  c.report.rows.push_back(r);
  return finish(std::move(c));
}

// 12. Spectral norm trend in the band width
inline CriterionResult band_norm_criterion(const VerifyOptions& opt) {
  CriterionResult c{12, "median band norm decreases with b and stays below 1.5", false, {}, {}};
  const int N = opt.fast ? 128 : 512;
  const std::vector<int> widths = opt.fast ? std::vector<int>{8, 32} : std::vector<int>{16, 64};
  std::vector<double> medians;
  std::ostringstream detail;
  for (int b : widths) {
    const auto tail = norm_tail(EnsembleSpec::band(N, b), 0.5, 20, seed_for(12));
    const double median = tail.median();
    const double largest = *std::max_element(tail.norms.begin(), tail.norms.end());
    medians.push_back(median);
    auto m = row("lambda_max_median", format_double(median), "", Verdict::info);
    m.N = N;
    m.b = b;
    c.report.rows.push_back(m);
    auto mx = row("lambda_max_largest", format_double(largest), "< 1.5", verdict_of(largest < 1.5));
    mx.N = N;
    mx.b = b;
    c.report.rows.push_back(mx);
    c.report.plot.push_back({"band_lambda_max_median_N" + std::to_string(N), static_cast<double>(b), median, 0.0});
    if (b != widths.front()) detail << "; ";
    detail << "b=" << b << " median " << format_double(median) << " max " << format_double(largest);
  }
  c.report.rows.push_back(row("median_decreases_in_b", format_double(medians[1]), "< " + format_double(medians[0]),
                              verdict_of(medians[1] < medians[0])));
  c.detail = detail.str();
  return finish(std::move(c));
}

}  // namespace verify

inline CriterionResult run_criterion(int id, const VerifyOptions& opt = {}) {
  switch (id) {
    case 1: return verify::classic_bound_check(opt);
    case 2: return verify::correction_coefficient_check(opt);
    case 3: return verify::coefficient_identity_check(opt);
    case 4: return verify::dominance_criterion(opt);
    case 5: return verify::envelope_criterion(opt);
    case 6: return verify::alpha_bound_criterion(opt);
    case 7: return verify::gue_mc_criterion(opt);
    case 8: return verify::first_moment_criterion(opt);
    case 9: return verify::covariance_criterion(opt);
    case 10: return verify::ibp_criterion(opt);
    case 11: return verify::band_moment_criterion(opt);
    case 12: return verify::band_norm_criterion(opt);
    default: throw std::invalid_argument("no criterion " + std::to_string(id));
  }
}

/// Every criterion in order; rows are prefixed with "c<id>/" and followed by
/// one summary row per criterion.
inline Report verify_all(const VerifyOptions& opt = {}) {
  Report report{opt.fast ? "verify-all --fast" : "verify-all", {}, {}};
  for (int id = 1; id <= kCriterionCount; ++id) {
    CriterionResult c = run_criterion(id, opt);
    const std::string prefix = "c" + std::to_string(id) + "/";
    for (auto& r : c.report.rows) r.quantity = prefix + r.quantity;
    report.append(c.report);
    report.rows.push_back(verify::row(prefix + "criterion", c.passed ? "pass" : "fail", "pass", verdict_of(c.passed)));
  }
  return report;
}

}  // namespace rmt
