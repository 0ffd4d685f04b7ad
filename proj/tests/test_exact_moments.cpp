#include <gtest/gtest.h>

#include <thread>
#include <vector>

#include "oracles.hpp"
#include "rmt/exact_moments.hpp"

using rmt::EnsembleKind;
using rmt::make_rational;
using rmt::Rational;

TEST(HzMomentPoly, Examples) {
  EXPECT_EQ(rmt::hz_moment_poly(1).coeffs, std::vector<Rational>{make_rational(1, 4)});
  EXPECT_EQ(rmt::hz_moment_poly(2).coeffs, (std::vector<Rational>{make_rational(1, 8), make_rational(1, 16)}));
  EXPECT_EQ(rmt::hz_moment_poly(3).coeffs, (std::vector<Rational>{make_rational(5, 64), make_rational(5, 32)}));
}

TEST(HzMoment, Examples) {
  EXPECT_EQ(rmt::hz_moment(2, 2), make_rational(9, 64));
  EXPECT_EQ(rmt::hz_moment(0, 17), 1);
  EXPECT_EQ(rmt::hz_moment(1, 1), make_rational(1, 4));
  EXPECT_THROW(rmt::hz_moment(2, 0), std::invalid_argument);
  EXPECT_THROW(rmt::hz_moment_poly(-1), std::invalid_argument);
}

TEST(HzMoment, MatchesWickPairingEnumeration) {
  for (int k = 0; k <= 6; ++k) {
    const auto poly = rmt::hz_moment_poly(k);
    for (int g = 0; g <= k; ++g) EXPECT_EQ(poly.coeff(g), oracle::wick_poly_coeff(k, g)) << "k=" << k << " g=" << g;
    for (int N : {1, 2, 3, 8}) EXPECT_EQ(rmt::hz_moment(k, N), oracle::wick_moment(k, N)) << "k=" << k;
  }
}

TEST(HzMoment, MatchesUnitVarianceThreeTermRecurrence) {
  for (int N : {1, 2, 5, 16, 64})
    for (int k = 0; k <= 40; ++k) EXPECT_EQ(rmt::hz_moment(k, N), oracle::three_term_moment(k, N)) << k << "," << N;
}

TEST(HzMoment, PolynomialAndScalarPathsAgree) {
  for (int N : {1, 3, 8, 32})
    for (int k = 0; k <= 60; ++k) EXPECT_EQ(rmt::hz_moment(k, N), rmt::hz_moment_direct(k, N));
}

TEST(HzMomentPoly, StructuralProperties) {
  for (int k = 0; k <= 50; ++k) {
    const auto poly = rmt::hz_moment_poly(k);
    EXPECT_LE(poly.degree(), k / 2) << "k=" << k;
    EXPECT_EQ(poly.coeff(0), rmt::wigner_moment(k));
    EXPECT_EQ(poly.coeff(1), rmt::gue_correction(k));
    for (const auto& c : poly.coeffs) EXPECT_GE(c, 0);
  }
}

TEST(HzMomentPoly, ConcurrentReadersSeeTheSameValues) {
  std::vector<std::vector<Rational>> seen(8);
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t)
    pool.emplace_back([&, t] {
      for (int k = 80 - t; k >= 0; --k) seen[t].push_back(rmt::hz_moment(k, 7));
    });
  for (auto& th : pool) th.join();
  for (int t = 0; t < 8; ++t)
    for (int k = 80 - t, i = 0; k >= 0; --k, ++i) EXPECT_EQ(seen[t][i], rmt::hz_moment_direct(k, 7));
}

TEST(GueCorrection, Examples) {
  EXPECT_EQ(rmt::gue_correction(0), 0);
  EXPECT_EQ(rmt::gue_correction(1), 0);
  EXPECT_EQ(rmt::gue_correction(2), make_rational(1, 16));
  EXPECT_EQ(rmt::gue_correction(3), make_rational(5, 32));
}

TEST(GueCorrection, RecursionAndGeneratingFunctionForm) {
  for (int k = 2; k <= 50; ++k) {
    EXPECT_EQ(rmt::gue_correction(k), rmt::coeff_half_integer(2, k - 2) / 16) << "k=" << k;
    EXPECT_EQ(rmt::gue_correction(k), make_rational(2 * k - 1, 2 * k + 2) * rmt::gue_correction(k - 1) +
                                          make_rational(static_cast<long>(k) * (k - 1), 4) * rmt::wigner_moment(k));
  }
}

TEST(GoeCorrection, Examples) {
  EXPECT_EQ(rmt::goe_correction(1), make_rational(1, 4));
  EXPECT_EQ(rmt::goe_correction(2), make_rational(5, 16));
  EXPECT_LT(make_rational(1, 2) - rmt::goe_correction(200), make_rational(1, 10));
}

TEST(AntisymCorrection, Examples) {
  EXPECT_EQ(rmt::antisym_correction(0), 0);
  EXPECT_EQ(rmt::antisym_correction(1), make_rational(-1, 4));
  EXPECT_EQ(rmt::antisym_correction(2), make_rational(-3, 16));
}

TEST(CovLeading, Examples) {
  EXPECT_EQ(rmt::cov_leading(EnsembleKind::gue, 1), make_rational(1, 4));
  EXPECT_EQ(rmt::cov_leading(EnsembleKind::gue, 2), make_rational(1, 2));
  EXPECT_EQ(rmt::cov_leading(EnsembleKind::goe, 2), 1);
  EXPECT_EQ(rmt::cov_leading(EnsembleKind::antisymmetric, 2), make_rational(3, 4));
  EXPECT_THROW(rmt::cov_leading(EnsembleKind::band, 2), std::invalid_argument);
  EXPECT_THROW(rmt::cov_leading(EnsembleKind::gue, 0), std::invalid_argument);
}

TEST(CovLeading, AntisymmetricFirstIndexIsFlagged) {
  EXPECT_TRUE(rmt::cov_leading_is_anomalous(EnsembleKind::antisymmetric, 1));
  EXPECT_FALSE(rmt::cov_leading_is_anomalous(EnsembleKind::antisymmetric, 2));
  EXPECT_FALSE(rmt::cov_leading_is_anomalous(EnsembleKind::gue, 1));
}

TEST(CovLeadingHigher, Examples) {
  EXPECT_EQ(rmt::cov_leading_higher(1, 1), make_rational(1, 4));
  EXPECT_EQ(rmt::cov_leading_higher(1, 3), make_rational(3, 4));
  EXPECT_EQ(rmt::cov_leading_higher(2, 2), make_rational(3, 16));
  EXPECT_EQ(rmt::cov_leading_higher(3, 2), 0);
  for (int k = 1; k <= 20; ++k) EXPECT_EQ(rmt::cov_leading_higher(1, k), rmt::cov_leading(EnsembleKind::gue, k));
}

TEST(BandLimitMoment, Examples) {
  EXPECT_EQ(rmt::band_limit_moment(3, 1), make_rational(5, 64));
  EXPECT_EQ(rmt::band_limit_moment(1, make_rational(1, 2)), make_rational(1, 8));
  EXPECT_EQ(rmt::band_limit_moment(0, make_rational(7, 3)), 1);
  EXPECT_THROW(rmt::band_limit_moment(2, 0), std::invalid_argument);
}

TEST(IndicatorProfileMass, EvenAndOddWidths) {
  for (int b = 2; b <= 64; b += 2) EXPECT_EQ(rmt::indicator_u_hat1(b), 1);
  for (int b = 1; b <= 63; b += 2) EXPECT_EQ(rmt::indicator_u_hat1(b), make_rational(b + 1, b));
}

TEST(ClassicBound, Examples) {
  EXPECT_EQ(rmt::classic_bound(0, 3), 1);
  EXPECT_EQ(rmt::classic_bound(1, 1), make_rational(81, 256));
  EXPECT_EQ(rmt::classic_bound(2, 2), rmt::pow(make_rational(9, 8), 4) * make_rational(1, 8));
  EXPECT_GE(rmt::classic_bound(2, 2), rmt::hz_moment(2, 2));
}

TEST(ClassicBound, DominatesExactMoments) {
  for (int N : {1, 2, 4, 8, 16, 32, 64})
    for (int k = 0; k <= 100; k += 3) EXPECT_LE(rmt::hz_moment(k, N), rmt::classic_bound(k, N)) << k << "," << N;
}

TEST(AlphaBound, Examples) {
  EXPECT_EQ(rmt::alpha_bound(1, 9, make_rational(1, 8)), make_rational(1, 4));
  EXPECT_EQ(rmt::alpha_bound(2, 4, make_rational(1, 8)), make_rational(67, 512));
  EXPECT_EQ(rmt::alpha_bound(0, 4, make_rational(1, 8)), 1);
  EXPECT_THROW(rmt::alpha_bound(2, 4, make_rational(1, 12)), std::invalid_argument);
}
