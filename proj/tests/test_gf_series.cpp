#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "rmt/gf_series.hpp"

using rmt::make_rational;
using rmt::Rational;

TEST(Rational, CanonicalFormAndRoundTrip) {
  EXPECT_EQ(rmt::to_string(make_rational(6, -8)), "-3/4");
  EXPECT_EQ(rmt::to_string(Rational(5)), "5/1");
  EXPECT_EQ(rmt::parse_rational("10/4"), make_rational(5, 2));
  EXPECT_EQ(rmt::parse_rational("0.125"), make_rational(1, 8));
  EXPECT_EQ(rmt::parse_rational("-1e-3"), make_rational(-1, 1000));
  EXPECT_EQ(rmt::parse_rational("2.5e2"), Rational(250));
  EXPECT_EQ(rmt::parse_rational("7"), Rational(7));
  EXPECT_THROW(rmt::parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(rmt::parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(rmt::parse_rational(""), std::invalid_argument);
  EXPECT_THROW(make_rational(1, 0), std::invalid_argument);
}

TEST(Catalan, Examples) {
  EXPECT_EQ(rmt::catalan(0), 1);
  EXPECT_EQ(rmt::catalan(3), 5);
  EXPECT_EQ(rmt::catalan(4), 14);
}

TEST(Catalan, MatchesDyckWordCount) {
  for (int k = 0; k <= 10; ++k) EXPECT_EQ(rmt::catalan(k), Rational(oracle::dyck_count(k))) << "k=" << k;
}

TEST(WignerMoment, Examples) {
  for (auto route : {rmt::MomentRoute::closed_form, rmt::MomentRoute::linear_recurrence, rmt::MomentRoute::convolution}) {
    EXPECT_EQ(rmt::wigner_moment(0, route), 1);
    EXPECT_EQ(rmt::wigner_moment(1, route), make_rational(1, 4));
    EXPECT_EQ(rmt::wigner_moment(3, route), make_rational(5, 64));
  }
}

TEST(WignerMoment, ThreeRoutesAgreeUpTo200) {
  const auto a = rmt::wigner_moments(200, rmt::MomentRoute::closed_form);
  const auto b = rmt::wigner_moments(200, rmt::MomentRoute::linear_recurrence);
  const auto c = rmt::wigner_moments(200, rmt::MomentRoute::convolution);
  for (int k = 0; k <= 200; ++k) {
    EXPECT_EQ(a[k], b[k]) << "k=" << k;
    EXPECT_EQ(a[k], c[k]) << "k=" << k;
  }
}

TEST(WignerMoment, StrictlyDecreasingAndAtMostOne) {
  const auto m = rmt::wigner_moments(200);
  for (int k = 1; k <= 200; ++k) {
    EXPECT_LE(m[k], 1);
    if (k >= 2) EXPECT_LT(m[k], m[k - 1]) << "k=" << k;
  }
}

TEST(WignerMoment, RejectsNegativeIndex) { EXPECT_THROW(rmt::wigner_moment(-1), std::invalid_argument); }

TEST(CoeffHalfInteger, Examples) {
  EXPECT_EQ(rmt::coeff_half_integer(1, 0), 1);
  EXPECT_EQ(rmt::coeff_half_integer(1, 1), make_rational(3, 2));
  EXPECT_EQ(rmt::coeff_half_integer(2, 1), make_rational(5, 2));
}

TEST(CoeffHalfInteger, MatchesSeriesExpansion) {
  for (int r = 0; r <= 6; ++r) {
    const auto series = oracle::half_integer_series(r, 50);
    for (int k = 0; k <= 50; ++k) {
      EXPECT_EQ(rmt::coeff_half_integer(r, k), series[k]) << "r=" << r << " k=" << k;
      EXPECT_EQ(rmt::generalized_binomial_coeff(make_rational(2 * r + 1, 2), k), series[k]);
      if (r >= 1) EXPECT_EQ(rmt::coeff_half_integer_catalan_form(r, k), series[k]) << "r=" << r << " k=" << k;
    }
  }
}

TEST(CoeffHalfInteger, MomentForms) {
  for (int k = 0; k <= 50; ++k) {
    const Rational m = rmt::wigner_moment(k);
    EXPECT_EQ(rmt::coeff_half_integer(1, k), make_rational((2L * k + 2) * (2L * k + 1), 2) * m);
    EXPECT_EQ(rmt::coeff_half_integer(2, k), make_rational((2L * k + 1) * (2L * k + 2) * (2L * k + 3), 6) * m);
  }
}

TEST(CoeffHalfInteger, LargeIndexStaysExact) {
  const Rational v = rmt::coeff_half_integer(3, 200);
  EXPECT_EQ(v, rmt::generalized_binomial_coeff(make_rational(7, 2), 200));
}

TEST(CoeffInteger, Examples) {
  EXPECT_EQ(rmt::coeff_integer(0, 7), 1);
  EXPECT_EQ(rmt::coeff_integer(1, 3), 4);
  EXPECT_EQ(rmt::coeff_integer(2, 2), 6);
}

TEST(CoeffInteger, MatchesSeriesExpansion) {
  for (int l = 0; l <= 6; ++l) {
    const auto series = oracle::integer_series(l, 50);
    for (int k = 0; k <= 50; ++k) EXPECT_EQ(rmt::coeff_integer(l, k), series[k]) << "l=" << l << " k=" << k;
  }
}

TEST(Convolve, Examples) {
  const auto ones = rmt::SeriesCoefficients::constant(1, 6);
  EXPECT_EQ(rmt::convolve(ones, ones, 4), 5);
  const rmt::SeriesCoefficients m(rmt::wigner_moments(6));
  EXPECT_EQ(rmt::convolve(m, m, 1), make_rational(1, 2));
  const auto zero = rmt::SeriesCoefficients::constant(0, 6);
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(rmt::convolve(m, zero, k), 0);
}

TEST(Convolve, OutOfRangeIsAnError) {
  const auto a = rmt::SeriesCoefficients::constant(1, 3);
  const auto b = rmt::SeriesCoefficients::constant(1, 5);
  EXPECT_NO_THROW(rmt::convolve(a, b, 3));
  EXPECT_THROW(rmt::convolve(a, b, 4), std::out_of_range);
}

TEST(Convolve, CommutativeAndBilinear) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 20);
  auto random_series = [&](int k_max) {
    std::vector<Rational> c;
    for (int k = 0; k <= k_max; ++k) c.push_back(make_rational(num(gen), den(gen)));
    return rmt::SeriesCoefficients(c);
  };
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_series(12), b = random_series(12), c = random_series(12);
    const Rational s = make_rational(num(gen), den(gen));
    std::vector<Rational> combo;
    for (int k = 0; k <= 12; ++k) combo.push_back(s * a[k] + b[k]);
    const rmt::SeriesCoefficients ab(combo);
    for (int k = 0; k <= 12; ++k) {
      EXPECT_EQ(rmt::convolve(a, b, k), rmt::convolve(b, a, k));
      EXPECT_EQ(rmt::convolve(ab, c, k), s * rmt::convolve(a, c, k) + rmt::convolve(b, c, k));
    }
  }
}

TEST(PhiCoeff, Examples) {
  const Rational A = make_rational(3, 7);
  const int N = 5;
  EXPECT_EQ(rmt::phi_coeff(N, A, 0), 1);
  EXPECT_EQ(rmt::phi_coeff(N, A, 1), make_rational(1, 4));
  EXPECT_EQ(rmt::phi_coeff(N, A, 2), make_rational(1, 8) + A / (N * N));
  EXPECT_EQ(rmt::phi_coeff(N, A, 3), make_rational(5, 64) + 5 * A / (2 * N * N));
  EXPECT_THROW(rmt::phi_coeff(0, A, 2), std::invalid_argument);
}
