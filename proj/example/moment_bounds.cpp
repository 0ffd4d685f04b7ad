// Exact GUE moments at N = 16 next to the triangular-scheme majorants and the
// two explicit bounds, followed by a short Monte Carlo cross-check.

#include <cstdio>

#include "rmt/bound_engine.hpp"
#include "rmt/estimators.hpp"
#include "rmt/exact_moments.hpp"

int main() {
  const int N = 16;
  const int k_max = 6;
  const auto grid = rmt::run_scheme(rmt::SchemeVariant::gue, rmt::SchemeParams::gue(N, k_max));
  const rmt::Rational alpha = rmt::make_rational(1, 8);

  std::printf("%3s %14s %14s %14s %14s\n", "k", "M_2k", "B_k", "alpha=1/8", "classic");
  for (int k = 0; k <= k_max; ++k) {
    std::printf("%3d %14.10f %14.10f %14.10f %14.10f\n", k, rmt::hz_moment(k, N).get_d(), grid.B(k).get_d(),
                rmt::alpha_bound(k, N, alpha).get_d(), rmt::classic_bound(k, N).get_d());
  }

  const auto est = rmt::mc_moments(rmt::EnsembleSpec::gaussian(rmt::EnsembleKind::gue, N), 3, 20'000, 7);
  std::printf("\nMonte Carlo, 20000 draws\n");
  for (int k = 1; k <= 3; ++k)
    std::printf("k=%d  %.6f +- %.6f  (exact %.6f)\n", k, est.even[k].mean, est.even[k].std_error,
                rmt::hz_moment(k, N).get_d());
  return 0;
}
