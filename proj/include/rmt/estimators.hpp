#pragma once

// Monte Carlo estimators over seeded draws: normalized traces, moments,
// covariance and third-cumulant sums, the integration-by-parts identity and
// spectral norms. Draws are processed in parallel into per-sample slots and
// reduced sequentially, so results are identical for any worker count.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmt/ensembles.hpp"
#include "rmt/parallel.hpp"

namespace rmt {

/// L_a = (1/N) Tr H^a for a = 0..a_max.
using TraceVector = std::vector<double>;

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace stats {

inline double mean(const std::vector<double>& xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

/// Sample mean with std_error = sample sd / sqrt(n).
inline MCEstimate summarize(const std::vector<double>& xs, std::uint64_t seed) {
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("at least two samples are needed for a standard error");
  const double m = mean(xs);
  CompensatedSum ss;
  for (double x : xs) ss.add((x - m) * (x - m));
  const double var = ss.value() / static_cast<double>(n - 1);
  return {m, std::sqrt(var / static_cast<double>(n)), n, seed};
}

/// Unbiased sum over index tuples of centered co-moments: order 2 uses
/// 1/(n-1), order 3 uses n/((n-1)(n-2)).
inline double co_moment(const std::vector<const std::vector<double>*>& series, std::size_t begin, std::size_t end) {
  const std::size_t n = end - begin;
  std::vector<double> means;
  for (const auto* s : series) {
    CompensatedSum acc;
    for (std::size_t i = begin; i < end; ++i) acc.add((*s)[i]);
    means.push_back(acc.value() / static_cast<double>(n));
  }
  CompensatedSum acc;
  for (std::size_t i = begin; i < end; ++i) {
    double prod = 1.0;
    for (std::size_t j = 0; j < series.size(); ++j) prod *= (*series[j])[i] - means[j];
    acc.add(prod);
  }
  const double dn = static_cast<double>(n);
  if (series.size() == 2) return acc.value() / (dn - 1.0);
  if (series.size() == 3) return acc.value() * dn / ((dn - 1.0) * (dn - 2.0));
  throw std::invalid_argument("co-moments of order 2 or 3 only");
}

}  // namespace stats

namespace detail {

/// C = A * B where A has bandwidth wa and B has bandwidth wb; the product has
/// bandwidth wa + wb. Falls back to a dense product once the band fills out.
inline Eigen::MatrixXcd banded_product(const Eigen::MatrixXcd& A, int wa, const Eigen::MatrixXcd& B, int wb) {
  const int N = static_cast<int>(A.rows());
  if (wa + wb >= N - 1 || 4L * (wa + 1) * (wb + 1) > static_cast<long>(N) * N) return A * B;
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(N, N);
  for (int y = 0; y < N; ++y) {
    const int z_lo = std::max(0, y - wb), z_hi = std::min(N - 1, y + wb);
    for (int z = z_lo; z <= z_hi; ++z) {
      const std::complex<double> b = B(z, y);
      if (b == 0.0) continue;
      const int x_lo = std::max(0, z - wa), x_hi = std::min(N - 1, z + wa);
      for (int x = x_lo; x <= x_hi; ++x) C(x, y) += A(x, z) * b;
    }
  }
  return C;
}

/// H^0..H^p with their bandwidths.
inline std::vector<Eigen::MatrixXcd> matrix_powers(const HermitianMatrix& H, int p, std::vector<int>& widths) {
  const int N = H.dim();
  std::vector<Eigen::MatrixXcd> P;
  P.reserve(static_cast<std::size_t>(p) + 1);
  P.push_back(Eigen::MatrixXcd::Identity(N, N));
  widths.assign(1, 0);
  for (int j = 1; j <= p; ++j) {
    P.push_back(j == 1 ? H.data : banded_product(P.back(), widths.back(), H.data, H.bandwidth));
    widths.push_back(std::min(N - 1, widths.back() + H.bandwidth));
  }
  return P;
}

}  // namespace detail

/// L_a for a <= a_max, with Tr H^a = sum_xy (H^i)_xy conj((H^j)_xy), i + j = a.
/// Throws if an imaginary residue exceeds 1e-10 max(1, ||H||_F)^a.
inline TraceVector trace_powers(const HermitianMatrix& H, int a_max) {
  if (a_max < 1) throw std::invalid_argument("a_max must be >= 1");
  const int N = H.dim();
  std::vector<int> widths;
  const auto P = detail::matrix_powers(H, (a_max + 1) / 2, widths);
  const double frob = std::max(1.0, H.data.norm());
  TraceVector L(static_cast<std::size_t>(a_max) + 1);
  L[0] = 1.0;
  for (int a = 1; a <= a_max; ++a) {
    const auto& Pi = P[a / 2];
    const auto& Pj = P[(a + 1) / 2];
    const int w = std::min(widths[a / 2], widths[(a + 1) / 2]);
    std::complex<double> tr = 0.0;
    for (int y = 0; y < N; ++y) {
      const int x_lo = std::max(0, y - w), x_hi = std::min(N - 1, y + w);
      for (int x = x_lo; x <= x_hi; ++x) tr += Pi(x, y) * std::conj(Pj(x, y));
    }
    if (std::abs(tr.imag()) / N > 1e-10 * std::pow(frob, a))
      throw std::runtime_error("trace of a Hermitian power has a non-negligible imaginary part");
    L[a] = tr.real() / N;
  }
  return L;
}

inline void require_samples(std::size_t samples, std::size_t minimum, const char* what) {
  if (samples < minimum)
    throw std::invalid_argument(std::string(what) + " needs at least " + std::to_string(minimum) + " samples");
}

/// Trace vectors of draws 0..samples-1, one slot per draw.
inline std::vector<TraceVector> sample_traces(const EnsembleSpec& spec, int a_max, std::size_t samples,
                                              std::uint64_t seed) {
  std::vector<TraceVector> out(samples);
  parallel_for(samples, [&](std::size_t i) { out[i] = trace_powers(sample(spec, seed, i), a_max); });
  return out;
}

inline std::vector<double> column(const std::vector<TraceVector>& traces, int a) {
  std::vector<double> c(traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i) c[i] = traces[i][static_cast<std::size_t>(a)];
  return c;
}

struct MomentEstimates {
  std::vector<MCEstimate> even;  // index k: M_2k, k = 0..k_max
  std::vector<MCEstimate> odd;   // index k: E L_{2k+1}, k = 0..k_max-1
};

inline MomentEstimates mc_moments(const EnsembleSpec& spec, int k_max, std::size_t samples, std::uint64_t seed) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  require_samples(samples, 100, "mc_moments");
  const auto traces = sample_traces(spec, 2 * k_max, samples, seed);
  MomentEstimates est;
  for (int a = 0; a <= 2 * k_max; ++a) {
    MCEstimate e = stats::summarize(column(traces, a), seed);
    (a % 2 == 0 ? est.even : est.odd).push_back(e);
  }
  return est;
}

namespace detail {

/// Estimate of sum over compositions of `total` into `parts` positive parts of
/// the centered co-moment, with a batch-means standard error.
inline MCEstimate composition_sum(const std::vector<TraceVector>& traces, int total, int parts, std::uint64_t seed,
                                  std::size_t batches = 100) {
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(total) + 1);
  for (int a = 1; a <= total; ++a) cols[a] = column(traces, a);
  std::vector<std::vector<int>> compositions;
  if (parts == 2)
    for (int a = 1; a < total; ++a) compositions.push_back({a, total - a});
  else
    for (int a = 1; a < total; ++a)
      for (int b = 1; a + b < total; ++b) compositions.push_back({a, b, total - a - b});

  auto estimate = [&](std::size_t begin, std::size_t end) {
    CompensatedSum acc;
    for (const auto& c : compositions) {
      std::vector<const std::vector<double>*> series;
      for (int a : c) series.push_back(&cols[a]);
      acc.add(stats::co_moment(series, begin, end));
    }
    return acc.value();
  };

  const std::size_t n = traces.size();
  MCEstimate out{0.0, 0.0, n, seed};
  if (compositions.empty()) return out;
  out.mean = estimate(0, n);
  std::vector<double> batch_values;
  for (std::size_t b = 0; b < batches; ++b) batch_values.push_back(estimate(b * n / batches, (b + 1) * n / batches));
  out.std_error = stats::summarize(batch_values, seed).std_error;
  return out;
}

}  // namespace detail

/// D^(2)_2k = sum_{a1 + a2 = 2k} Cov(L_a1, L_a2).
inline MCEstimate mc_covariance(const EnsembleSpec& spec, int k, std::size_t samples, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  require_samples(samples, 10'000, "mc_covariance");
  return detail::composition_sum(sample_traces(spec, 2 * k, samples, seed), 2 * k, 2, seed);
}

/// D^(3)_total = sum_{a1 + a2 + a3 = total} E[L°_a1 L°_a2 L°_a3]; total is 2k for
/// the even case, odd totals are accepted for the vanishing check.
inline MCEstimate mc_third_cumulant_total(const EnsembleSpec& spec, int total, std::size_t samples,
                                          std::uint64_t seed) {
  if (total < 1) throw std::invalid_argument("total degree must be >= 1");
  require_samples(samples, 100'000, "mc_third_cumulant");
  if (total < 3) return {0.0, 0.0, samples, seed};
  return detail::composition_sum(sample_traces(spec, total, samples, seed), total, 3, seed);
}

inline MCEstimate mc_third_cumulant(const EnsembleSpec& spec, int k, std::size_t samples, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  return mc_third_cumulant_total(spec, 2 * k, samples, seed);
}

struct ComplexEstimate {
  MCEstimate re;
  MCEstimate im;
};

struct IbpResult {
  ComplexEstimate left;   // E H_xy Tr H^l
  ComplexEstimate right;  // l/(4N) E (H^(l-1))_xy + eta l/(4N) E (H^(l-1))_yx

  /// Componentwise agreement within `sigmas` combined standard errors.
  bool agrees(double sigmas = 4.0) const {
    auto close = [&](const MCEstimate& a, const MCEstimate& b) {
      return std::abs(a.mean - b.mean) <= sigmas * std::hypot(a.std_error, b.std_error);
    };
    return close(left.re, right.re) && close(left.im, right.im);
  }
};

/// x and y are 1-based.
inline IbpResult ibp_check(const EnsembleSpec& spec, int x, int y, int l, std::size_t samples, std::uint64_t seed) {
  if (spec.kind == EnsembleKind::band) throw std::invalid_argument("ibp_check covers the Gaussian family only");
  if (x < 1 || y < 1 || x > spec.N || y > spec.N) throw std::invalid_argument("x and y must lie in 1..N");
  if (l < 1) throw std::invalid_argument("l must be >= 1");
  require_samples(samples, 2, "ibp_check");
  const int N = spec.N;
  const int eta = spec.eta();
  const double weight = static_cast<double>(l) / (4.0 * N);
  std::vector<std::complex<double>> lhs(samples), rhs(samples);
  parallel_for(samples, [&](std::size_t i) {
    const HermitianMatrix H = sample(spec, seed, i);
    std::vector<int> widths;
    const auto P = detail::matrix_powers(H, l, widths);
    const double trace = P[l].trace().real();
    lhs[i] = H.data(x - 1, y - 1) * trace;
    rhs[i] = weight * (P[l - 1](x - 1, y - 1) + static_cast<double>(eta) * P[l - 1](y - 1, x - 1));
  });
  auto split = [&](const std::vector<std::complex<double>>& v) {
    std::vector<double> re(v.size()), im(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      re[i] = v[i].real();
      im[i] = v[i].imag();
    }
    return ComplexEstimate{stats::summarize(re, seed), stats::summarize(im, seed)};
  };
  return {split(lhs), split(rhs)};
}

// ---------------------------------------------------------------------------
// Spectral norm

enum class NormMethod { automatic, dense, lanczos };

struct LanczosOptions {
  double tol = 1e-6;
  int max_iterations = 10'000;
};

/// max |eigenvalue| by Lanczos with full reorthogonalization. Converged when
/// the residual estimate of the extreme Ritz pair falls below tol |theta|.
inline double lanczos_norm(const Eigen::MatrixXcd& H, const LanczosOptions& opt = {}) {
  const int N = static_cast<int>(H.rows());
  if (N == 0) return 0.0;
  const int cap = std::min(opt.max_iterations, N);
  std::vector<Eigen::VectorXcd> Q;
  std::vector<double> alpha, beta;
  Eigen::VectorXcd q(N);
  for (int i = 0; i < N; ++i) q[i] = 1.0 + 0.5 * std::sin(1.0 + i);  // deterministic start
  q.normalize();
  Q.push_back(q);
  for (int m = 1; m <= cap; ++m) {
    Eigen::VectorXcd w = H * Q.back();
    alpha.push_back(Q.back().dot(w).real());
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& v : Q) w -= v * v.dot(w);
    const double b = w.norm();

    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub(std::max(0, m - 1));
    for (int i = 0; i + 1 < m; ++i) sub[i] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const auto& theta = tri.eigenvalues();
    const int idx = std::abs(theta[0]) >= std::abs(theta[m - 1]) ? 0 : m - 1;
    const double value = std::abs(theta[idx]);
    const double residual = b * std::abs(tri.eigenvectors()(m - 1, idx));
    const bool converged = residual <= opt.tol * value;
    const bool exhausted = b <= 1e-14 * std::max(value, 1.0) || m == N;  // Krylov space is invariant
    if (converged || exhausted) return value;
    beta.push_back(b);
    Q.push_back(w / b);
  }
  throw std::runtime_error("Lanczos did not converge within " + std::to_string(cap) + " iterations");
}

inline double spectral_norm(const HermitianMatrix& H, double tol = 1e-6, NormMethod method = NormMethod::automatic) {
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  if (method == NormMethod::automatic) method = H.dim() <= 512 ? NormMethod::dense : NormMethod::lanczos;
  if (method == NormMethod::lanczos) return lanczos_norm(H.data, {tol, 10'000});
  if (H.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H.data, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  const auto& ev = solver.eigenvalues();
  return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

struct NormTailResult {
  MCEstimate frequency;  // P{lambda_max > sqrt(u1)(1 + eps)} with binomial std_error
  double threshold = 0.0;
  std::vector<double> norms;  // per draw, in draw order

  double median() const {
    std::vector<double> s = norms;
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    return n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
  }
};

/// eps > -1 so that negative values can serve as below-the-edge diagnostics.
inline NormTailResult norm_tail(const EnsembleSpec& spec, double epsilon, std::size_t samples, std::uint64_t seed) {
  if (spec.kind != EnsembleKind::band) throw std::invalid_argument("norm_tail needs a band ensemble");
  if (!(epsilon > -1.0)) throw std::invalid_argument("epsilon must exceed -1");
  require_samples(samples, 20, "norm_tail");
  NormTailResult out;
  out.threshold = std::sqrt(spec.profile.u1) * (1.0 + epsilon);
  out.norms.resize(samples);
  parallel_for(samples, [&](std::size_t i) { out.norms[i] = spectral_norm(sample(spec, seed, i)); });
  std::size_t hits = 0;
  for (double v : out.norms) hits += v > out.threshold;
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  out.frequency = {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), samples, seed};
  return out;
}

}  // namespace rmt
