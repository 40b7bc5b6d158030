#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "numerics.hpp"
#include "parallel.hpp"

namespace qsteer {

// ---------------------------------------------------------------------------
// k-copy singlet model
// ---------------------------------------------------------------------------

// Parameters of the k-copy singlet violation: k singlet pairs of fidelity F,
// detector efficiency eta, relaxed-MUB parameter epsilon, settings-thinning
// exponent sigma (N = 2^(k(1-sigma)) settings implied).
struct MultiSingletParams {
  int k = 1;
  double eta = 1.0;
  double fidelity = 1.0;
  double epsilon = 0.0;
  double sigma = 0.0;

  void validate() const {
    if (k < 1)
      throw invalid_input_error("multisinglet: k must be a positive integer, got " +
                                std::to_string(k));
    if (!(eta > 0.0 && eta <= 1.0))
      throw invalid_input_error("multisinglet: eta must lie in (0, 1], got " + detail::fmt(eta));
    if (!(fidelity > 0.0 && fidelity <= 1.0))
      throw invalid_input_error("multisinglet: fidelity must lie in (0, 1], got " +
                                detail::fmt(fidelity));
    if (!(epsilon >= 0.0 && epsilon < 1.0))
      throw invalid_input_error("multisinglet: epsilon must lie in [0, 1), got " +
                                detail::fmt(epsilon));
    if (!(sigma >= 0.0 && sigma < 1.0))
      throw invalid_input_error("multisinglet: sigma must lie in [0, 1), got " +
                                detail::fmt(sigma));
  }
};

// V_Q^eta = (2^(1-sigma) eta F)^k / (1 + (2^k - 1) 2^((epsilon-1)k/2)).
// Direct evaluation up to k = 50; log domain above (2^k alone overflows a
// double near k = 1024, and the direct denominator loses precision earlier).
// The denominator expands to 1 + 2^((1+eps)k/2) - 2^((eps-1)k/2); factoring
// out the dominant term gives ln(den) = A + log1p(e^-A - e^(B-A)) with
// A = (1+eps)(k/2)ln2 >= 17 for k > 50, so the log1p argument is tiny.
inline double multisinglet_violation(const MultiSingletParams& p) {
  p.validate();
  if (p.k <= 50) {
    const double num =
        std::pow(std::exp2(1.0 - p.sigma) * p.eta * p.fidelity, static_cast<double>(p.k));
    const double den = 1.0 + (std::exp2(static_cast<double>(p.k)) - 1.0) *
                                 std::exp2((p.epsilon - 1.0) * p.k / 2.0);
    return num / den;
  }
  const double ln2 = std::numbers::ln2;
  const double log_num =
      p.k * ((1.0 - p.sigma) * ln2 + std::log(p.eta) + std::log(p.fidelity));
  const double a = (1.0 + p.epsilon) * p.k * 0.5 * ln2;
  const double b = (p.epsilon - 1.0) * p.k * 0.5 * ln2;
  const double log_den = a + std::log1p(std::exp(-a) - std::exp(b - a));
  return std::exp(log_num - log_den);
}

// Exponential growth in k holds iff epsilon + 2 sigma < 2 log2(eta F) + 1.
// The strict inequality carries a 1e-12 guard: the double closest to
// eta F = 1/sqrt(2) lies a hair *above* the real boundary, and the boundary
// case must classify as non-growing.
inline bool multisinglet_growth_condition(double eta, double fidelity, double epsilon,
                                          double sigma) {
  MultiSingletParams{1, eta, fidelity, epsilon, sigma}.validate();
  return epsilon + 2.0 * sigma < 2.0 * std::log2(eta * fidelity) + 1.0 - 1e-12;
}

// ---------------------------------------------------------------------------
// Photonic multi-particle Bell-singlet model
// ---------------------------------------------------------------------------

namespace detail {

// Integer power by squaring; ipow(0, 0) = 1 by the usual convention.
inline long double ipow(long double base, int e) {
  long double r = 1.0L;
  long double b = base;
  int n = e;
  while (n > 0) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

// Row n of Pascal's triangle in uint64. Exact through n = 66
// (C(66, 33) < 2^63); additions cannot overflow if the final row fits.
inline std::vector<std::uint64_t> pascal_row(int n) {
  std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 1);
  for (int i = 1; i <= n; ++i)
    for (int j = i - 1; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
  return row;
}

inline long double log_binomial_ld(int n, int k) {
  return lgamma_ld(static_cast<long double>(n) + 1.0L) -
         lgamma_ld(static_cast<long double>(k) + 1.0L) -
         lgamma_ld(static_cast<long double>(n - k) + 1.0L);
}

}  // namespace detail

// Overlap O_d^{n,m}(theta) between the theta-rotated d-photon two-mode state
// with m vertical photons and the unrotated one with n vertical photons:
//   sqrt((d-n)! n! / ((d-m)! m!)) *
//   sum_{k = kmin, kmin+2, ..., kmax} C(d-m, (d-n+k)/2) C(m, (d-n-k)/2)
//                                     (-1)^((d-n-k)/2) cos^(m+k) sin^(d-m-k),
//   kmin = max(-(d-n), (d-n)-2m), kmax = min(d-n, 2(d-m)-(d-n)).
// Terms use exact integer binomials with long-double accumulation for
// d <= 66, an lgamma-based log path above. The alternating sum is
// cancellation-limited for *interior* (n, m) once d grows well past 66
// (verified accurate for d <= 60; see the brute-force equality tests);
// boundary entries -- the ones the C(theta, d) model consumes -- stay
// accurate at any d because their sums have one or few terms.
inline double photonic_overlap(int d, int n, int m, double theta) {
  if (d < 1) throw invalid_input_error("photonic_overlap: d must be >= 1");
  if (n < 0 || n > d || m < 0 || m > d)
    throw invalid_input_error("photonic_overlap: need 0 <= n, m <= d, got n=" + std::to_string(n) +
                              ", m=" + std::to_string(m) + ", d=" + std::to_string(d));
  if (!(theta >= 0.0 && theta < std::numbers::pi / 2))
    throw invalid_input_error("photonic_overlap: theta must lie in [0, pi/2), got " +
                              detail::fmt(theta));
  if (theta == 0.0) return (n == m) ? 1.0 : 0.0;

  const int kmin = std::max(-(d - n), (d - n) - 2 * m);
  const int kmax = std::min(d - n, 2 * (d - m) - (d - n));
  const long double log_pre =
      0.5L * (detail::lgamma_ld(static_cast<long double>(d - n) + 1.0L) +
              detail::lgamma_ld(static_cast<long double>(n) + 1.0L) -
              detail::lgamma_ld(static_cast<long double>(d - m) + 1.0L) -
              detail::lgamma_ld(static_cast<long double>(m) + 1.0L));
  const long double c = std::cos(static_cast<long double>(theta));
  const long double s = std::sin(static_cast<long double>(theta));

  long double sum = 0.0L;
  if (d <= 66) {
    const std::vector<std::uint64_t> row_dm = detail::pascal_row(d - m);
    const std::vector<std::uint64_t> row_m = detail::pascal_row(m);
    for (int k = kmin; k <= kmax; k += 2) {
      const int i1 = (d - n + k) / 2;
      const int i2 = (d - n - k) / 2;
      const long double term = static_cast<long double>(row_dm[static_cast<std::size_t>(i1)]) *
                               static_cast<long double>(row_m[static_cast<std::size_t>(i2)]) *
                               detail::ipow(c, m + k) * detail::ipow(s, d - m - k);
      sum += (i2 % 2 == 0) ? term : -term;
    }
  } else {
    const long double lc = std::log(c);
    const long double ls = std::log(s);
    for (int k = kmin; k <= kmax; k += 2) {
      const int i1 = (d - n + k) / 2;
      const int i2 = (d - n - k) / 2;
      const long double lt = detail::log_binomial_ld(d - m, i1) +
                             detail::log_binomial_ld(m, i2) + (m + k) * lc + (d - m - k) * ls;
      const long double term = std::exp(lt);
      sum += (i2 % 2 == 0) ? term : -term;
    }
  }
  return static_cast<double>(std::exp(log_pre) * sum);
}

// Integer maximizer of the boundary overlap: floor(d sin^2 - cos^2) + 1,
// clamped to [0, d].
inline int photonic_q(double theta, int d) {
  if (d < 1) throw invalid_input_error("photonic_q: d must be >= 1");
  if (!(theta > 0.0 && theta < std::numbers::pi / 2))
    throw invalid_input_error("photonic_q: theta must lie in (0, pi/2), got " +
                              detail::fmt(theta));
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  const double raw = std::floor(static_cast<double>(d) * st * st - ct * ct) + 1.0;
  return static_cast<int>(std::clamp(raw, 0.0, static_cast<double>(d)));
}

// C(theta, d) = sqrt(C(d, q)) cos^d tan^q at q = q_{theta,d}, in log domain.
// The floor in q is discontinuous, so candidates q-1, q, q+1 (clipped to
// [0, d]) are all evaluated and the max returned -- float noise at an integer
// crossing of d sin^2 - cos^2 then cannot pick a sub-optimal maximizer.
inline double photonic_C(double theta, int d) {
  const int q0 = photonic_q(theta, d);  // validates theta and d
  const double log_cos = std::log(std::cos(theta));
  const double log_tan = std::log(std::tan(theta));
  double best = 0.0;
  for (int q = std::max(0, q0 - 1); q <= std::min(d, q0 + 1); ++q) {
    const double lv = 0.5 * log_binomial(d, q) + d * log_cos + q * log_tan;
    best = std::max(best, std::exp(lv));
  }
  return best;
}

// Stirling asymptotic: C(theta, d) ~ 1/(fourthroot(pi d/2) sqrt(sin 2 theta)).
inline double photonic_asymptotic_C(double theta, int d) {
  if (d < 1) throw invalid_input_error("photonic_asymptotic_C: d must be >= 1");
  if (!(theta > 0.0 && theta < std::numbers::pi / 2))
    throw invalid_input_error("photonic_asymptotic_C: theta must lie in (0, pi/2), got " +
                              detail::fmt(theta));
  return 1.0 / (std::pow(std::numbers::pi * d / 2.0, 0.25) * std::sqrt(std::sin(2.0 * theta)));
}

// p(m, n | theta) = |O_d^{n,m}(theta)|^2 as a (d+1) x (d+1) table, row m,
// column n. Rows and columns each sum to 1 (unitarity of the rotation).
inline RMatrix photonic_distribution(int d, double theta) {
  if (d < 1) throw invalid_input_error("photonic_distribution: d must be >= 1");
  if (!(theta >= 0.0 && theta < std::numbers::pi / 2))
    throw invalid_input_error("photonic_distribution: theta must lie in [0, pi/2), got " +
                              detail::fmt(theta));
  RMatrix p(d + 1, d + 1);
  for (int m = 0; m <= d; ++m)
    for (int n = 0; n <= d; ++n) {
      const double o = photonic_overlap(d, n, m, theta);
      p(m, n) = o * o;
    }
  return p;
}

// V_Q(N) for N settings on the uniform angle grid theta_x = (x-1) pi/(2N),
// whose nearest-neighbour separation is theta = pi/(2N):
//   V_Q(N) = N / (1 + (N-1) C(pi/(2N), d)).
inline double photonic_vq(int n_settings, int d) {
  if (n_settings < 2) throw invalid_input_error("photonic_vq: need N >= 2");
  const double c = photonic_C(std::numbers::pi / (2.0 * n_settings), d);
  return static_cast<double>(n_settings) / (1.0 + (n_settings - 1) * c);
}

// One row of the photonic violation grids: optimal settings count for a given
// local photon number d, the corresponding angle and ratio, and the
// efficiency-adjusted ratio V_Q^eta = eta^d V_Q.
struct PhotonicScanRow {
  int d = 0;
  int n_opt = 0;
  double theta = 0.0;
  double v_q = 0.0;
  double eta = 1.0;
  double v_q_eta = 0.0;
};

// Scans N = 2..n_max, maximizing V_Q(N); ties keep the smallest N. n_max
// defaults to 400 (a stepper-motor polarizer resolves about 400 settings per
// full rotation, which caps the usable N in practice).
inline PhotonicScanRow optimal_settings_scan(int d, int n_max = 400, double eta = 1.0) {
  if (d < 1) throw invalid_input_error("optimal_settings_scan: d must be >= 1");
  if (n_max < 2) throw invalid_input_error("optimal_settings_scan: n_max must be >= 2");
  if (!(eta > 0.0 && eta <= 1.0))
    throw invalid_input_error("optimal_settings_scan: eta must lie in (0, 1], got " +
                              detail::fmt(eta));
  int best_n = 2;
  double best_v = photonic_vq(2, d);
  for (int n = 3; n <= n_max; ++n) {
    const double v = photonic_vq(n, d);
    if (v > best_v) {  // strict: ties keep the smaller N
      best_v = v;
      best_n = n;
    }
  }
  PhotonicScanRow row;
  row.d = d;
  row.n_opt = best_n;
  row.theta = std::numbers::pi / (2.0 * best_n);
  row.v_q = best_v;
  row.eta = eta;
  row.v_q_eta = std::pow(eta, d) * best_v;
  return row;
}

// ---------------------------------------------------------------------------
// Grid scans (CSV-shaped rows, deterministic order, optional parallelism)
// ---------------------------------------------------------------------------

struct MultiSingletRow {
  int k = 0;
  double eta = 0.0;
  double fidelity = 0.0;
  double epsilon = 0.0;
  double sigma = 0.0;
  double v_q_eta = 0.0;
};

// One row per (k, eta, epsilon) grid point, sorted by (k, eta, epsilon).
inline std::vector<MultiSingletRow> multisinglet_grid(int k_max, std::vector<double> etas,
                                                      double fidelity,
                                                      std::vector<double> epsilons, double sigma) {
  if (k_max < 1)
    throw invalid_input_error("multisinglet_grid: k_max must be >= 1, got " +
                              std::to_string(k_max));
  if (etas.empty()) throw invalid_input_error("multisinglet_grid: empty eta grid");
  if (epsilons.empty()) throw invalid_input_error("multisinglet_grid: empty epsilon grid");
  std::sort(etas.begin(), etas.end());
  std::sort(epsilons.begin(), epsilons.end());
  std::vector<MultiSingletRow> rows;
  rows.reserve(static_cast<std::size_t>(k_max) * etas.size() * epsilons.size());
  for (int k = 1; k <= k_max; ++k)
    for (const double eta : etas)
      for (const double eps : epsilons) {
        const MultiSingletParams p{k, eta, fidelity, eps, sigma};
        rows.push_back({k, eta, fidelity, eps, sigma, multisinglet_violation(p)});
      }
  return rows;
}

// One row per (d, eta), sorted by (d, eta). The per-d scan is independent of
// eta (eta only rescales V_Q), so each d is scanned once; scans parallelize
// over d with results assembled in index order (worker-count independent).
inline std::vector<PhotonicScanRow> photonic_scan_grid(int d_max, int n_max,
                                                       std::vector<double> etas,
                                                       int workers = 1) {
  if (d_max < 1)
    throw invalid_input_error("photonic_scan_grid: d_max must be >= 1, got " +
                              std::to_string(d_max));
  if (etas.empty()) throw invalid_input_error("photonic_scan_grid: empty eta grid");
  std::sort(etas.begin(), etas.end());
  for (const double eta : etas)
    if (!(eta > 0.0 && eta <= 1.0))
      throw invalid_input_error("photonic_scan_grid: eta must lie in (0, 1], got " +
                                detail::fmt(eta));
  std::vector<PhotonicScanRow> base(static_cast<std::size_t>(d_max));
  parallel_chunks(static_cast<std::size_t>(d_max), workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      base[i] = optimal_settings_scan(static_cast<int>(i) + 1, n_max, 1.0);
  });
  std::vector<PhotonicScanRow> rows;
  rows.reserve(static_cast<std::size_t>(d_max) * etas.size());
  for (int d = 1; d <= d_max; ++d)
    for (const double eta : etas) {
      PhotonicScanRow r = base[static_cast<std::size_t>(d - 1)];
      r.eta = eta;
      r.v_q_eta = std::pow(eta, d) * r.v_q;
      rows.push_back(r);
    }
  return rows;
}

// Full V_Q(N) dump behind the scan: one row per (d, N), N = 2..n_max, the
// band whose upper envelope is the reported per-d optimum.
struct PhotonicAllNRow {
  int d = 0;
  int n = 0;
  double theta = 0.0;
  double v_q = 0.0;
};

inline std::vector<PhotonicAllNRow> photonic_all_n(int d_max, int n_max, int workers = 1) {
  if (d_max < 1) throw invalid_input_error("photonic_all_n: d_max must be >= 1");
  if (n_max < 2) throw invalid_input_error("photonic_all_n: n_max must be >= 2");
  const std::size_t per_d = static_cast<std::size_t>(n_max) - 1;
  std::vector<PhotonicAllNRow> rows(static_cast<std::size_t>(d_max) * per_d);
  parallel_chunks(static_cast<std::size_t>(d_max), workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const int d = static_cast<int>(i) + 1;
      for (int n = 2; n <= n_max; ++n)
        rows[i * per_d + static_cast<std::size_t>(n - 2)] = {
            d, n, std::numbers::pi / (2.0 * n), photonic_vq(n, d)};
    }
  });
  return rows;
}

}  // namespace qsteer
