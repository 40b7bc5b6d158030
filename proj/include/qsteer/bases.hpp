#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "numerics.hpp"
#include "rng.hpp"

namespace qsteer {

// N orthonormal measurement bases of a d-dimensional complex space.
// bases[x] is a d x d matrix whose column a is the eigenvector |phi_x^a>.
// Orthonormality of every basis is enforced at construction; `tol` is the
// accepted elementwise deviation of B^dagger B from the identity (1e-10 for
// internally generated sets, relaxed to 1e-8 when loading external files).
class BasisSet {
 public:
  explicit BasisSet(std::vector<CMatrix> bases, double tol = 1e-10) : bases_(std::move(bases)) {
    if (bases_.empty()) throw invalid_input_error("BasisSet: need at least one basis");
    const Eigen::Index d = bases_[0].rows();
    if (d < 1) throw invalid_input_error("BasisSet: dimension must be >= 1");
    for (std::size_t x = 0; x < bases_.size(); ++x) {
      const CMatrix& b = bases_[x];
      if (b.rows() != d || b.cols() != d)
        throw invalid_input_error("BasisSet: basis x=" + std::to_string(x) + " must be " +
                                  std::to_string(d) + "x" + std::to_string(d) + ", got " +
                                  std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
      require_finite(b, "BasisSet: basis");
      const CMatrix g = b.adjoint() * b;
      for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index c = 0; c < d; ++c) {
          const double target = (a == c) ? 1.0 : 0.0;
          const double dev = std::abs(g(a, c) - complexd(target, 0.0));
          if (dev > tol)
            throw invalid_input_error(
                "BasisSet: orthonormality violated at (x=" + std::to_string(x) +
                ", a=" + std::to_string(a) + ", b=" + std::to_string(c) +
                ") [0-based]: |<phi_x^a|phi_x^b> - delta_ab| = " + detail::fmt(dev) +
                " exceeds " + detail::fmt(tol));
        }
    }
  }

  int dim() const { return static_cast<int>(bases_[0].rows()); }
  int settings() const { return static_cast<int>(bases_.size()); }
  const CMatrix& basis(int x) const { return bases_.at(static_cast<std::size_t>(x)); }
  CVector vec(int x, int a) const { return bases_.at(static_cast<std::size_t>(x)).col(a); }
  const std::vector<CMatrix>& bases() const { return bases_; }

 private:
  std::vector<CMatrix> bases_;
};

// Complementarity structure of a BasisSet:
//   c_matrix(x, y) = C_xy = max_{a,b} |<phi_x^a|phi_y^b>|
//   c_diag[i-1]    = C_i  = max over the i-th wrap-around diagonal (see below)
//   c_max          = C    = max_{x != y} C_xy; absent when N = 1.
struct OverlapSummary {
  RMatrix c_matrix;
  std::vector<double> c_diag;
  std::optional<double> c_max;

  int settings() const { return static_cast<int>(c_matrix.rows()); }
};

// The i-th diagonal pairs setting x with y = (x - i) mod N (0-based indices;
// equivalently 1-based y = ((N + x - i - 1) mod N) + 1), the wrap-around
// convention of the shift operator S|k> = |k+1 mod N>.
inline OverlapSummary overlap_summary(const BasisSet& b) {
  const int n = b.settings();
  OverlapSummary out;
  out.c_matrix.resize(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      out.c_matrix(x, y) = (b.basis(x).adjoint() * b.basis(y)).cwiseAbs().maxCoeff();
  out.c_diag.resize(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  for (int i = 1; i < n; ++i) {
    double best = 0.0;
    for (int x = 0; x < n; ++x) best = std::max(best, out.c_matrix(x, (x - i + n) % n));
    out.c_diag[static_cast<std::size_t>(i - 1)] = best;
  }
  if (n >= 2) out.c_max = *std::max_element(out.c_diag.begin(), out.c_diag.end());
  return out;
}

inline bool is_prime(int d) {
  if (d < 2) return false;
  for (int p = 2; static_cast<long long>(p) * p <= d; ++p)
    if (d % p == 0) return false;
  return true;
}

// Full set of d+1 mutually unbiased bases in prime dimension d: the
// computational basis plus d quadratic-phase bases whose column a has entries
// omega^(r j^2 + a j)/sqrt(d) (row j, omega = exp(2 pi i/d), r = 0..d-1).
// The quadratic Gauss sum needs odd d, so d = 2 uses the standard
// sigma_z/sigma_x/sigma_y eigenbases.
inline BasisSet generate_mub_prime(int d) {
  if (!is_prime(d))
    throw unsupported_dimension_error(
        "generate_mub_prime: d = " + std::to_string(d) +
        " is not prime; this construction requires a prime dimension (try 2, 3, 5, 7, ...)");
  std::vector<CMatrix> bases;
  bases.reserve(static_cast<std::size_t>(d) + 1);
  if (d == 2) {
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix zb(2, 2), xb(2, 2), yb(2, 2);
    zb << 1, 0, 0, 1;
    xb << s, s, s, -s;
    yb << s, s, complexd(0, s), complexd(0, -s);
    bases = {zb, xb, yb};
  } else {
    bases.push_back(CMatrix::Identity(d, d));
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    for (int r = 0; r < d; ++r) {
      CMatrix u(d, d);
      for (int a = 0; a < d; ++a)
        for (int j = 0; j < d; ++j) {
          const long long e =
              (static_cast<long long>(r) * j * j + static_cast<long long>(a) * j) % d;
          const double phase = 2.0 * std::numbers::pi * static_cast<double>(e) / d;
          u(j, a) = complexd(std::cos(phase), std::sin(phase)) * inv_sqrt_d;
        }
      bases.push_back(std::move(u));
    }
  }
  return BasisSet(std::move(bases));
}

// Rotates every basis by exp(i*delta*H_x), where H_x is a seeded random
// Hermitian matrix scaled to unit operator norm; columns are then
// re-orthonormalized (modified Gram-Schmidt) so BasisSet invariants hold at
// the 1e-12 level. Deterministic for a fixed (input, delta, seed).
inline BasisSet perturb_bases(const BasisSet& b, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0 && delta <= 1.0))
    throw invalid_input_error("perturb_bases: delta must lie in [0, 1], got " +
                              detail::fmt(delta));
  const int d = b.dim();
  std::mt19937_64 rng(seed);
  std::vector<CMatrix> rotated;
  rotated.reserve(static_cast<std::size_t>(b.settings()));
  for (int x = 0; x < b.settings(); ++x) {
    CMatrix h(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double re = gaussian(rng);
        const double im = gaussian(rng);
        h(i, j) = complexd(re, im);
      }
    h = ((h + h.adjoint()) * 0.5).eval();
    const double nrm = operator_norm(h);
    if (nrm > 0.0) h /= nrm;
    // exp(i*delta*H) through the spectral decomposition of H.
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    CVector phases(d);
    for (int i = 0; i < d; ++i) {
      const double ang = delta * es.eigenvalues()(i);
      phases(i) = complexd(std::cos(ang), std::sin(ang));
    }
    const CMatrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    CMatrix nb = u * b.basis(x);
    for (int a = 0; a < d; ++a) {
      for (int c = 0; c < a; ++c) nb.col(a) -= nb.col(c).dot(nb.col(a)) * nb.col(c);
      nb.col(a) /= nb.col(a).norm();
    }
    rotated.push_back(std::move(nb));
  }
  return BasisSet(std::move(rotated), 1e-12);
}

// Solves C = sqrt(d^(epsilon-1)) for epsilon: epsilon = 1 + 2 ln(c)/ln(d).
// epsilon = 0 is an exact MUB pairing, epsilon = 1 identical bases. Values of
// c within 1e-12 outside [1/sqrt(d), 1] are clamped (a floating-point c_max of
// an exact MUB set can land one ulp below 1/sqrt(d)).
inline double epsilon_of_overlap(double c, int d) {
  if (d < 2) throw invalid_input_error("epsilon_of_overlap: d must be >= 2");
  const double lo = 1.0 / std::sqrt(static_cast<double>(d));
  const double slack = 1e-12;
  if (!(c >= lo - slack && c <= 1.0 + slack))
    throw invalid_input_error("epsilon_of_overlap: overlap must lie in [1/sqrt(d), 1] = [" +
                              detail::fmt(lo) + ", 1], got " + detail::fmt(c));
  const double cc = std::clamp(c, lo, 1.0);
  return 1.0 + 2.0 * std::log(cc) / std::log(static_cast<double>(d));
}

struct DmuResult {
  double entropy_sum;  // H({phi_x^a}|sigma) + H({phi_y^b}|sigma), natural log
  double bound;        // -2 ln C_xy
  bool holds;          // entropy_sum >= bound - 1e-9
};

// Entropic uncertainty check for the outcome distributions of settings x and
// y (0-based) on the state sigma. Zero probabilities contribute 0 (0 ln 0 = 0).
inline DmuResult dmu_check(const BasisSet& b, int x, int y, const CMatrix& sigma) {
  const int n = b.settings();
  if (x < 0 || x >= n || y < 0 || y >= n)
    throw invalid_input_error("dmu_check: setting index out of range [0, " + std::to_string(n) +
                              ") (0-based)");
  if (x == y) throw invalid_input_error("dmu_check: settings x and y must differ");
  require_density_matrix(sigma, 1e-9, "dmu_check: sigma");
  if (sigma.rows() != b.dim())
    throw invalid_input_error("dmu_check: sigma must be " + std::to_string(b.dim()) + "x" +
                              std::to_string(b.dim()));
  const auto entropy = [&](int s) {
    double h = 0.0;
    for (int a = 0; a < b.dim(); ++a) {
      const CVector v = b.vec(s, a);
      const double p = std::real(v.dot(sigma * v));
      if (p > 0.0) h -= p * std::log(p);
    }
    return h;
  };
  const double c_xy = (b.basis(x).adjoint() * b.basis(y)).cwiseAbs().maxCoeff();
  DmuResult r{};
  r.entropy_sum = entropy(x) + entropy(y);
  r.bound = -2.0 * std::log(c_xy);
  r.holds = r.entropy_sum >= r.bound - 1e-9;
  return r;
}

}  // namespace qsteer
