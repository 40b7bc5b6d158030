#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bases.hpp"
#include "numerics.hpp"
#include "parallel.hpp"

namespace qsteer {

// All bounds for one basis set. s_q is the quantum value of the steering
// functional when a state was supplied, else its maximum N (achieved by the
// maximally entangled state with conjugated bases). Optionals are absent when
// inapplicable (Toeplitz structure missing) or not requested (exact LHS).
struct SteeringBounds {
  int n_settings = 0;
  double s_q = 0.0;
  double bound_theorem = 0.0;
  double bound_weak = 0.0;
  std::optional<double> bound_toeplitz;
  std::optional<double> lhs_exact;
  double v_q_theorem = 0.0;
  double v_q_weak = 0.0;
};

// G(x*d + a, y*d + b) = sqrt(p(a|x) p(b|y)) <phi_x^a|phi_y^b>; probs is the
// N x d response table p(a|x) the entries were built from.
struct GramMatrix {
  CMatrix entries;
  RMatrix probs;
};

// Result of the block-Toeplitz applicability check. `bound` is absent when
// the structure fails; the diagnostic then identifies the worst block pair.
struct ToeplitzResult {
  std::optional<double> bound;
  double max_deviation = 0.0;  // worst elementwise |O_{x,y} - O_{x+1,y+1}|
  int worst_x = -1;            // 0-based block indices of the worst pair
  int worst_y = -1;
};

// sigma_x^a = Tr_A{(|phi_x^a><phi_x^a| (x) I_B) rho} for every setting x and
// outcome a of Alice. rho lives on C^{d_A} (x) C^{d_B} with the first factor
// Alice's; d_B is inferred from rho's size.
inline std::vector<std::vector<CMatrix>> conditional_states(const CMatrix& rho,
                                                            const BasisSet& alice_bases) {
  require_density_matrix(rho, 1e-9, "conditional_states: rho");
  const int da = alice_bases.dim();
  if (rho.rows() % da != 0)
    throw invalid_input_error("conditional_states: rho dimension " + std::to_string(rho.rows()) +
                              " is not a multiple of Alice's dimension " + std::to_string(da));
  const int db = static_cast<int>(rho.rows()) / da;
  const CMatrix id_b = CMatrix::Identity(db, db);
  std::vector<std::vector<CMatrix>> out(static_cast<std::size_t>(alice_bases.settings()));
  for (int x = 0; x < alice_bases.settings(); ++x) {
    out[static_cast<std::size_t>(x)].reserve(static_cast<std::size_t>(da));
    for (int a = 0; a < da; ++a) {
      const CVector phi = alice_bases.vec(x, a);
      const CMatrix proj = phi * phi.adjoint();
      out[static_cast<std::size_t>(x)].push_back(
          partial_trace_first(kron(proj, id_b) * rho, da, db));
    }
  }
  return out;
}

// S_Q(rho) = sum_x sum_a Tr{|phi_x^a><phi_x^a|_Bob sigma_x^a}, with sigma_x^a
// steered by Alice's measurements. Both sides must share the number of
// settings and the local dimension (outcomes index Bob's basis vectors).
inline double steering_value(const CMatrix& rho, const BasisSet& alice_bases,
                             const BasisSet& bob_bases) {
  if (alice_bases.settings() != bob_bases.settings())
    throw invalid_input_error("steering_value: setting-count mismatch (Alice " +
                              std::to_string(alice_bases.settings()) + ", Bob " +
                              std::to_string(bob_bases.settings()) + ")");
  if (alice_bases.dim() != bob_bases.dim())
    throw invalid_input_error("steering_value: local dimension mismatch (Alice " +
                              std::to_string(alice_bases.dim()) + ", Bob " +
                              std::to_string(bob_bases.dim()) + ")");
  const Eigen::Index expect =
      static_cast<Eigen::Index>(alice_bases.dim()) * bob_bases.dim();
  if (rho.rows() != expect)
    throw invalid_input_error("steering_value: rho must be " + std::to_string(expect) + "x" +
                              std::to_string(expect) + ", got " + std::to_string(rho.rows()) +
                              "x" + std::to_string(rho.cols()));
  const auto sigmas = conditional_states(rho, alice_bases);
  double s = 0.0;
  for (int x = 0; x < bob_bases.settings(); ++x)
    for (int a = 0; a < bob_bases.dim(); ++a) {
      const CVector v = bob_bases.vec(x, a);
      s += std::real(v.dot(sigmas[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)] * v));
    }
  return s;
}

// Density matrix of (1/sqrt d) sum_i |ii>.
inline CMatrix max_entangled_state(int d) {
  if (d < 2) throw invalid_input_error("max_entangled_state: d must be >= 2");
  CVector psi = CVector::Zero(static_cast<Eigen::Index>(d) * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) psi(static_cast<Eigen::Index>(i) * d + i) = amp;
  return psi * psi.adjoint();
}

// 1 + sum_{i=1}^{N-1} C_i (empty sum at N = 1).
inline double bound_theorem(const OverlapSummary& o) {
  double s = 1.0;
  for (const double c : o.c_diag) s += c;
  return s;
}

// 1 + (N-1) C. Undefined at N = 1 where no cross-setting overlap exists.
inline double bound_weak(const OverlapSummary& o) {
  if (!o.c_max)
    throw invalid_input_error("bound_weak: undefined for N = 1 (no cross-setting overlap C)");
  return 1.0 + (o.settings() - 1) * (*o.c_max);
}

// Checks the block-Toeplitz structure O_{x,y} = O_{x+1,y+1} (0-based x,y up to
// N-2, O_{x,y} the d x d matrix of <phi_x^a|phi_y^b>) within tol. When it
// holds, the sharper bound applies:
//   1 + (ceil(N') - floor(N')) C_{floor(N')+1} + 2 sum_{i=1}^{floor(N')} C_i,
// with N' = (N-1)/2; the first extra term appears only for even N, so its
// index is never evaluated for odd N (in particular N = 1).
inline ToeplitzResult bound_toeplitz(const BasisSet& b, double tol = 1e-9) {
  if (!(tol >= 0.0)) throw invalid_input_error("bound_toeplitz: tol must be >= 0");
  const int n = b.settings();
  ToeplitzResult res;
  std::vector<std::vector<CMatrix>> blocks(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    blocks[static_cast<std::size_t>(x)].resize(static_cast<std::size_t>(n));
    for (int y = 0; y < n; ++y)
      blocks[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
          b.basis(x).adjoint() * b.basis(y);
  }
  for (int x = 0; x + 1 < n; ++x)
    for (int y = 0; y + 1 < n; ++y) {
      const double dev = (blocks[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] -
                          blocks[static_cast<std::size_t>(x + 1)][static_cast<std::size_t>(y + 1)])
                             .cwiseAbs()
                             .maxCoeff();
      if (dev > res.max_deviation) {
        res.max_deviation = dev;
        res.worst_x = x;
        res.worst_y = y;
      }
    }
  if (res.max_deviation > tol) return res;  // not Toeplitz: bound stays absent
  const OverlapSummary summary = overlap_summary(b);
  const int half = (n - 1) / 2;  // floor(N')
  double bound = 1.0;
  if (n >= 2 && n % 2 == 0) bound += summary.c_diag[static_cast<std::size_t>(half)];
  for (int i = 1; i <= half; ++i) bound += 2.0 * summary.c_diag[static_cast<std::size_t>(i - 1)];
  res.bound = bound;
  return res;
}

// Exact LHS value. The supremum over local-hidden-state models is attained on
// deterministic assignments a(x) with a pure hidden state, so it equals
//   max over the d^N assignments of the top eigenvalue of
//   sum_x |phi_x^{a(x)}><phi_x^{a(x)}|.
// The d x d projector sum and the N x N Gram matrix of the chosen vectors
// share their nonzero spectrum; whichever is smaller is diagonalized. Workers
// split the strategy range into contiguous chunks and combine via max, which
// is order-independent, so the result is identical for any worker count.
inline double lhs_exact(const BasisSet& b, std::uint64_t limit = 1000000, int workers = 1) {
  const int n = b.settings();
  const int d = b.dim();
  std::uint64_t total = 1;
  bool overflow = false;
  for (int x = 0; x < n; ++x) {
    if (total > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(d)) {
      overflow = true;
      break;
    }
    total *= static_cast<std::uint64_t>(d);
  }
  if (overflow || total > limit) {
    const std::string size_text =
        overflow ? ("about " + detail::fmt(std::pow(static_cast<double>(d), n)))
                 : std::to_string(total);
    throw capacity_error("lhs_exact: enumerating all " + std::to_string(d) + "^" +
                             std::to_string(n) + " = " + size_text +
                             " deterministic strategies exceeds the limit " +
                             std::to_string(limit),
                         overflow ? std::numeric_limits<std::uint64_t>::max() : total, limit);
  }

  // Pairwise inner products <phi_x^a|phi_y^b>: P[x][y](a, b).
  std::vector<std::vector<CMatrix>> p(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    p[static_cast<std::size_t>(x)].resize(static_cast<std::size_t>(n));
    for (int y = 0; y < n; ++y)
      p[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
          b.basis(x).adjoint() * b.basis(y);
  }

  const bool use_gram = n < d;
  const int dim = use_gram ? n : d;
  double best = 0.0;
  std::mutex best_mutex;
  parallel_chunks(static_cast<std::size_t>(total), workers, [&](std::size_t lo, std::size_t hi) {
    std::vector<int> a(static_cast<std::size_t>(n));
    CMatrix m(dim, dim);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver;
    double local = 0.0;
    for (std::uint64_t s = lo; s < hi; ++s) {
      std::uint64_t rest = s;
      for (int x = 0; x < n; ++x) {
        a[static_cast<std::size_t>(x)] = static_cast<int>(rest % static_cast<std::uint64_t>(d));
        rest /= static_cast<std::uint64_t>(d);
      }
      if (use_gram) {
        for (int x = 0; x < n; ++x) {
          m(x, x) = 1.0;
          for (int y = x + 1; y < n; ++y) {
            const complexd v = p[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)](
                a[static_cast<std::size_t>(x)], a[static_cast<std::size_t>(y)]);
            m(x, y) = v;
            m(y, x) = std::conj(v);
          }
        }
      } else {
        m.setZero();
        for (int x = 0; x < n; ++x) {
          const CVector v = b.vec(x, a[static_cast<std::size_t>(x)]);
          m += v * v.adjoint();
        }
        m = ((m + m.adjoint()) * 0.5).eval();
      }
      solver.compute(m, Eigen::EigenvaluesOnly);
      local = std::max(local, solver.eigenvalues().maxCoeff());
    }
    const std::lock_guard<std::mutex> lock(best_mutex);
    best = std::max(best, local);
  });
  return best;
}

// Gram matrix G(x*d+a, y*d+b) = sqrt(p(a|x) p(b|y)) <phi_x^a|phi_y^b> for a
// response-probability table probs(x, a) = p(a|x) (each row a distribution).
inline GramMatrix gram_matrix(const BasisSet& b, const RMatrix& probs) {
  const int n = b.settings();
  const int d = b.dim();
  if (probs.rows() != n || probs.cols() != d)
    throw invalid_input_error("gram_matrix: probs must be N x d = " + std::to_string(n) + "x" +
                              std::to_string(d) + ", got " + std::to_string(probs.rows()) + "x" +
                              std::to_string(probs.cols()));
  for (int x = 0; x < n; ++x) {
    double sum = 0.0;
    for (int a = 0; a < d; ++a) {
      if (!(probs(x, a) >= 0.0))
        throw invalid_input_error("gram_matrix: p(a|x) must be nonnegative, got " +
                                  detail::fmt(probs(x, a)) + " at (x=" + std::to_string(x) +
                                  ", a=" + std::to_string(a) + ")");
      sum += probs(x, a);
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw invalid_input_error("gram_matrix: p(.|x=" + std::to_string(x) + ") sums to " +
                                detail::fmt(sum) + ", expected 1 within 1e-12");
  }
  GramMatrix g;
  g.probs = probs;
  g.entries.resize(static_cast<Eigen::Index>(n) * d, static_cast<Eigen::Index>(n) * d);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const CMatrix overlaps = b.basis(x).adjoint() * b.basis(y);
      for (int a = 0; a < d; ++a)
        for (int bo = 0; bo < d; ++bo)
          g.entries(static_cast<Eigen::Index>(x) * d + a, static_cast<Eigen::Index>(y) * d + bo) =
              std::sqrt(probs(x, a) * probs(y, bo)) * overlaps(a, bo);
    }
  return g;
}

inline double violation_ratio(double s_q, double bound) {
  if (!(bound > 0.0))
    throw invalid_input_error("violation_ratio: bound must be positive, got " +
                              detail::fmt(bound));
  return s_q / bound;
}

struct BoundsOptions {
  bool exact_lhs = false;
  std::uint64_t lhs_cap = 1000000;
  double toeplitz_tol = 1e-9;
  int workers = 1;  // 0 = QSTEER_WORKERS environment variable, else 1
};

// One-stop evaluation used by the CLI. No state is supplied, so s_q is the
// maximal quantum value N.
inline SteeringBounds compute_bounds(const BasisSet& b, const BoundsOptions& opt = {}) {
  const int n = b.settings();
  if (n < 2)
    throw invalid_input_error(
        "compute_bounds: need at least 2 settings (bound_weak is undefined for N = 1)");
  const OverlapSummary summary = overlap_summary(b);
  SteeringBounds out;
  out.n_settings = n;
  out.s_q = static_cast<double>(n);
  out.bound_theorem = bound_theorem(summary);
  out.bound_weak = bound_weak(summary);
  out.bound_toeplitz = bound_toeplitz(b, opt.toeplitz_tol).bound;
  if (opt.exact_lhs) out.lhs_exact = lhs_exact(b, opt.lhs_cap, opt.workers);
  out.v_q_theorem = violation_ratio(out.s_q, out.bound_theorem);
  out.v_q_weak = violation_ratio(out.s_q, out.bound_weak);
  return out;
}

}  // namespace qsteer
