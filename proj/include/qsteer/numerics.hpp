#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace qsteer {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using complexd = std::complex<double>;

namespace detail {

// Compact %g formatting for error messages (std::to_string truncates small
// magnitudes to 0.000000).
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// lnGamma in long double. glibc's lgammal writes the global signgam (a data
// race under threads), so use the reentrant form where available.
inline long double lgamma_ld(long double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgammal_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

}  // namespace detail

inline void require_finite(const CMatrix& m, const char* name) {
  if (!m.allFinite())
    throw invalid_input_error(std::string(name) + " contains NaN or Inf entries");
}

// Largest singular value. Jacobi SVD keeps relative accuracy near machine
// precision for the small dense matrices used here.
inline double operator_norm(const CMatrix& m) {
  if (m.size() == 0) throw invalid_input_error("operator_norm: matrix is empty");
  require_finite(m, "operator_norm: matrix");
  const Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

// Largest (real) eigenvalue of a Hermitian matrix. Hermiticity is a modelling
// invariant, so deviations beyond round-off are rejected rather than silently
// symmetrized away.
inline double max_eigenvalue_hermitian(const CMatrix& m) {
  if (m.size() == 0 || m.rows() != m.cols())
    throw invalid_input_error("max_eigenvalue_hermitian: matrix must be square and non-empty");
  require_finite(m, "max_eigenvalue_hermitian: matrix");
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-10)
    throw invalid_input_error(
        "max_eigenvalue_hermitian: matrix is not Hermitian (max |m - m^dagger| = " +
        detail::fmt(dev) + ")");
  const CMatrix sym = (m + m.adjoint()) * 0.5;
  const Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("max_eigenvalue_hermitian: eigenvalue iteration failed");
  return solver.eigenvalues().maxCoeff();
}

// Tensor (Kronecker) product.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  if (a.size() == 0 || b.size() == 0) throw invalid_input_error("kron: empty factor");
  require_finite(a, "kron: a");
  require_finite(b, "kron: b");
  return Eigen::kroneckerProduct(a, b);
}

// Trace over the first factor of a dim_a x dim_b composite system:
// out(i, j) = sum_k m(k*dim_b + i, k*dim_b + j).
inline CMatrix partial_trace_first(const CMatrix& m, int dim_a, int dim_b) {
  if (dim_a < 1 || dim_b < 1)
    throw invalid_input_error("partial_trace_first: dimensions must be positive");
  const Eigen::Index expect = static_cast<Eigen::Index>(dim_a) * dim_b;
  if (m.rows() != expect || m.cols() != expect)
    throw invalid_input_error("partial_trace_first: matrix must be " + std::to_string(expect) +
                              "x" + std::to_string(expect) + " for dim_a=" + std::to_string(dim_a) +
                              ", dim_b=" + std::to_string(dim_b) + ", got " +
                              std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  require_finite(m, "partial_trace_first: matrix");
  CMatrix out = CMatrix::Zero(dim_b, dim_b);
  for (int k = 0; k < dim_a; ++k)
    out += m.block(static_cast<Eigen::Index>(k) * dim_b, static_cast<Eigen::Index>(k) * dim_b,
                   dim_b, dim_b);
  return out;
}

// ln C(n, k), evaluated in 80-bit precision: double lgamma's ~1 ulp relative
// error at lnGamma(1e6) ~ 1.3e7 is already ~2e-9 absolute, which would break
// the 1e-10 contract; long double keeps it near 1e-12.
inline double log_binomial(long long n, long long k) {
  if (n < 0 || k < 0 || k > n)
    throw invalid_input_error("log_binomial: need 0 <= k <= n, got n=" + std::to_string(n) +
                              ", k=" + std::to_string(k));
  const long double v = detail::lgamma_ld(static_cast<long double>(n) + 1.0L) -
                        detail::lgamma_ld(static_cast<long double>(k) + 1.0L) -
                        detail::lgamma_ld(static_cast<long double>(n - k) + 1.0L);
  return static_cast<double>(v);
}

// Validates Hermiticity, unit trace and positive semidefiniteness within tol.
inline void require_density_matrix(const CMatrix& rho, double tol, const char* name) {
  if (rho.size() == 0 || rho.rows() != rho.cols())
    throw invalid_input_error(std::string(name) + " must be a square, non-empty matrix");
  require_finite(rho, name);
  const double herm_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > tol)
    throw invalid_input_error(std::string(name) + " is not Hermitian within " + detail::fmt(tol) +
                              " (max deviation " + detail::fmt(herm_dev) + ")");
  const complexd tr = rho.trace();
  if (std::abs(tr.real() - 1.0) > tol || std::abs(tr.imag()) > tol)
    throw invalid_input_error(std::string(name) + " must have unit trace, got " +
                              detail::fmt(tr.real()));
  const CMatrix sym = (rho + rho.adjoint()) * 0.5;
  const Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol)
    throw invalid_input_error(std::string(name) + " is not positive semidefinite (min eigenvalue " +
                              detail::fmt(min_eig) + ")");
}

}  // namespace qsteer
