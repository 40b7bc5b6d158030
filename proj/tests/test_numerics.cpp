#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <random>

#include "test_support.hpp"

using qsteer::CMatrix;
using qsteer::complexd;

namespace {

CMatrix random_hermitian(int d, std::mt19937_64& rng) {
  const CMatrix a = qtest::random_cmatrix(d, d, rng);
  return (a + a.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("operator_norm on known matrices") {
  CMatrix id = CMatrix::Identity(2, 2);
  REQUIRE(std::abs(qsteer::operator_norm(id) - 1.0) <= 1e-12);

  // Rank-1 outer product v v^dagger has norm ||v||^2.
  qsteer::CVector v(3);
  v << complexd(1, 0), complexd(0, 1), complexd(0, 0);  // ||v||^2 = 2
  const CMatrix outer = v * v.adjoint();
  REQUIRE(std::abs(qsteer::operator_norm(outer) - 2.0) <= 1e-10);

  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = 3.0;
  diag(1, 1) = -5.0;
  REQUIRE(std::abs(qsteer::operator_norm(diag) - 5.0) <= 1e-12);

  REQUIRE(qsteer::operator_norm(CMatrix::Zero(3, 2)) == 0.0);
}

TEST_CASE("operator_norm matches power-iteration oracle") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const int rows = 2 + static_cast<int>(qsteer::uniform01(rng) * 6);
    const int cols = 2 + static_cast<int>(qsteer::uniform01(rng) * 6);
    const CMatrix m = qtest::random_cmatrix(rows, cols, rng);
    const double norm = qsteer::operator_norm(m);
    const double oracle = qtest::power_iteration_norm(m, rng);
    REQUIRE(std::abs(norm - oracle) <= 1e-9 * std::max(1.0, oracle));
  }
}

TEST_CASE("operator_norm basic properties") {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = qtest::random_cmatrix(5, 5, rng);
    const CMatrix b = qtest::random_cmatrix(5, 5, rng);
    REQUIRE(std::abs(qsteer::operator_norm(a) - qsteer::operator_norm(a.adjoint())) <= 1e-10);
    REQUIRE(qsteer::operator_norm(a + b) <=
            qsteer::operator_norm(a) + qsteer::operator_norm(b) + 1e-9);
  }
}

TEST_CASE("operator_norm input validation") {
  REQUIRE_THROWS_AS(qsteer::operator_norm(CMatrix()), qsteer::invalid_input_error);
  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 1) = complexd(std::nan(""), 0.0);
  REQUIRE_THROWS_AS(qsteer::operator_norm(bad), qsteer::invalid_input_error);
}

TEST_CASE("max_eigenvalue_hermitian on known matrices") {
  CMatrix diag = CMatrix::Zero(3, 3);
  diag(0, 0) = 1.0;
  diag(1, 1) = 3.0;
  diag(2, 2) = 2.0;
  REQUIRE(std::abs(qsteer::max_eigenvalue_hermitian(diag) - 3.0) <= 1e-12);

  // |u><u| + |v><v| has top eigenvalue 1 + |<u|v>|.
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    qsteer::CVector u = qtest::random_cmatrix(4, 1, rng).col(0);
    qsteer::CVector v = qtest::random_cmatrix(4, 1, rng).col(0);
    u.normalize();
    v.normalize();
    const CMatrix sum = u * u.adjoint() + v * v.adjoint();
    const double expected = 1.0 + std::abs(complexd(u.dot(v)));
    REQUIRE(std::abs(qsteer::max_eigenvalue_hermitian(sum) - expected) <= 1e-10);
  }
}

TEST_CASE("max_eigenvalue_hermitian matches PSD-shift oracle") {
  std::mt19937_64 rng(104);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix h = random_hermitian(8, rng);
    // Shift by c ||h|| to make the matrix PSD; then the top eigenvalue equals
    // the spectral norm of the shifted matrix minus the shift.
    const double c = qsteer::operator_norm(h);
    const double oracle = qsteer::operator_norm(h + c * CMatrix::Identity(8, 8)) - c;
    REQUIRE(std::abs(qsteer::max_eigenvalue_hermitian(h) - oracle) <= 1e-9);
  }
}

TEST_CASE("max_eigenvalue_hermitian rejects bad input") {
  std::mt19937_64 rng(105);
  CMatrix nonherm = qtest::random_cmatrix(3, 3, rng);
  nonherm(0, 1) = nonherm(1, 0) + complexd(0.1, 0.1);  // well past 1e-10
  REQUIRE_THROWS_AS(qsteer::max_eigenvalue_hermitian(nonherm), qsteer::invalid_input_error);
  REQUIRE_THROWS_AS(qsteer::max_eigenvalue_hermitian(qtest::random_cmatrix(2, 3, rng)),
                    qsteer::invalid_input_error);
}

TEST_CASE("kron definition and known cases") {
  REQUIRE((qsteer::kron(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)) -
           CMatrix::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() == 0.0);

  std::mt19937_64 rng(106);
  const CMatrix m = qtest::random_cmatrix(3, 3, rng);
  CMatrix scalar(1, 1);
  scalar(0, 0) = 2.0;
  REQUIRE((qsteer::kron(scalar, m) - 2.0 * m).cwiseAbs().maxCoeff() <= 1e-14);

  const CMatrix a = qtest::random_cmatrix(2, 2, rng);
  const CMatrix b = qtest::random_cmatrix(3, 3, rng);
  const CMatrix k = qsteer::kron(a, b);
  REQUIRE(k.rows() == 6);
  REQUIRE(k.cols() == 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int kk = 0; kk < 3; ++kk)
        for (int l = 0; l < 3; ++l)
          REQUIRE(std::abs(k(i * 3 + kk, j * 3 + l) - a(i, j) * b(kk, l)) <= 1e-14);
}

TEST_CASE("partial_trace_first against index-summation oracle") {
  std::mt19937_64 rng(107);
  const int da = 3, db = 4;
  const CMatrix rho = qtest::random_density(da * db, rng);
  const CMatrix pt = qsteer::partial_trace_first(rho, da, db);
  REQUIRE(pt.rows() == db);
  REQUIRE(pt.cols() == db);
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j) {
      complexd s = 0.0;
      for (int k = 0; k < da; ++k) s += rho(k * db + i, k * db + j);
      REQUIRE(std::abs(pt(i, j) - s) <= 1e-12);
    }
  REQUIRE(std::abs(complexd(pt.trace()) - complexd(rho.trace())) <= 1e-12);
}

TEST_CASE("partial_trace_first on product and entangled states") {
  std::mt19937_64 rng(108);
  const CMatrix sa = qtest::random_density(2, rng);
  const CMatrix sb = qtest::random_density(3, rng);
  const CMatrix pt = qsteer::partial_trace_first(qsteer::kron(sa, sb), 2, 3);
  REQUIRE((pt - sb).cwiseAbs().maxCoeff() <= 1e-12);

  for (int d = 2; d <= 4; ++d) {
    const CMatrix me = qsteer::max_entangled_state(d);
    const CMatrix marginal = qsteer::partial_trace_first(me, d, d);
    REQUIRE((marginal - CMatrix::Identity(d, d) / static_cast<double>(d)).cwiseAbs().maxCoeff() <=
            1e-12);
  }

  REQUIRE_THROWS_AS(qsteer::partial_trace_first(CMatrix::Identity(5, 5), 2, 3),
                    qsteer::invalid_input_error);
}

TEST_CASE("log_binomial exact for small n, lgamma identity for large n") {
  REQUIRE(qsteer::log_binomial(1, 1) == 0.0);
  REQUIRE(std::abs(qsteer::log_binomial(4, 2) - std::log(6.0)) <= 1e-14);

  const auto pascal = qtest::pascal_triangle(30);
  for (int n = 0; n <= 30; ++n)
    for (int k = 0; k <= n; ++k) {
      const double exact = static_cast<double>(pascal[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]);
      REQUIRE(std::abs(std::exp(qsteer::log_binomial(n, k)) - exact) <= 1e-12 * exact);
    }

  const double id = std::lgamma(1001.0) - 2.0 * std::lgamma(501.0);
  REQUIRE(std::abs(qsteer::log_binomial(1000, 500) - id) <= 1e-10);

  REQUIRE_THROWS_AS(qsteer::log_binomial(3, -1), qsteer::invalid_input_error);
  REQUIRE_THROWS_AS(qsteer::log_binomial(3, 4), qsteer::invalid_input_error);
}

TEST_CASE("require_density_matrix accepts states and rejects non-states") {
  REQUIRE_NOTHROW(qsteer::require_density_matrix(CMatrix::Identity(3, 3) / 3.0, 1e-9, "rho"));
  std::mt19937_64 rng(109);
  REQUIRE_NOTHROW(qsteer::require_density_matrix(qtest::random_density(4, rng), 1e-9, "rho"));

  CMatrix bad_trace = CMatrix::Identity(2, 2);
  REQUIRE_THROWS_AS(qsteer::require_density_matrix(bad_trace, 1e-9, "rho"),
                    qsteer::invalid_input_error);

  CMatrix negative = CMatrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  REQUIRE_THROWS_AS(qsteer::require_density_matrix(negative, 1e-9, "rho"),
                    qsteer::invalid_input_error);

  CMatrix nonherm = CMatrix::Identity(2, 2) / 2.0;
  nonherm(0, 1) = complexd(0.3, 0.0);
  REQUIRE_THROWS_AS(qsteer::require_density_matrix(nonherm, 1e-9, "rho"),
                    qsteer::invalid_input_error);
}

TEST_CASE("rng streams are deterministic and well-scaled") {
  std::mt19937_64 a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = qsteer::uniform01(a);
    REQUIRE(u == qsteer::uniform01(b));
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  std::mt19937_64 c(7), d(7);
  double mean = 0.0, var = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double g = qsteer::gaussian(c);
    REQUIRE(g == qsteer::gaussian(d));
    mean += g;
    var += g * g;
  }
  mean /= n;
  var = var / n - mean * mean;
  REQUIRE(std::abs(mean) <= 0.05);
  REQUIRE(std::abs(var - 1.0) <= 0.1);
}

TEST_CASE("parallel_chunks covers the range exactly once and propagates errors") {
  for (const int workers : {1, 2, 3, 7}) {
    for (const std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{5}, std::size_t{64}}) {
      std::vector<int> hits(n, 0);
      qsteer::parallel_chunks(n, workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) ++hits[i];
      });
      for (const int h : hits) REQUIRE(h == 1);
    }
  }
  REQUIRE_THROWS_AS(qsteer::parallel_chunks(
                        8, 4, [](std::size_t, std::size_t) { throw std::runtime_error("boom"); }),
                    std::runtime_error);
  REQUIRE_THROWS_AS(qsteer::parallel_chunks(4, -1, [](std::size_t, std::size_t) {}),
                    qsteer::invalid_input_error);
}

TEST_CASE("QSTEER_WORKERS controls the default worker count") {
  const char* saved = std::getenv("QSTEER_WORKERS");
  const std::string saved_value = saved ? saved : "";

  unsetenv("QSTEER_WORKERS");
  REQUIRE(qsteer::default_workers() == 1);
  setenv("QSTEER_WORKERS", "3", 1);
  REQUIRE(qsteer::default_workers() == 3);
  REQUIRE(qsteer::resolve_workers(0) == 3);
  REQUIRE(qsteer::resolve_workers(2) == 2);
  setenv("QSTEER_WORKERS", "zero", 1);
  REQUIRE_THROWS_AS(qsteer::default_workers(), qsteer::invalid_input_error);
  setenv("QSTEER_WORKERS", "0", 1);
  REQUIRE_THROWS_AS(qsteer::default_workers(), qsteer::invalid_input_error);

  if (saved)
    setenv("QSTEER_WORKERS", saved_value.c_str(), 1);
  else
    unsetenv("QSTEER_WORKERS");
}
