#include <catch2/catch_amalgamated.hpp>

#include "support/test_support.hpp"

using namespace dhr;
using Catch::Matchers::WithinAbs;

TEST_CASE("hermitian_eig on diagonal and symmetric examples") {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  const HermitianEig e = hermitian_eig(d);
  CHECK_THAT(e.values(0), WithinAbs(1.0, 1e-14));
  CHECK_THAT(e.values(1), WithinAbs(2.0, 1e-14));
  CHECK_THAT(e.values(2), WithinAbs(3.0, 1e-14));

  CMatrix sym(2, 2);
  sym << 0.0, 1.0, 1.0, 0.0;
  const HermitianEig e2 = hermitian_eig(sym);
  CHECK_THAT(e2.values(0), WithinAbs(-1.0, 1e-14));
  CHECK_THAT(e2.values(1), WithinAbs(1.0, 1e-14));
}

TEST_CASE("hermitian_eig reconstruction oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const CMatrix a = test::random_hermitian(4, seed);
    const HermitianEig e = hermitian_eig(a);
    const CMatrix rebuilt =
        e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
    CHECK((a - rebuilt).norm() <= 1e-12 * 4 * a.norm());
    CHECK((e.vectors.adjoint() * e.vectors - CMatrix::Identity(4, 4)).norm() <=
          1e-12 * 4);
  }
}

TEST_CASE("hermitian_eig rejects bad input") {
  CHECK_THROWS_AS(hermitian_eig(CMatrix::Zero(2, 3)), error);
  CMatrix skew(2, 2);
  skew << Complex(0, 1), 1.0, -1.0, 0.0;
  try {
    hermitian_eig(skew);
    FAIL("expected NotHermitian");
  } catch (const error& e) {
    CHECK(e.code() == errc::not_hermitian);
  }
}

TEST_CASE("smallest_singular examples") {
  CHECK_THAT(smallest_singular(CMatrix::Identity(3, 3)).sigma, WithinAbs(1.0, 1e-14));

  CMatrix stacked = CMatrix::Zero(3, 2);
  stacked(0, 0) = 2.0;
  stacked(2, 1) = 3.0;
  const SmallestSingular s = smallest_singular(stacked);
  CHECK_THAT(s.sigma, WithinAbs(2.0, 1e-14));
  CHECK_THAT((stacked * s.right_vector).norm(), WithinAbs(2.0, 1e-12));

  CHECK_THROWS_AS(smallest_singular(CMatrix::Zero(2, 3)), error);
}

TEST_CASE("smallest_singular matches Gram-matrix eigenvalue") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const CMatrix a = test::gaussian(6, 3, seed);
    const SmallestSingular s = smallest_singular(a);
    const double lmin = hermitian_eig(CMatrix(a.adjoint() * a)).values(0);
    CHECK(std::abs(s.sigma * s.sigma - lmin) <= 1e-10 * std::max(1.0, lmin));
    CHECK_THAT((a * s.right_vector).norm(), WithinAbs(s.sigma, 1e-12));
  }
}

TEST_CASE("solve_linear examples and residual oracle") {
  const CMatrix b = test::gaussian(3, 2, 21);
  CHECK((solve_linear(CMatrix::Identity(3, 3), b) - b).norm() <= 1e-14);

  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = 2.0;
  diag(1, 1) = 4.0;
  const CMatrix inv = solve_linear(diag, CMatrix::Identity(2, 2));
  CHECK_THAT(inv(0, 0).real(), WithinAbs(0.5, 1e-15));
  CHECK_THAT(inv(1, 1).real(), WithinAbs(0.25, 1e-15));

  const CMatrix a = test::gaussian(5, 5, 22) + 3.0 * CMatrix::Identity(5, 5);
  const CMatrix rhs = test::gaussian(5, 5, 23);
  const CMatrix x = solve_linear(a, rhs);
  CHECK((a * x - rhs).norm() <= 1e-10 * (a.norm() * x.norm() + rhs.norm()));

  try {
    solve_linear(CMatrix::Zero(2, 2), CMatrix::Identity(2, 2));
    FAIL("expected Singular");
  } catch (const error& e) {
    CHECK(e.code() == errc::singular);
  }
}

TEST_CASE("lyapunov_solve examples") {
  const CMatrix x1 = lyapunov_solve(CMatrix(-CMatrix::Identity(2, 2)),
                                    CMatrix::Identity(2, 2));
  CHECK((x1 - 0.5 * CMatrix::Identity(2, 2)).norm() <= 1e-12);

  CMatrix a = CMatrix::Zero(2, 2), c = CMatrix::Zero(2, 2);
  a(0, 0) = -1.0;
  a(1, 1) = -2.0;
  c(0, 0) = 2.0;
  c(1, 1) = 4.0;
  const CMatrix x2 = lyapunov_solve(a, c);
  CHECK((x2 - CMatrix::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("lyapunov_solve residual and definiteness on random stable systems") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Index n = 2 + static_cast<Index>(seed % 7);  // up to 8
    const CMatrix a = test::random_stable(n, 1000 + seed);
    const CMatrix z = test::gaussian(n, n, 2000 + seed);
    const CMatrix c = hermitian_part(z.adjoint() * z);
    const CMatrix x = lyapunov_solve(a, c);
    const double resid = (a.adjoint() * x + x * a + c).norm();
    REQUIRE(resid <= 1e-8 * (x.norm() * a.norm() + c.norm()));
    REQUIRE(hermitian_deviation(x) <= 1e-12 * (1 + x.norm()));
    REQUIRE(hermitian_eig(x).values(0) > 0.0);
  }
}

TEST_CASE("lyapunov_solve error paths") {
  CMatrix conflict = CMatrix::Zero(2, 2);
  conflict(0, 0) = Complex(1.0, 0.0);
  conflict(1, 1) = Complex(-1.0, 0.0);  // 1 + (-1) = 0
  try {
    lyapunov_solve(conflict, CMatrix::Identity(2, 2));
    FAIL("expected SpectrumConflict");
  } catch (const error& e) {
    CHECK(e.code() == errc::spectrum_conflict);
  }

  CMatrix not_herm(2, 2);
  not_herm << 0.0, 1.0, 0.0, 0.0;
  try {
    lyapunov_solve(CMatrix(-CMatrix::Identity(2, 2)), not_herm);
    FAIL("expected NotHermitianRHS");
  } catch (const error& e) {
    CHECK(e.code() == errc::not_hermitian_rhs);
  }
}

TEST_CASE("nullspace_basis examples") {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  const CMatrix u = nullspace_basis(d);
  REQUIRE(u.cols() == 1);
  CHECK_THAT(std::abs(u(1, 0)), WithinAbs(1.0, 1e-14));

  CHECK(nullspace_basis(CMatrix::Identity(3, 3)).cols() == 0);
}

TEST_CASE("nullspace_basis of a rank-2 PSD 4x4") {
  const CMatrix a = test::random_psd(4, 31, 2);
  const double tol = 4 * std::numeric_limits<double>::epsilon() *
                     hermitian_eig(a).values(3);
  const CMatrix u = nullspace_basis(a, tol);
  REQUIRE(u.cols() == 2);
  CHECK((u.adjoint() * u - CMatrix::Identity(2, 2)).norm() <= 1e-12);
  CHECK((a * u).norm() <= 10 * tol);
}
