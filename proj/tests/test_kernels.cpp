#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sketchlr/kernels.hpp"
#include "sketchlr/randgen.hpp"

using namespace sketchlr;
using CMatrix = Matrix<Complex>;
using RMatrix = Matrix<Real>;

TEST_CASE("thin_qr on the identity") {
  const CMatrix a = CMatrix::Identity(3, 3);
  const QrThin<Complex> qr = thin_qr(a);
  CHECK((qr.q * qr.r - a).norm() < 1e-14);
  CHECK((qr.q.adjoint() * qr.q - CMatrix::Identity(3, 3)).norm() < 1e-14);
  for (Index i = 0; i < 3; ++i) {
    CHECK(std::abs(std::abs(qr.r(i, i)) - 1.0) < 1e-14);
    for (Index j = 0; j < i; ++j) CHECK(std::abs(qr.r(i, j)) < 1e-14);
  }
}

TEST_CASE("thin_qr on the zero matrix") {
  const RMatrix a = RMatrix::Zero(4, 2);
  const QrThin<Real> qr = thin_qr(a);
  CHECK(qr.r.norm() == 0.0);
  CHECK((qr.q.adjoint() * qr.q - RMatrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("thin_qr reconstructs a random complex matrix") {
  RngStream stream(11, 0);
  const CMatrix a = gaussian_matrix<Complex>(stream, 50, 8);
  const QrThin<Complex> qr = thin_qr(a);
  CHECK((qr.q.adjoint() * qr.q - CMatrix::Identity(8, 8)).norm() < 1e-12);
  CHECK((qr.q * qr.r - a).norm() < 1e-12 * std::max(1.0, a.norm()));
}

TEST_CASE("thin_qr rejects wide input") {
  CHECK_THROWS_AS(thin_qr(CMatrix(CMatrix::Zero(2, 5))), std::invalid_argument);
}

TEST_CASE("thin_qr orthonormality and residual across 100 random sizes") {
  RngStream stream(12, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const Index k = 1 + static_cast<Index>(stream.next_u64() % 12);
    const Index m = k + static_cast<Index>(stream.next_u64() % 30);
    if (trial % 2 == 0) {
      const RMatrix a = gaussian_matrix<Real>(stream, m, k);
      const QrThin<Real> qr = thin_qr(a);
      CHECK((qr.q.adjoint() * qr.q - RMatrix::Identity(k, k)).norm() < 1e-10);
      CHECK((qr.q * qr.r - a).norm() < 1e-10 * a.norm());
    } else {
      const CMatrix a = gaussian_matrix<Complex>(stream, m, k);
      const QrThin<Complex> qr = thin_qr(a);
      CHECK((qr.q.adjoint() * qr.q - CMatrix::Identity(k, k)).norm() < 1e-10);
      CHECK((qr.q * qr.r - a).norm() < 1e-10 * a.norm());
    }
  }
}

TEST_CASE("svd of a diagonal matrix") {
  RMatrix a = RMatrix::Zero(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = 1.0;
  const SvdResult<Real> dec = svd(a);
  CHECK(dec.sigma(0) == doctest::Approx(3.0));
  CHECK(dec.sigma(1) == doctest::Approx(1.0));
}

TEST_CASE("svd of zero has zero spectrum") {
  const CMatrix a = CMatrix::Zero(3, 5);
  CHECK(svd(a).sigma.norm() == 0.0);
}

TEST_CASE("svd reconstructs and matches the Hermitian eigenvalue oracle") {
  RngStream stream(13, 0);
  const CMatrix a = gaussian_matrix<Complex>(stream, 6, 9);
  const SvdResult<Complex> dec = svd(a);
  CHECK((dec.u * dec.sigma.asDiagonal() * dec.v.adjoint() - a).norm() < 1e-12 * a.norm());
  for (Index i = 0; i + 1 < dec.sigma.size(); ++i) CHECK(dec.sigma(i) >= dec.sigma(i + 1));
  // Cross-check: sigma^2 are the eigenvalues of a* a.
  const EigResult<Complex> es = hermitian_eig(CMatrix(a.adjoint() * a));
  for (Index i = 0; i < dec.sigma.size(); ++i) {
    CHECK(dec.sigma(i) * dec.sigma(i) ==
          doctest::Approx(es.values(i)).epsilon(1e-9).scale(es.values(0)));
  }
}

TEST_CASE("svd spectrum is adjoint-invariant") {
  RngStream stream(14, 0);
  const CMatrix a = gaussian_matrix<Complex>(stream, 7, 12);
  const RealVector s1 = svd(a).sigma;
  const RealVector s2 = svd(CMatrix(a.adjoint())).sigma;
  CHECK((s1 - s2).norm() < 1e-10 * s1.norm());
}

TEST_CASE("hermitian_eig on small fixed matrices") {
  RMatrix d = RMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = -1.0;
  const EigResult<Real> es = hermitian_eig(d);
  CHECK(es.values(0) == doctest::Approx(2.0));
  CHECK(es.values(1) == doctest::Approx(-1.0));

  const CMatrix eye = CMatrix::Identity(4, 4);
  const EigResult<Complex> es2 = hermitian_eig(eye);
  for (Index i = 0; i < 4; ++i) CHECK(es2.values(i) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig trace and determinant identities") {
  RngStream stream(15, 0);
  const CMatrix g = gaussian_matrix<Complex>(stream, 10, 10);
  const CMatrix s = hermitian_part(g);
  const EigResult<Complex> es = hermitian_eig(s);
  CHECK(std::abs(es.values.sum() - std::real(s.trace())) < 1e-10 * std::abs(s.trace()));
  const CMatrix small = hermitian_part(CMatrix(gaussian_matrix<Complex>(stream, 5, 5)));
  const EigResult<Complex> es2 = hermitian_eig(small);
  const double det_prod = es2.values.prod();
  const Complex det = small.determinant();
  CHECK(std::abs(det_prod - std::real(det)) < 1e-8 * std::max(1.0, std::abs(det)));
  // Reconstruction from the factors.
  CHECK((es2.vectors * es2.values.asDiagonal() * es2.vectors.adjoint() - small).norm() <
        1e-12 * small.norm());
}

TEST_CASE("hermitian_eig rejects a non-Hermitian matrix") {
  RngStream stream(16, 0);
  const CMatrix g = gaussian_matrix<Complex>(stream, 6, 6);
  CHECK_THROWS_AS(hermitian_eig(g), std::invalid_argument);
}

TEST_CASE("tri_pinv_apply simple cases") {
  const RMatrix eye = RMatrix::Identity(3, 3);
  RngStream stream(17, 0);
  const RMatrix b = gaussian_matrix<Real>(stream, 3, 4);
  CHECK((tri_pinv_apply(eye, b) - b).norm() < 1e-14);

  RMatrix d = RMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 4.0;
  const RMatrix x = tri_pinv_apply(d, RMatrix(RMatrix::Identity(2, 2)));
  CHECK(x(0, 0) == doctest::Approx(0.5));
  CHECK(x(1, 1) == doctest::Approx(0.25));
  CHECK(std::abs(x(0, 1)) + std::abs(x(1, 0)) < 1e-14);
}

TEST_CASE("tri_pinv_apply degenerate diagonal falls back to the pseudoinverse") {
  RMatrix t = RMatrix::Zero(2, 2);
  t(0, 0) = 1.0;
  t(0, 1) = 1.0;
  const RMatrix eye = RMatrix::Identity(2, 2);
  const RMatrix got = tri_pinv_apply(t, eye);
  const RMatrix expected = oracles::dense_pinv(t) * eye;
  CHECK((got - expected).norm() < 1e-8 * std::max(1.0, expected.norm()));
}

TEST_CASE("tri_pinv_apply matches the dense pseudoinverse on well-conditioned input") {
  RngStream stream(18, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Index k = 2 + static_cast<Index>(stream.next_u64() % 8);
    CMatrix t = CMatrix::Zero(k, k);
    for (Index j = 0; j < k; ++j) {
      for (Index i = 0; i <= j; ++i) {
        t(i, j) = Complex(stream.normal(), stream.normal());
      }
      t(j, j) += Complex(3.0 * (std::real(t(j, j)) >= 0 ? 1.0 : -1.0), 0.0);
    }
    const CMatrix b = gaussian_matrix<Complex>(stream, k, 5);
    const CMatrix got = tri_pinv_apply(t, b);
    const CMatrix expected = oracles::dense_pinv(t) * b;
    CHECK((got - expected).norm() < 1e-8 * std::max(1.0, expected.norm()));
  }
}

TEST_CASE("matmul and adjoint basics") {
  RngStream stream(19, 0);
  const CMatrix a = gaussian_matrix<Complex>(stream, 3, 4);
  const CMatrix b = gaussian_matrix<Complex>(stream, 4, 2);
  CHECK((matmul(CMatrix(CMatrix::Identity(3, 3)), a) - a).norm() == 0.0);
  CHECK((matmul(a, CMatrix(CMatrix::Zero(4, 2)))).norm() == 0.0);
  const CMatrix lhs = adjoint(matmul(a, b));
  const CMatrix rhs = matmul(adjoint(b), adjoint(a));
  CHECK((lhs - rhs).norm() < 1e-13 * std::max(1.0, rhs.norm()));
  CHECK((adjoint(adjoint(a)) - a).norm() == 0.0);
  CHECK_THROWS_AS(matmul(a, a), std::invalid_argument);
}
