#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "oracles.hpp"
#include "sketchlr/zoo.hpp"

using namespace sketchlr;
using CMatrix = Matrix<Complex>;

namespace {

MatrixSpec spec_of(MatrixKind kind, Index n, Index big_r, std::uint64_t seed = 0) {
  MatrixSpec s;
  s.kind = kind;
  s.n = n;
  s.big_r = big_r;
  s.seed = seed;
  return s;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("polynomial decay matches the printed diagonal") {
  const GeneratedMatrix g = generate(spec_of(MatrixKind::poly_decay_slow, 6, 2));
  const double expected[] = {1.0, 1.0, 0.5, 1.0 / 3.0, 0.25, 0.2};
  for (Index i = 0; i < 6; ++i) {
    CHECK(std::real(g.a(i, i)) == doctest::Approx(expected[i]));
    CHECK(g.sigma(i) == doctest::Approx(expected[i]));
  }
  CHECK(g.a.norm() == doctest::Approx(g.sigma.norm()));
}

TEST_CASE("exponential decay matches the printed diagonal") {
  const GeneratedMatrix g = generate(spec_of(MatrixKind::exp_decay_fast, 4, 1));
  const double expected[] = {1.0, 0.1, 0.01, 0.001};
  for (Index i = 0; i < 4; ++i) {
    CHECK(std::real(g.a(i, i)) == doctest::Approx(expected[i]));
    CHECK(g.sigma(i) == doctest::Approx(expected[i]));
  }
}

TEST_CASE("noiseless low-rank model is an exact projector") {
  const GeneratedMatrix g = generate(spec_of(MatrixKind::low_rank, 5, 2));
  CMatrix expected = CMatrix::Zero(5, 5);
  expected(0, 0) = expected(1, 1) = Complex(1.0, 0.0);
  CHECK((g.a - expected).norm() == 0.0);
  CHECK(g.sigma(0) == 1.0);
  CHECK(g.sigma(1) == 1.0);
  CHECK(g.sigma(2) == 0.0);
}

TEST_CASE("noise models are exactly Hermitian and reproducible per seed") {
  const MatrixSpec spec = spec_of(MatrixKind::low_rank_med_noise, 60, 10, 5);
  const GeneratedMatrix g1 = generate(spec);
  const GeneratedMatrix g2 = generate(spec);
  CHECK((g1.a - g1.a.adjoint()).norm() == 0.0);
  CHECK((g1.a - g2.a).norm() == 0.0);
  // Spectrum agrees with an independent SVD of the exemplar.
  const RealVector direct = oracles::dense_singular_values(g1.a);
  CHECK((g1.sigma - direct).norm() < 1e-10 * direct.norm());
  // Different seed, different exemplar.
  const GeneratedMatrix g3 = generate(spec_of(MatrixKind::low_rank_med_noise, 60, 10, 6));
  CHECK((g1.a - g3.a).norm() > 0.0);
}

TEST_CASE("psd exemplar is Hermitian psd with the clamped spectrum") {
  const GeneratedMatrix g = psd_exemplar(spec_of(MatrixKind::low_rank_hi_noise, 40, 8, 3));
  CHECK((g.a - g.a.adjoint()).norm() == 0.0);
  CHECK((g.sigma.array() >= 0.0).all());
  const RealVector direct = oracles::dense_singular_values(g.a);
  CHECK((g.sigma - direct).norm() < 1e-8 * std::max(1.0, direct.norm()));
}

TEST_CASE("generate rejects invalid specs") {
  CHECK_THROWS_AS(generate(spec_of(MatrixKind::poly_decay_slow, 4, 5)), std::invalid_argument);
  CHECK_THROWS_AS(generate(spec_of(MatrixKind::exp_decay_fast, 4, 0)), std::invalid_argument);
}

TEST_CASE("tail energy basics") {
  RealVector s(3);
  s << 3.0, 2.0, 1.0;
  CHECK(tail_energy(s, 1) == doctest::Approx(std::sqrt(14.0)));
  RealVector t(4);
  t << 1.0, 1.0, 0.0, 0.0;
  CHECK(tail_energy(t, 3) == 0.0);
  CHECK(tail_energy(t, 9) == 0.0);
  CHECK_THROWS_AS(tail_energy(t, 0), std::invalid_argument);
}

TEST_CASE("tail energy matches brute force on the analytic spectrum") {
  const GeneratedMatrix g = generate(spec_of(MatrixKind::poly_decay_slow, 1000, 10));
  CHECK(tail_energy(g.sigma, 6) ==
        doctest::Approx(oracles::brute_force_tail(g.sigma, 6)).epsilon(1e-12));
  // tau_1 = ||A||_F and the sequence is non-increasing in j.
  CHECK(tail_energy(g.sigma, 1) == doctest::Approx(g.a.norm()));
  for (Index j = 1; j < 20; ++j) {
    CHECK(tail_energy(g.sigma, j) + 1e-15 >= tail_energy(g.sigma, j + 1));
  }
}

TEST_CASE("relative error for trivial approximations") {
  const GeneratedMatrix g = generate(spec_of(MatrixKind::exp_decay_slow, 50, 5));
  const Index r = 3;
  // Best rank-r truncation scores zero.
  CMatrix best = CMatrix::Zero(50, 50);
  for (Index i = 0; i < r; ++i) best(i, i) = g.a(i, i);
  CHECK(relative_error(g.a, best, r, g.sigma).value == doctest::Approx(0.0).epsilon(1e-10));
  // The zero approximation scores |A|/tau_{r+1} - 1.
  const double expected = g.a.norm() / tail_energy(g.sigma, r + 1) - 1.0;
  CHECK(relative_error(g.a, CMatrix(CMatrix::Zero(50, 50)), r, g.sigma).value ==
        doctest::Approx(expected));
}

TEST_CASE("relative error flags an exactly rank-deficient denominator") {
  const GeneratedMatrix g = generate(spec_of(MatrixKind::low_rank, 20, 4));
  const RelativeError err = relative_error(g.a, g.a, 5, g.sigma);
  CHECK(err.tail_is_zero);
  CHECK(std::isinf(err.value));
}

TEST_CASE("factored and dense error paths agree") {
  RngStream stream(31, 0);
  const CMatrix a = gaussian_matrix<Complex>(stream, 50, 40);
  const RealVector sigma = oracles::dense_singular_values(a);
  const Index r = 4;

  FixedRankSvd<Complex> f;
  const CMatrix left = gaussian_matrix<Complex>(stream, 50, r);
  const CMatrix right = gaussian_matrix<Complex>(stream, 40, r);
  f.q = thin_qr(left).q;
  f.v = thin_qr(right).q;
  f.sigma = RealVector::LinSpaced(r, 3.0, 1.0);
  const RelativeError dense = relative_error(a, CMatrix(f.dense()), r, sigma);
  const RelativeError fact = relative_error(a, f, r, sigma);
  CHECK(fact.value == doctest::Approx(dense.value).epsilon(1e-10));

  EigApprox<Complex> e;
  const CMatrix sq = gaussian_matrix<Complex>(stream, 40, 40);
  const CMatrix asym = hermitian_part(CMatrix(gaussian_matrix<Complex>(stream, 40, 40)));
  e.u = thin_qr(CMatrix(sq.leftCols(r))).q;
  e.d = RealVector::LinSpaced(r, 2.0, -1.0);
  const CMatrix a2 = asym;
  const RealVector sigma2 = oracles::dense_singular_values(a2);
  const RelativeError dense2 = relative_error(a2, CMatrix(e.dense()), r, sigma2);
  const RelativeError fact2 = relative_error(a2, e, r, sigma2);
  CHECK(fact2.value == doctest::Approx(dense2.value).epsilon(1e-10));

  RankKApprox<Complex> qx;
  qx.q = f.q;
  qx.x = gaussian_matrix<Complex>(stream, r, 40);
  const RelativeError dense3 = relative_error(a, CMatrix(qx.dense()), r, sigma);
  const RelativeError fact3 = relative_error(a, qx, r, sigma);
  CHECK(fact3.value == doctest::Approx(dense3.value).epsilon(1e-10));
}

TEST_CASE("matrix file round trip is exact") {
  RngStream stream(32, 0);
  const std::string path = temp_path("sketchlr_io_roundtrip.mat");
  {
    const CMatrix m = gaussian_matrix<Complex>(stream, 7, 5);
    save_matrix_file(path, m);
    const LoadedMatrix back = load_matrix_file(path);
    REQUIRE(std::holds_alternative<CMatrix>(back));
    CHECK((std::get<CMatrix>(back) - m).norm() == 0.0);
  }
  {
    const Matrix<Real> m = gaussian_matrix<Real>(stream, 4, 9);
    save_matrix_file(path, m);
    const LoadedMatrix back = load_matrix_file(path);
    REQUIRE(std::holds_alternative<Matrix<Real>>(back));
    CHECK((std::get<Matrix<Real>>(back) - m).norm() == 0.0);
  }
  std::remove(path.c_str());
}

TEST_CASE("matrix file rejects malformed input") {
  const std::string path = temp_path("sketchlr_io_bad.mat");
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write("NOTMAGIC", 8);
  }
  CHECK_THROWS_AS(load_matrix_file(path), MatrixFileError);
  {
    // Valid header for a 2x2 real matrix, but only one payload value.
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(matio::kMagic, 8);
    const std::uint32_t tag = matio::kTagReal;
    const std::uint64_t rows = 2, cols = 2;
    out.write(reinterpret_cast<const char*>(&tag), 4);
    out.write(reinterpret_cast<const char*>(&rows), 8);
    out.write(reinterpret_cast<const char*>(&cols), 8);
    const double v = 1.5;
    out.write(reinterpret_cast<const char*>(&v), 8);
  }
  try {
    load_matrix_file(path);
    CHECK(false);
  } catch (const MatrixFileError& e) {
    CHECK(e.byte_offset() == 28 + 8);
  }
  std::remove(path.c_str());
}

TEST_CASE("hand-assembled complex fixture loads bit-exactly") {
  const std::string path = temp_path("sketchlr_io_fixture.mat");
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(matio::kMagic, 8);
    const std::uint32_t tag = matio::kTagComplex;
    const std::uint64_t rows = 2, cols = 2;
    out.write(reinterpret_cast<const char*>(&tag), 4);
    out.write(reinterpret_cast<const char*>(&rows), 8);
    out.write(reinterpret_cast<const char*>(&cols), 8);
    // Row-major payload: (1+2i, 3-4i; 0.5+0i, -1+0.25i)
    const double payload[] = {1.0, 2.0, 3.0, -4.0, 0.5, 0.0, -1.0, 0.25};
    out.write(reinterpret_cast<const char*>(payload), sizeof(payload));
  }
  const LoadedMatrix back = load_matrix_file(path);
  REQUIRE(std::holds_alternative<CMatrix>(back));
  const CMatrix m = std::get<CMatrix>(back);
  CHECK(m(0, 0) == Complex(1.0, 2.0));
  CHECK(m(0, 1) == Complex(3.0, -4.0));
  CHECK(m(1, 0) == Complex(0.5, 0.0));
  CHECK(m(1, 1) == Complex(-1.0, 0.25));
  std::remove(path.c_str());
}
