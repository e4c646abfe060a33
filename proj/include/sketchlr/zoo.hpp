#pragma once

#include <string>

#include "sketchlr/approx.hpp"
#include "sketchlr/kernels.hpp"
#include "sketchlr/matrix_io.hpp"
#include "sketchlr/randgen.hpp"

namespace sketchlr {

enum class MatrixKind {
  low_rank,
  low_rank_med_noise,
  low_rank_hi_noise,
  poly_decay_slow,
  poly_decay_fast,
  exp_decay_slow,
  exp_decay_fast,
  file,
};

/// Specification of a synthetic input matrix. The kind pins the model
/// constants: noise level gamma in {0, 1e-2, 1}, polynomial rate p in
/// {1, 2}, exponential rate q in {0.25, 1}.
struct MatrixSpec {
  MatrixKind kind = MatrixKind::exp_decay_fast;
  Index n = 1000;
  Index big_r = 10;  // effective rank of the significant part
  std::uint64_t seed = 0;
  std::string path;  // used when kind == file
};

inline const char* matrix_kind_name(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::low_rank: return "low_rank";
    case MatrixKind::low_rank_med_noise: return "low_rank_med_noise";
    case MatrixKind::low_rank_hi_noise: return "low_rank_hi_noise";
    case MatrixKind::poly_decay_slow: return "poly_decay_slow";
    case MatrixKind::poly_decay_fast: return "poly_decay_fast";
    case MatrixKind::exp_decay_slow: return "exp_decay_slow";
    case MatrixKind::exp_decay_fast: return "exp_decay_fast";
    case MatrixKind::file: return "file";
  }
  return "unknown";
}

/// A generated input together with its exact singular spectrum. The
/// spectrum is analytic for the diagonal models and computed once from the
/// Hermitian exemplar for the noise models.
struct GeneratedMatrix {
  Matrix<Complex> a;
  RealVector sigma;  // non-increasing
};

namespace detail {

inline double noise_gamma(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::low_rank: return 0.0;
    case MatrixKind::low_rank_med_noise: return 1e-2;
    case MatrixKind::low_rank_hi_noise: return 1.0;
    default: throw std::invalid_argument("noise_gamma: not a noise model");
  }
}

inline GeneratedMatrix diagonal_model(const MatrixSpec& spec, bool poly, double rate) {
  const Index n = spec.n;
  const Index big_r = spec.big_r;
  RealVector diag(n);
  for (Index j = 0; j < big_r; ++j) diag(j) = 1.0;
  for (Index j = big_r; j < n; ++j) {
    const double i = static_cast<double>(j - big_r + 1);
    diag(j) = poly ? std::pow(i + 1.0, -rate) : std::pow(10.0, -rate * i);
  }
  GeneratedMatrix out;
  out.a = Matrix<Complex>::Zero(n, n);
  for (Index j = 0; j < n; ++j) out.a(j, j) = Complex(diag(j), 0.0);
  out.sigma = diag;
  return out;
}

inline GeneratedMatrix noise_model(const MatrixSpec& spec) {
  const Index n = spec.n;
  const Index big_r = spec.big_r;
  const double gamma = noise_gamma(spec.kind);
  GeneratedMatrix out;
  out.a = Matrix<Complex>::Zero(n, n);
  for (Index j = 0; j < big_r; ++j) out.a(j, j) = Complex(1.0, 0.0);
  if (gamma == 0.0) {
    out.sigma = RealVector::Zero(n);
    out.sigma.head(big_r).setOnes();
    return out;
  }
  // Single exemplar per seed: the noise draw is fixed by the spec seed.
  RngStream stream(spec.seed, 0x5eed);
  const Matrix<Complex> g = gaussian_matrix<Complex>(stream, n, n);
  const double scale =
      std::sqrt(gamma * static_cast<double>(big_r) / (2.0 * static_cast<double>(n) * n));
  out.a += scale * (g + g.adjoint());
  // Hermitian by construction, so the spectrum comes from an
  // eigendecomposition: singular values are the |eigenvalues|, sorted.
  const EigResult<Complex> es = hermitian_eig(out.a);
  out.sigma = es.values.cwiseAbs();
  std::sort(out.sigma.data(), out.sigma.data() + out.sigma.size(), std::greater<double>());
  return out;
}

}  // namespace detail

/// Loads a user-supplied matrix file, promoting real entries to complex,
/// and computes its spectrum once for the error metric denominator.
inline GeneratedMatrix load_generated_from_file(const std::string& path) {
  GeneratedMatrix out;
  const LoadedMatrix loaded = load_matrix_file(path);
  if (std::holds_alternative<Matrix<Real>>(loaded)) {
    out.a = std::get<Matrix<Real>>(loaded).cast<Complex>();
  } else {
    out.a = std::get<Matrix<Complex>>(loaded);
  }
  out.sigma = svd(out.a).sigma;
  return out;
}

/// Builds the input matrix described by the spec. Diagonal models carry
/// their analytic spectrum; noise models are Hermitian exemplars whose
/// spectrum is computed once and cached in the result.
inline GeneratedMatrix generate(const MatrixSpec& spec) {
  if (spec.kind != MatrixKind::file) {
    if (spec.big_r < 1 || spec.n < spec.big_r) {
      throw std::invalid_argument("generate: need n >= R >= 1");
    }
  }
  switch (spec.kind) {
    case MatrixKind::low_rank:
    case MatrixKind::low_rank_med_noise:
    case MatrixKind::low_rank_hi_noise:
      return detail::noise_model(spec);
    case MatrixKind::poly_decay_slow:
      return detail::diagonal_model(spec, true, 1.0);
    case MatrixKind::poly_decay_fast:
      return detail::diagonal_model(spec, true, 2.0);
    case MatrixKind::exp_decay_slow:
      return detail::diagonal_model(spec, false, 0.25);
    case MatrixKind::exp_decay_fast:
      return detail::diagonal_model(spec, false, 1.0);
    case MatrixKind::file:
      return load_generated_from_file(spec.path);
  }
  throw std::invalid_argument("generate: unknown matrix kind");
}

/// Psd companion of a Hermitian noise exemplar: eigendecompose and clamp
/// the negative eigenvalues to zero. The spectrum is the clamped eigenvalue
/// list, sorted.
inline GeneratedMatrix psd_exemplar(const MatrixSpec& spec) {
  const GeneratedMatrix herm = generate(spec);
  const EigResult<Complex> es = hermitian_eig(herm.a);
  const RealVector clamped = es.values.cwiseMax(0.0);
  GeneratedMatrix out;
  out.a = es.vectors * clamped.asDiagonal() * es.vectors.adjoint();
  out.a = hermitian_part(out.a);
  out.sigma = clamped;  // descending already: clamp preserves the order
  return out;
}

/// tau_j = sqrt(sum_{i >= j} sigma_i^2), the Frobenius error of a best
/// rank-(j-1) approximation; j is 1-indexed and j past the end returns 0.
inline double tail_energy(const RealVector& sigma, Index j) {
  if (j < 1) throw std::invalid_argument("tail_energy: index must be >= 1");
  double acc = 0.0;
  for (Index i = sigma.size() - 1; i >= j - 1; --i) acc += sigma(i) * sigma(i);
  return std::sqrt(acc);
}

/// Relative error ||A - Ahat||_F / tau_{r+1}(A) - 1. The flag marks the
/// degenerate case tau_{r+1} = 0 (input already rank <= r), where the
/// metric is undefined and the value reported is infinity.
struct RelativeError {
  double value = 0.0;
  bool tail_is_zero = false;
};

namespace detail {

inline RelativeError make_relative_error(double err_sq, const RealVector& sigma, Index r) {
  const double tau = tail_energy(sigma, r + 1);
  if (tau == 0.0) {
    return {std::numeric_limits<double>::infinity(), true};
  }
  return {std::sqrt(std::max(err_sq, 0.0)) / tau - 1.0, false};
}

}  // namespace detail

/// Dense path: materializes the residual.
inline RelativeError relative_error(const Matrix<Complex>& a, const Matrix<Complex>& approx,
                                    Index r, const RealVector& sigma) {
  const double err = (a - approx).norm();
  return detail::make_relative_error(err * err, sigma, r);
}

/// Factored path for q * diag(sigma_f) * v^*: expands the squared norm as
/// ||A||^2 - 2 Re<A, Ahat> + sum sigma_f^2 without forming the product.
inline RelativeError relative_error(const Matrix<Complex>& a, const FixedRankSvd<Complex>& f,
                                    Index r, const RealVector& sigma) {
  const Matrix<Complex> qa_v = (f.q.adjoint() * a) * f.v;  // r x r
  double inner = 0.0;
  for (Index i = 0; i < f.sigma.size(); ++i) {
    inner += f.sigma(i) * std::real(qa_v(i, i));
  }
  const double err_sq = a.squaredNorm() - 2.0 * inner + f.sigma.squaredNorm();
  return detail::make_relative_error(err_sq, sigma, r);
}

/// Factored path for u * diag(d) * u^*.
inline RelativeError relative_error(const Matrix<Complex>& a, const EigApprox<Complex>& f,
                                    Index r, const RealVector& sigma) {
  const Matrix<Complex> ua_u = (f.u.adjoint() * a) * f.u;
  double inner = 0.0;
  for (Index i = 0; i < f.d.size(); ++i) {
    inner += f.d(i) * std::real(ua_u(i, i));
  }
  const double err_sq = a.squaredNorm() - 2.0 * inner + f.d.squaredNorm();
  return detail::make_relative_error(err_sq, sigma, r);
}

/// Factored path for q * x with q orthonormal: ||A - qx||^2 =
/// ||A||^2 - 2 Re<q^* A, x> + ||x||^2.
inline RelativeError relative_error(const Matrix<Complex>& a, const RankKApprox<Complex>& f,
                                    Index r, const RealVector& sigma) {
  const Matrix<Complex> qa = f.q.adjoint() * a;
  const double inner = std::real(qa.conjugate().cwiseProduct(f.x).sum());
  const double err_sq = a.squaredNorm() - 2.0 * inner + f.x.squaredNorm();
  return detail::make_relative_error(err_sq, sigma, r);
}

}  // namespace sketchlr
