#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace sketchlr {

using Index = Eigen::Index;
using Real = double;
using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RealVector = Eigen::VectorXd;

template <typename Scalar>
inline constexpr bool is_complex_v = Eigen::NumTraits<Scalar>::IsComplex != 0;

/// Thin orthogonal--triangular factorization A = Q R with Q m-by-k, R k-by-k.
template <typename Scalar>
struct QrThin {
  Matrix<Scalar> q;
  Matrix<Scalar> r;
};

/// Thin SVD A = U diag(sigma) V* with sigma non-increasing.
template <typename Scalar>
struct SvdResult {
  Matrix<Scalar> u;
  RealVector sigma;
  Matrix<Scalar> v;
};

/// Eigendecomposition of a Hermitian matrix, values sorted by descending
/// algebraic value; callers re-sort by magnitude where needed.
template <typename Scalar>
struct EigResult {
  Matrix<Scalar> vectors;
  RealVector values;
};

namespace detail {

inline constexpr double kQrResidualTol = 1e-12;
inline constexpr double kHermitianTol = 1e-8;
inline constexpr double kTriDiagTol = 1e-12;

}  // namespace detail

/// Economy QR of a tall matrix (m >= k). Q keeps exactly k columns; rank
/// deficiency is not pruned here, it is absorbed by the triangular
/// pseudoinverse fallback downstream.
template <typename Scalar>
QrThin<Scalar> thin_qr(const Matrix<Scalar>& a) {
  const Index m = a.rows();
  const Index k = a.cols();
  if (m < k) {
    throw std::invalid_argument("thin_qr: matrix must have rows >= cols");
  }
  Eigen::HouseholderQR<Matrix<Scalar>> qr(a);
  QrThin<Scalar> out;
  out.q = qr.householderQ() * Matrix<Scalar>::Identity(m, k);
  out.r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  return out;
}

/// Full thin SVD. Singular values are non-increasing by construction of the
/// backend solver; ties keep the solver's ordering.
template <typename Scalar>
SvdResult<Scalar> svd(const Matrix<Scalar>& a) {
  Eigen::BDCSVD<Matrix<Scalar>> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult<Scalar> out;
  out.u = dec.matrixU();
  out.sigma = dec.singularValues();
  out.v = dec.matrixV();
  return out;
}

/// Eigendecomposition of a Hermitian matrix. Inputs are allowed to deviate
/// from exact symmetry by 1e-8 relative; the matrix is symmetrized before
/// factorization.
template <typename Scalar>
EigResult<Scalar> hermitian_eig(const Matrix<Scalar>& s) {
  if (s.rows() != s.cols()) {
    throw std::invalid_argument("hermitian_eig: matrix must be square");
  }
  const double asym = (s - s.adjoint()).norm();
  if (asym > detail::kHermitianTol * std::max(1.0, s.norm())) {
    throw std::invalid_argument("hermitian_eig: input is not Hermitian to tolerance");
  }
  const Matrix<Scalar> sym = (s + s.adjoint()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(sym);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  }
  // Solver returns ascending values; flip to descending algebraic order.
  EigResult<Scalar> out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

/// Applies the pseudoinverse of an upper-triangular matrix to b. Uses
/// back-substitution while the diagonal is safely away from zero, and an
/// SVD pseudoinverse with a relative cutoff otherwise.
template <typename Scalar>
Matrix<Scalar> tri_pinv_apply(const Matrix<Scalar>& t, const Matrix<Scalar>& b) {
  const Index k = t.rows();
  if (t.cols() != k) {
    throw std::invalid_argument("tri_pinv_apply: triangular factor must be square");
  }
  if (b.rows() != k) {
    throw std::invalid_argument("tri_pinv_apply: row count of b must match t");
  }
  if (k == 0) {
    return Matrix<Scalar>::Zero(0, b.cols());
  }
  double dmin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  for (Index i = 0; i < k; ++i) {
    const double d = std::abs(t(i, i));
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  if (dmax > 0.0 && dmin > detail::kTriDiagTol * dmax) {
    return t.template triangularView<Eigen::Upper>().solve(b);
  }
  const SvdResult<Scalar> dec = svd(t);
  const double cutoff = detail::kTriDiagTol * (dec.sigma.size() > 0 ? dec.sigma(0) : 0.0);
  RealVector inv = RealVector::Zero(dec.sigma.size());
  for (Index i = 0; i < dec.sigma.size(); ++i) {
    if (dec.sigma(i) > cutoff) inv(i) = 1.0 / dec.sigma(i);
  }
  return dec.v * (inv.asDiagonal() * (dec.u.adjoint() * b));
}

template <typename Scalar>
Matrix<Scalar> matmul(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions do not agree");
  }
  return a * b;
}

template <typename Scalar>
Matrix<Scalar> adjoint(const Matrix<Scalar>& a) {
  return a.adjoint();
}

/// Exact Hermitian part of a square matrix: the result satisfies s == s*
/// bit for bit (upper triangle is authoritative, diagonal forced real).
template <typename Scalar>
Matrix<Scalar> hermitian_part(const Matrix<Scalar>& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermitian_part: matrix must be square");
  }
  const Index n = m.rows();
  Matrix<Scalar> s(n, n);
  using std::conj;
  for (Index j = 0; j < n; ++j) {
    s(j, j) = Scalar(std::real(Scalar(m(j, j))));
    for (Index i = 0; i < j; ++i) {
      const Scalar v = (m(i, j) + conj(Scalar(m(j, i)))) / Scalar(2);
      s(i, j) = v;
      s(j, i) = conj(v);
    }
  }
  return s;
}

}  // namespace sketchlr
