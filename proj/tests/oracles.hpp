// Test-side oracles, kept independent of the library's factorization paths:
// everything here goes through Eigen's Jacobi SVD or direct arithmetic.
#pragma once

#include <Eigen/Dense>

#include "sketchlr/kernels.hpp"

namespace oracles {

using sketchlr::Complex;
using sketchlr::Index;
using sketchlr::Matrix;
using sketchlr::RealVector;

template <typename Scalar>
Matrix<Scalar> dense_pinv(const Matrix<Scalar>& m, double rel_cutoff = 1e-12) {
  Eigen::JacobiSVD<Matrix<Scalar>> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = dec.singularValues();
  const double cutoff = rel_cutoff * (sv.size() > 0 ? sv(0) : 0.0);
  RealVector inv = RealVector::Zero(sv.size());
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  }
  return dec.matrixV() * inv.asDiagonal() * dec.matrixU().adjoint();
}

template <typename Scalar>
Matrix<Scalar> dense_truncate(const Matrix<Scalar>& m, Index r) {
  Eigen::JacobiSVD<Matrix<Scalar>> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return dec.matrixU().leftCols(r) * dec.singularValues().head(r).asDiagonal() *
         dec.matrixV().leftCols(r).adjoint();
}

template <typename Scalar>
RealVector dense_singular_values(const Matrix<Scalar>& m) {
  Eigen::JacobiSVD<Matrix<Scalar>> dec(m);
  return dec.singularValues();
}

// Eigendecomposition truncation of a Hermitian matrix keeping r eigenvalues
// selected by the comparator, rebuilt densely.
template <typename Scalar, typename Better>
Matrix<Scalar> dense_eig_truncate(const Matrix<Scalar>& m, Index r, Better better,
                                  bool clamp_negative) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es((m + m.adjoint()) / Scalar(2));
  const RealVector& vals = es.eigenvalues();
  std::vector<Index> order(static_cast<std::size_t>(vals.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return better(vals(a), vals(b)); });
  Matrix<Scalar> out = Matrix<Scalar>::Zero(m.rows(), m.cols());
  for (Index i = 0; i < r; ++i) {
    const Index j = order[static_cast<std::size_t>(i)];
    double v = vals(j);
    if (clamp_negative && v < 0.0) v = 0.0;
    out += v * (es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint());
  }
  return out;
}

// Projection of a square matrix onto the psd cone, densely.
template <typename Scalar>
Matrix<Scalar> dense_psd_projection(const Matrix<Scalar>& m) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es((m + m.adjoint()) / Scalar(2));
  const RealVector clamped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().adjoint();
}

inline double brute_force_tail(const RealVector& sigma, Index j) {
  double acc = 0.0;
  for (Index i = j - 1; i < sigma.size(); ++i) acc += sigma(i) * sigma(i);
  return std::sqrt(acc);
}

}  // namespace oracles
