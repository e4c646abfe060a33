#pragma once

#include <cstdint>
#include <utility>

#include "sketchlr/kernels.hpp"
#include "sketchlr/params.hpp"
#include "sketchlr/randgen.hpp"

namespace sketchlr {

namespace detail {
struct SketchAccess;
}

struct SketchParams {
  Index k = 0;  // range-sketch size (columns of the right test matrix)
  Index l = 0;  // co-range-sketch size (rows of the left test matrix)
  TestMatrixKind kind = TestMatrixKind::gaussian;
};

/// Streaming summary of one input matrix: test matrices (omega, psi) and the
/// sketch parts y = A omega, w = psi A. The test matrices are private to the
/// reconstruction routines; users interact through init, linear updates, and
/// the approximation functions.
template <typename Scalar>
class SketchState {
 public:
  SketchState(const Matrix<Scalar>& a, const SketchParams& params, RngStream& stream)
      : params_(params), m_(a.rows()), n_(a.cols()) {
    validate_params(params, m_, n_);
    draw_test_matrices(stream);
    y_ = a * omega_;
    w_ = psi_ * a;
  }

  /// Applies the turnstile update A <- theta A + eta H to the sketch:
  /// y <- theta y + eta H omega and w <- theta w + eta psi H. The test
  /// matrices never change.
  void linear_update(const Matrix<Scalar>& h, Scalar theta, Scalar eta) {
    if (h.rows() != m_ || h.cols() != n_) {
      throw std::invalid_argument("linear_update: update matrix has wrong shape");
    }
    y_ = theta * y_ + eta * (h * omega_);
    w_ = theta * w_ + eta * (psi_ * h);
  }

  Index rows() const { return m_; }
  Index cols() const { return n_; }
  const SketchParams& params() const { return params_; }

  static void validate_params(const SketchParams& p, Index m, Index n) {
    if (p.k < 1 || p.l < 1) {
      throw std::invalid_argument("sketch: sizes k and l must be positive");
    }
    if (p.k > p.l) {
      throw std::invalid_argument("sketch: need k <= l");
    }
    if (p.k > n || p.l > m) {
      throw std::invalid_argument("sketch: need k <= n and l <= m");
    }
  }

 private:
  friend struct detail::SketchAccess;

  void draw_test_matrices(RngStream& stream) {
    switch (params_.kind) {
      case TestMatrixKind::gaussian:
        omega_ = gaussian_matrix<Scalar>(stream, n_, params_.k);
        psi_ = gaussian_matrix<Scalar>(stream, params_.l, m_);
        break;
      case TestMatrixKind::orthonormal: {
        omega_ = orthonormalize(gaussian_matrix<Scalar>(stream, n_, params_.k));
        const Matrix<Scalar> psi_adj = gaussian_matrix<Scalar>(stream, params_.l, m_).adjoint();
        psi_ = orthonormalize(psi_adj).adjoint();
        break;
      }
      case TestMatrixKind::rademacher:
        omega_ = rademacher_matrix<Scalar>(stream, n_, params_.k);
        psi_ = rademacher_matrix<Scalar>(stream, params_.l, m_);
        break;
      case TestMatrixKind::srft:
        omega_ = srft_matrix<Scalar>(stream, n_, params_.k);
        psi_ = srft_matrix<Scalar>(stream, m_, params_.l).adjoint();
        break;
    }
  }

  SketchParams params_;
  Index m_ = 0;
  Index n_ = 0;
  Matrix<Scalar> omega_;  // n x k
  Matrix<Scalar> psi_;    // l x m
  Matrix<Scalar> y_;      // m x k
  Matrix<Scalar> w_;      // l x n
};

/// Three-part sketch: Gaussian (psi, omega) with the redundant l = k, plus a
/// structured (phi, xi) pair and the core sketch z = phi A xi.
template <typename Scalar>
class ExtendedSketchState {
 public:
  ExtendedSketchState(const Matrix<Scalar>& a, Index r, Index k, Index s, RngStream& stream)
      : r_(r), k_(k), s_(s), m_(a.rows()), n_(a.cols()) {
    if (r < 1 || r > k || k > s || s > std::min(m_, n_)) {
      throw std::invalid_argument("extended sketch: need 1 <= r <= k <= s <= min(m, n)");
    }
    psi_ = gaussian_matrix<Scalar>(stream, k_, m_);
    omega_ = gaussian_matrix<Scalar>(stream, n_, k_);
    phi_ = srft_matrix<Scalar>(stream, m_, s_).adjoint();
    xi_ = srft_matrix<Scalar>(stream, n_, s_);
    w_ = psi_ * a;
    y_ = a * omega_;
    z_ = phi_ * a * xi_;
  }

  /// Componentwise linear update; z <- theta z + eta phi H xi.
  void linear_update(const Matrix<Scalar>& h, Scalar theta, Scalar eta) {
    if (h.rows() != m_ || h.cols() != n_) {
      throw std::invalid_argument("linear_update: update matrix has wrong shape");
    }
    w_ = theta * w_ + eta * (psi_ * h);
    y_ = theta * y_ + eta * (h * omega_);
    z_ = theta * z_ + eta * (phi_ * h * xi_);
  }

  Index rows() const { return m_; }
  Index cols() const { return n_; }
  Index target_rank() const { return r_; }
  Index k() const { return k_; }
  Index s() const { return s_; }

 private:
  friend struct detail::SketchAccess;

  Index r_, k_, s_, m_, n_;
  Matrix<Scalar> psi_;    // k x m
  Matrix<Scalar> omega_;  // n x k
  Matrix<Scalar> phi_;    // s x m
  Matrix<Scalar> xi_;     // n x s
  Matrix<Scalar> w_;      // k x n
  Matrix<Scalar> y_;      // m x k
  Matrix<Scalar> z_;      // s x s
};

namespace detail {

/// Library-internal access to the sketch private state; used by the
/// reconstruction routines and white-box tests only.
struct SketchAccess {
  template <typename S>
  static const Matrix<S>& omega(const SketchState<S>& st) { return st.omega_; }
  template <typename S>
  static const Matrix<S>& psi(const SketchState<S>& st) { return st.psi_; }
  template <typename S>
  static const Matrix<S>& y(const SketchState<S>& st) { return st.y_; }
  template <typename S>
  static const Matrix<S>& w(const SketchState<S>& st) { return st.w_; }

  template <typename S>
  static const Matrix<S>& psi(const ExtendedSketchState<S>& st) { return st.psi_; }
  template <typename S>
  static const Matrix<S>& omega(const ExtendedSketchState<S>& st) { return st.omega_; }
  template <typename S>
  static const Matrix<S>& phi(const ExtendedSketchState<S>& st) { return st.phi_; }
  template <typename S>
  static const Matrix<S>& xi(const ExtendedSketchState<S>& st) { return st.xi_; }
  template <typename S>
  static const Matrix<S>& w(const ExtendedSketchState<S>& st) { return st.w_; }
  template <typename S>
  static const Matrix<S>& y(const ExtendedSketchState<S>& st) { return st.y_; }
  template <typename S>
  static const Matrix<S>& z(const ExtendedSketchState<S>& st) { return st.z_; }

  // Test-only: rebuild a sketch around externally chosen test matrices.
  template <typename S>
  static void set_test_matrices(ExtendedSketchState<S>& st, Matrix<S> phi, Matrix<S> xi,
                                const Matrix<S>& a) {
    st.phi_ = std::move(phi);
    st.xi_ = std::move(xi);
    st.z_ = st.phi_ * a * st.xi_;
  }
};

}  // namespace detail

/// Scalar storage for the simple sketch including its test matrices:
/// (k + l)(m + n).
inline std::int64_t sketch_storage_cost(Index k, Index l, Index m, Index n) {
  if (k < 1 || l < 1) {
    throw std::invalid_argument("sketch_storage_cost: sizes must be positive");
  }
  return static_cast<std::int64_t>(k + l) * (m + n);
}

/// Scalar storage for the three-part sketch: (2k + 1)(m + n) + s(s + 2).
inline std::int64_t extended_storage_cost(Index k, Index s, Index m, Index n) {
  if (k < 1 || s < 1) {
    throw std::invalid_argument("extended_storage_cost: sizes must be positive");
  }
  return static_cast<std::int64_t>(2 * k + 1) * (m + n) +
         static_cast<std::int64_t>(s) * (s + 2);
}

}  // namespace sketchlr
