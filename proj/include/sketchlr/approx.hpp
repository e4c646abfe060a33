#pragma once

#include "sketchlr/kernels.hpp"
#include "sketchlr/sketch.hpp"

namespace sketchlr {

/// Rank-k approximation in product form q * x with q orthonormal.
template <typename Scalar>
struct RankKApprox {
  Matrix<Scalar> q;  // m x k, orthonormal columns
  Matrix<Scalar> x;  // k x n
  Matrix<Scalar> dense() const { return q * x; }
};

/// Conjugate symmetric approximation u * s * u^* with s Hermitian.
template <typename Scalar>
struct SymApprox {
  Matrix<Scalar> u;  // n x 2k, orthonormal columns
  Matrix<Scalar> s;  // 2k x 2k, exactly Hermitian
  Matrix<Scalar> dense() const { return u * s * u.adjoint(); }
};

/// Approximate eigenvalue decomposition u * diag(d) * u^*.
template <typename Scalar>
struct EigApprox {
  Matrix<Scalar> u;  // n x q, orthonormal columns
  RealVector d;      // length q; nonnegative for the psd variants
  Matrix<Scalar> dense() const { return u * d.asDiagonal() * u.adjoint(); }
};

/// Fixed-rank approximation in truncated SVD form q * diag(sigma) * v^*.
template <typename Scalar>
struct FixedRankSvd {
  Matrix<Scalar> q;  // m x r, orthonormal columns
  RealVector sigma;  // length r, nonnegative non-increasing
  Matrix<Scalar> v;  // n x r, orthonormal columns
  Matrix<Scalar> dense() const { return q * sigma.asDiagonal() * v.adjoint(); }
};

namespace detail {

using Access = SketchAccess;

// Rewrites left * diag(sigma) * right^* (right orthonormal, left arbitrary)
// in SVD form by a QR of the left factor followed by a small SVD.
template <typename Scalar>
FixedRankSvd<Scalar> refactor_svd(const Matrix<Scalar>& left, const RealVector& sigma,
                                  const Matrix<Scalar>& right) {
  const QrThin<Scalar> lq = thin_qr(left);
  const SvdResult<Scalar> core = svd(Matrix<Scalar>(lq.r * sigma.asDiagonal()));
  FixedRankSvd<Scalar> out;
  out.q = lq.q * core.u;
  out.sigma = core.sigma;
  out.v = right * core.v;
  return out;
}

// As above with both outer factors arbitrary: QR each side, SVD the core.
template <typename Scalar>
FixedRankSvd<Scalar> refactor_svd_two_sided(const Matrix<Scalar>& left, const RealVector& sigma,
                                            const Matrix<Scalar>& right) {
  const QrThin<Scalar> lq = thin_qr(left);
  const QrThin<Scalar> rq = thin_qr(right);
  const SvdResult<Scalar> core =
      svd(Matrix<Scalar>(lq.r * sigma.asDiagonal() * rq.r.adjoint()));
  FixedRankSvd<Scalar> out;
  out.q = lq.q * core.u;
  out.sigma = core.sigma;
  out.v = rq.q * core.v;
  return out;
}

}  // namespace detail

/// Rank-k reconstruction from the sketch by the numerically stable route:
/// Q from a thin QR of y, then x = T^+ (U^* w) where psi Q = U T. Never
/// forms the ill-conditioned normal equations.
template <typename Scalar>
RankKApprox<Scalar> low_rank(const SketchState<Scalar>& st) {
  const Matrix<Scalar>& y = detail::Access::y(st);
  const Matrix<Scalar>& w = detail::Access::w(st);
  const Matrix<Scalar>& psi = detail::Access::psi(st);
  RankKApprox<Scalar> out;
  out.q = thin_qr(y).q;
  const QrThin<Scalar> ut = thin_qr(Matrix<Scalar>(psi * out.q));
  out.x = tri_pinv_apply(ut.r, Matrix<Scalar>(ut.q.adjoint() * w));
  return out;
}

/// Rank-revealing variant: orthonormalizes y, which may keep only
/// q <= k columns, then solves the least-squares problem for x directly.
template <typename Scalar>
RankKApprox<Scalar> simple_low_rank(const SketchState<Scalar>& st) {
  const Matrix<Scalar>& y = detail::Access::y(st);
  const Matrix<Scalar>& w = detail::Access::w(st);
  const Matrix<Scalar>& psi = detail::Access::psi(st);
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> rr(y);
  const Index rank = rr.rank();
  RankKApprox<Scalar> out;
  if (rank == 0) {
    out.q = Matrix<Scalar>::Zero(y.rows(), 0);
    out.x = Matrix<Scalar>::Zero(0, w.cols());
    return out;
  }
  out.q = rr.householderQ() * Matrix<Scalar>::Identity(y.rows(), rank);
  const Matrix<Scalar> psi_q = psi * out.q;
  out.x = Eigen::ColPivHouseholderQR<Matrix<Scalar>>(psi_q).solve(w);
  return out;
}

/// Conjugate symmetric reconstruction u s u^*: concatenate [q, x^*], take a
/// thin QR, and symmetrize the small core.
template <typename Scalar>
SymApprox<Scalar> low_rank_sym(const SketchState<Scalar>& st) {
  if (st.rows() != st.cols()) {
    throw std::invalid_argument("low_rank_sym: sketched matrix must be square");
  }
  const RankKApprox<Scalar> qx = low_rank(st);
  const Index k = qx.q.cols();
  Matrix<Scalar> concat(st.rows(), 2 * k);
  concat << qx.q, qx.x.adjoint();
  const QrThin<Scalar> ut = thin_qr(concat);
  const Matrix<Scalar> t1 = ut.r.leftCols(k);
  const Matrix<Scalar> t2 = ut.r.rightCols(k);
  SymApprox<Scalar> out;
  out.u = ut.q;
  out.s = hermitian_part(Matrix<Scalar>(t1 * t2.adjoint()));
  return out;
}

/// Positive-semidefinite reconstruction: eigendecompose the symmetric core,
/// zero out the negative eigenvalues, consolidate the orthonormal factors.
template <typename Scalar>
EigApprox<Scalar> low_rank_psd(const SketchState<Scalar>& st) {
  const SymApprox<Scalar> sym = low_rank_sym(st);
  const EigResult<Scalar> es = hermitian_eig(sym.s);
  EigApprox<Scalar> out;
  out.u = sym.u * es.vectors;
  out.d = es.values.cwiseMax(0.0);
  return out;
}

/// Fixed-rank approximation Q [[x]]_r: truncate the SVD of the small factor
/// and consolidate the orthonormal factor.
template <typename Scalar>
FixedRankSvd<Scalar> fixed_rank(const SketchState<Scalar>& st, Index r) {
  if (r < 1 || r > st.params().k) {
    throw std::invalid_argument("fixed_rank: need 1 <= r <= k");
  }
  const RankKApprox<Scalar> qx = low_rank(st);
  const SvdResult<Scalar> dec = svd(qx.x);
  FixedRankSvd<Scalar> out;
  out.q = qx.q * dec.u.leftCols(r);
  out.sigma = dec.sigma.head(r);
  out.v = dec.v.leftCols(r);
  return out;
}

namespace detail {

// Keeps r eigenpairs of the symmetric core chosen by the given order, with a
// stable tie-break on the descending-algebraic input ordering.
template <typename Scalar, typename Better>
EigApprox<Scalar> truncate_sym_core(const SymApprox<Scalar>& sym, Index r, Better better) {
  const EigResult<Scalar> es = hermitian_eig(sym.s);
  std::vector<Index> order(static_cast<std::size_t>(es.values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return better(es.values(a), es.values(b)); });
  const Matrix<Scalar> consolidated = sym.u * es.vectors;
  EigApprox<Scalar> out;
  out.u.resize(sym.u.rows(), r);
  out.d.resize(r);
  for (Index i = 0; i < r; ++i) {
    const Index j = order[static_cast<std::size_t>(i)];
    out.u.col(i) = consolidated.col(j);
    out.d(i) = es.values(j);
  }
  return out;
}

}  // namespace detail

/// Fixed-rank conjugate symmetric approximation: keep the r eigenvalues of
/// the symmetric core with largest magnitude.
template <typename Scalar>
EigApprox<Scalar> fixed_rank_sym(const SketchState<Scalar>& st, Index r) {
  const SymApprox<Scalar> sym = low_rank_sym(st);
  if (r < 1 || r > sym.s.rows()) {
    throw std::invalid_argument("fixed_rank_sym: need 1 <= r <= 2k");
  }
  return detail::truncate_sym_core(sym, r, [](double a, double b) {
    return std::abs(a) > std::abs(b);
  });
}

/// Fixed-rank psd approximation: keep the r algebraically largest
/// eigenvalues of the symmetric core, then zero out negatives.
template <typename Scalar>
EigApprox<Scalar> fixed_rank_psd(const SketchState<Scalar>& st, Index r) {
  const SymApprox<Scalar> sym = low_rank_sym(st);
  if (r < 1 || r > sym.s.rows()) {
    throw std::invalid_argument("fixed_rank_psd: need 1 <= r <= 2k");
  }
  EigApprox<Scalar> out =
      detail::truncate_sym_core(sym, r, [](double a, double b) { return a > b; });
  out.d = out.d.cwiseMax(0.0);
  return out;
}

/// Fixed-rank reconstruction Q T^+ [[U^* w]]_r with psi Q = U T.
template <typename Scalar>
FixedRankSvd<Scalar> woodruff_fixed(const SketchState<Scalar>& st, Index r) {
  if (r < 1 || r > st.params().k) {
    throw std::invalid_argument("woodruff_fixed: need 1 <= r <= k");
  }
  const Matrix<Scalar>& y = detail::Access::y(st);
  const Matrix<Scalar>& w = detail::Access::w(st);
  const Matrix<Scalar>& psi = detail::Access::psi(st);
  const Matrix<Scalar> q = thin_qr(y).q;
  const QrThin<Scalar> ut = thin_qr(Matrix<Scalar>(psi * q));
  const SvdResult<Scalar> core = svd(Matrix<Scalar>(ut.q.adjoint() * w));
  const Matrix<Scalar> left =
      q * tri_pinv_apply(ut.r, Matrix<Scalar>(core.u.leftCols(r)));
  return detail::refactor_svd(left, RealVector(core.sigma.head(r)), Matrix<Scalar>(core.v.leftCols(r)));
}

/// Fixed-rank reconstruction V T^+ [[U^* w]]_r where V holds the r dominant
/// left singular vectors of y and psi V = U T.
template <typename Scalar>
FixedRankSvd<Scalar> cemmp_fixed(const SketchState<Scalar>& st, Index r) {
  if (r < 1 || r > st.params().k) {
    throw std::invalid_argument("cemmp_fixed: need 1 <= r <= k");
  }
  const Matrix<Scalar>& y = detail::Access::y(st);
  const Matrix<Scalar>& w = detail::Access::w(st);
  const Matrix<Scalar>& psi = detail::Access::psi(st);
  const Matrix<Scalar> v = svd(y).u.leftCols(r);
  const QrThin<Scalar> ut = thin_qr(Matrix<Scalar>(psi * v));
  const SvdResult<Scalar> core = svd(Matrix<Scalar>(ut.q.adjoint() * w));
  const Matrix<Scalar> left =
      v * tri_pinv_apply(ut.r, Matrix<Scalar>(core.u.leftCols(r)));
  return detail::refactor_svd(left, RealVector(core.sigma.head(r)), Matrix<Scalar>(core.v.leftCols(r)));
}

/// Fixed-rank reconstruction from the three-part sketch:
/// Q1 T1^+ [[U1^* z U2]]_r (T2^*)^+ Q2^* via four thin QR factorizations.
template <typename Scalar>
FixedRankSvd<Scalar> bwz_fixed(const ExtendedSketchState<Scalar>& st, Index r) {
  if (r < 1 || r > st.k()) {
    throw std::invalid_argument("bwz_fixed: need 1 <= r <= k");
  }
  const Matrix<Scalar>& y = detail::Access::y(st);
  const Matrix<Scalar>& w = detail::Access::w(st);
  const Matrix<Scalar>& z = detail::Access::z(st);
  const Matrix<Scalar>& phi = detail::Access::phi(st);
  const Matrix<Scalar>& xi = detail::Access::xi(st);
  const QrThin<Scalar> q1 = thin_qr(y);
  const QrThin<Scalar> q2 = thin_qr(Matrix<Scalar>(w.adjoint()));
  const QrThin<Scalar> u1t1 = thin_qr(Matrix<Scalar>(phi * q1.q));
  const QrThin<Scalar> u2t2 = thin_qr(Matrix<Scalar>(xi.adjoint() * q2.q));
  const SvdResult<Scalar> core =
      svd(Matrix<Scalar>(u1t1.q.adjoint() * z * u2t2.q));
  const Matrix<Scalar> left =
      q1.q * tri_pinv_apply(u1t1.r, Matrix<Scalar>(core.u.leftCols(r)));
  const Matrix<Scalar> right =
      q2.q * tri_pinv_apply(u2t2.r, Matrix<Scalar>(core.v.leftCols(r)));
  return detail::refactor_svd_two_sided(left, RealVector(core.sigma.head(r)), right);
}

}  // namespace sketchlr
