#pragma once

#include <cstdint>
#include <random>

#include "sketchlr/kernels.hpp"

namespace sketchlr {

/// Deterministic random stream addressed by (seed, stream_id). The same pair
/// replays the same scalar sequence on a given build; distinct stream ids are
/// independent for Monte-Carlo purposes and may run concurrently.
///
/// Normal variates come from the Box-Muller transform applied to uniforms
/// built from the top 53 bits of the engine output, so the whole sequence is
/// a documented function of the raw engine stream.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal N(0, 1).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Sign +-1 with equal probability.
  double sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

  /// Derived stream for a sub-task; deterministic in (seed, stream_id, tag).
  RngStream substream(std::uint64_t tag) const {
    return RngStream(seed_, stream_id_ * 0x9e3779b97f4a7c15ull + tag + 1);
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class TestMatrixKind { gaussian, orthonormal, rademacher, srft };

namespace detail {

template <typename Scalar>
Scalar draw_normal(RngStream& stream) {
  if constexpr (is_complex_v<Scalar>) {
    const double re = stream.normal();
    const double im = stream.normal();
    return Scalar(re, im);
  } else {
    return Scalar(stream.normal());
  }
}

}  // namespace detail

/// Standard normal matrix. Real field: i.i.d. N(0,1). Complex field:
/// G1 + i G2 with independent real standard normal parts, so each entry has
/// variance 2. Entries are drawn column-major, real part before imaginary.
template <typename Scalar>
Matrix<Scalar> gaussian_matrix(RngStream& stream, Index rows, Index cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("gaussian_matrix: dimensions must be positive");
  }
  Matrix<Scalar> g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      g(i, j) = detail::draw_normal<Scalar>(stream);
    }
  }
  return g;
}

/// Matrix of independent +-1 entries, column-major draw order.
template <typename Scalar>
Matrix<Scalar> rademacher_matrix(RngStream& stream, Index rows, Index cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("rademacher_matrix: dimensions must be positive");
  }
  Matrix<Scalar> g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      g(i, j) = Scalar(stream.sign());
    }
  }
  return g;
}

/// Orthonormal columns spanning range(m). Requires full column rank, which
/// holds almost surely for the Gaussian inputs this is applied to.
template <typename Scalar>
Matrix<Scalar> orthonormalize(const Matrix<Scalar>& m) {
  if (m.rows() < m.cols()) {
    throw std::invalid_argument("orthonormalize: matrix must have rows >= cols");
  }
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> rr(m);
  if (rr.rank() < m.cols()) {
    throw std::invalid_argument("orthonormalize: input is rank deficient");
  }
  return thin_qr(m).q;
}

namespace detail {

// Column p of the unitary DFT (complex) or orthonormal DCT-II (real),
// scaled so every column has unit norm.
inline void trig_column(Index n, Index p, Vector<Complex>& out) {
  out.resize(n);
  const double w = -2.0 * M_PI * static_cast<double>(p) / static_cast<double>(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index j = 0; j < n; ++j) {
    const double arg = w * static_cast<double>(j);
    out(j) = Complex(std::cos(arg), std::sin(arg)) * scale;
  }
}

inline void trig_column(Index n, Index p, Vector<Real>& out) {
  out.resize(n);
  const double c = (p == 0) ? std::sqrt(1.0 / static_cast<double>(n))
                            : std::sqrt(2.0 / static_cast<double>(n));
  for (Index j = 0; j < n; ++j) {
    out(j) = c * std::cos(M_PI * (2.0 * static_cast<double>(j) + 1.0) *
                          static_cast<double>(p) / (2.0 * static_cast<double>(n)));
  }
}

// Partial Fisher-Yates: k coordinates from [0, n) without replacement.
inline std::vector<Index> sample_coordinates(RngStream& stream, Index n, Index k) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  std::vector<Index> picked(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    const Index j = i + static_cast<Index>(stream.next_u64() % static_cast<std::uint64_t>(n - i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    picked[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)];
  }
  return picked;
}

}  // namespace detail

/// Subsampled randomized trigonometric transform in range form: a diagonal
/// of random signs, then the unitary DFT (complex) or orthonormal DCT-II
/// (real), restricted to k coordinates sampled uniformly without
/// replacement. Only the k selected transform columns are materialized.
/// Draw order: n signs first, then the coordinate sample.
template <typename Scalar>
Matrix<Scalar> srft_matrix(RngStream& stream, Index n, Index k) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("srft_matrix: need 1 <= k <= n");
  }
  RealVector signs(n);
  for (Index i = 0; i < n; ++i) signs(i) = stream.sign();
  const std::vector<Index> coords = detail::sample_coordinates(stream, n, k);
  Matrix<Scalar> omega(n, k);
  Vector<Scalar> col;
  for (Index c = 0; c < k; ++c) {
    detail::trig_column(n, coords[static_cast<std::size_t>(c)], col);
    for (Index j = 0; j < n; ++j) omega(j, c) = Scalar(signs(j)) * col(j);
  }
  return omega;
}

}  // namespace sketchlr
