#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <variant>

#include "sketchlr/kernels.hpp"

namespace sketchlr {

/// Raised when a matrix file is malformed; carries the byte offset where
/// parsing stopped.
class MatrixFileError : public std::runtime_error {
 public:
  MatrixFileError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"),
        byte_offset_(offset) {}
  std::uint64_t byte_offset() const { return byte_offset_; }

 private:
  std::uint64_t byte_offset_;
};

/// Binary matrix file layout (little-endian):
///   bytes 0..7    magic "SKLRMAT1"
///   bytes 8..11   field tag, uint32: 0 real, 1 complex
///   bytes 12..19  rows, uint64
///   bytes 20..27  cols, uint64
///   payload       row-major float64 entries; complex interleaved re, im
namespace matio {

inline constexpr char kMagic[8] = {'S', 'K', 'L', 'R', 'M', 'A', 'T', '1'};
inline constexpr std::uint32_t kTagReal = 0;
inline constexpr std::uint32_t kTagComplex = 1;
inline constexpr std::uint64_t kHeaderBytes = 28;

}  // namespace matio

using LoadedMatrix = std::variant<Matrix<Real>, Matrix<Complex>>;

namespace detail {

template <typename T>
void write_le(std::ofstream& out, T value) {
  // Host is little-endian on every supported target.
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename Scalar>
void write_matrix_payload(std::ofstream& out, const Matrix<Scalar>& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if constexpr (is_complex_v<Scalar>) {
        write_le(out, m(i, j).real());
        write_le(out, m(i, j).imag());
      } else {
        write_le(out, static_cast<double>(m(i, j)));
      }
    }
  }
}

}  // namespace detail

template <typename Scalar>
void save_matrix_file(const std::string& path, const Matrix<Scalar>& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("save_matrix_file: cannot open " + path);
  }
  out.write(matio::kMagic, sizeof(matio::kMagic));
  detail::write_le(out, is_complex_v<Scalar> ? matio::kTagComplex : matio::kTagReal);
  detail::write_le(out, static_cast<std::uint64_t>(m.rows()));
  detail::write_le(out, static_cast<std::uint64_t>(m.cols()));
  detail::write_matrix_payload(out, m);
  if (!out) {
    throw std::runtime_error("save_matrix_file: write failed for " + path);
  }
}

inline LoadedMatrix load_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MatrixFileError("load_matrix_file: cannot open " + path, 0);
  }
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, matio::kMagic, sizeof(magic)) != 0) {
    throw MatrixFileError("load_matrix_file: bad magic", 0);
  }
  std::uint32_t tag = 0;
  in.read(reinterpret_cast<char*>(&tag), sizeof(tag));
  if (!in || (tag != matio::kTagReal && tag != matio::kTagComplex)) {
    throw MatrixFileError("load_matrix_file: bad field tag", 8);
  }
  std::uint64_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  if (!in) {
    throw MatrixFileError("load_matrix_file: truncated header", 12);
  }
  if (rows < 1 || cols < 1 || rows > (1u << 26) || cols > (1u << 26)) {
    throw MatrixFileError("load_matrix_file: implausible dimensions", 12);
  }
  const std::uint64_t scalars = rows * cols * (tag == matio::kTagComplex ? 2 : 1);
  std::vector<double> payload(scalars);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(scalars * sizeof(double)));
  if (static_cast<std::uint64_t>(in.gcount()) != scalars * sizeof(double)) {
    throw MatrixFileError("load_matrix_file: short payload",
                          matio::kHeaderBytes + static_cast<std::uint64_t>(std::max<std::streamsize>(in.gcount(), 0)));
  }
  if (tag == matio::kTagReal) {
    Matrix<Real> m(static_cast<Index>(rows), static_cast<Index>(cols));
    std::size_t at = 0;
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) m(i, j) = payload[at++];
    }
    return m;
  }
  Matrix<Complex> m(static_cast<Index>(rows), static_cast<Index>(cols));
  std::size_t at = 0;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const double re = payload[at++];
      const double im = payload[at++];
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

}  // namespace sketchlr
