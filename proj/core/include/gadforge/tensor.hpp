#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "gadforge/error.hpp"

namespace gadforge {

/// Dense row-major matrix.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  T operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  T& operator[](std::size_t i) noexcept { return data_[i]; }
  T operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }
  bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  template <typename U>
  Matrix<U> cast() const {
    Matrix<U> out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out[i] = static_cast<U>(data_[i]);
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

namespace detail {
inline void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::Contract, what);
}
}  // namespace detail

/// out = a * b
template <typename T>
void matmul(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& out) {
  detail::require(a.cols() == b.rows(), "matmul: inner dimension mismatch");
  out = Matrix<T>(a.rows(), b.cols());
  const std::size_t inner = a.cols(), cols = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    T* o = out.data() + i * cols;
    const T* ar = a.data() + i * inner;
    for (std::size_t k = 0; k < inner; ++k) {
      const T aik = ar[k];
      const T* br = b.data() + k * cols;
      for (std::size_t j = 0; j < cols; ++j) o[j] += aik * br[j];
    }
  }
}

/// out += a^T * b
template <typename T>
void matmul_tn_acc(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& out) {
  detail::require(a.rows() == b.rows(), "matmul_tn: row mismatch");
  detail::require(out.rows() == a.cols() && out.cols() == b.cols(), "matmul_tn: output shape");
  const std::size_t cols = b.cols();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const T* ar = a.data() + r * a.cols();
    const T* br = b.data() + r * cols;
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const T ari = ar[i];
      if (ari == T{}) continue;
      T* o = out.data() + i * cols;
      for (std::size_t j = 0; j < cols; ++j) o[j] += ari * br[j];
    }
  }
}

/// out += a * b^T
template <typename T>
void matmul_nt_acc(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& out) {
  detail::require(a.cols() == b.cols(), "matmul_nt: inner dimension mismatch");
  detail::require(out.rows() == a.rows() && out.cols() == b.rows(), "matmul_nt: output shape");
  const std::size_t inner = a.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const T* ar = a.data() + i * inner;
    T* o = out.data() + i * b.rows();
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const T* br = b.data() + j * inner;
      T acc{};
      for (std::size_t k = 0; k < inner; ++k) acc += ar[k] * br[k];
      o[j] += acc;
    }
  }
}

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) noexcept {
  T acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace gadforge
