#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace uvkv {

// Row-major dense matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{}) : r_(rows), c_(cols), d_(rows * cols, fill) {}

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  T& operator()(std::size_t i, std::size_t j) { return d_[i * c_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return d_[i * c_ + j]; }
  T* row(std::size_t i) { return d_.data() + i * c_; }
  const T* row(std::size_t i) const { return d_.data() + i * c_; }
  std::vector<T>& data() { return d_; }
  const std::vector<T>& data() const { return d_; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> v(r_);
    for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void set_column(std::size_t j, const std::vector<T>& v) {
    if (v.size() != r_) throw std::invalid_argument("column length mismatch");
    for (std::size_t i = 0; i < r_; ++i) (*this)(i, j) = v[i];
  }

  bool operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && d_ == o.d_; }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<T> d_;
};

}  // namespace uvkv
