#pragma once

#include <cstddef>
#include <vector>

namespace gaussmem {

// Minimal dense row-major matrix. The library only needs storage,
// element access and a few products; no general linear algebra here.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

Matrix identity(std::size_t n);

// a * a^T (works for rectangular a; result is rows x rows).
Matrix gram(const Matrix& a);

double max_abs_diff(const Matrix& a, const Matrix& b);

// max |a - b| with each entry normalized by max(1, |b|).
double max_scaled_diff(const Matrix& a, const Matrix& b);

}  // namespace gaussmem
