#pragma once

#include <cstddef>
#include <vector>

namespace clonedecomp {

/// Dense row-major matrix with a fixed shape.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  T* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
  const T* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }

  std::vector<T> row(std::size_t r) const {
    return std::vector<T>(row_ptr(r), row_ptr(r) + cols_);
  }

  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

}  // namespace clonedecomp
