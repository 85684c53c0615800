#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "prnu_mixed/error.hpp"

namespace prnu {

// Dense row-major 2-D grid.
template <typename T>
class Plane {
 public:
  Plane() = default;
  Plane(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Plane(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw DimensionError("plane data size does not match dimensions");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool same_shape(const Plane& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  friend bool operator==(const Plane& a, const Plane& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using PlaneD = Plane<double>;

inline double mean(const PlaneD& p) {
  if (p.empty()) return 0.0;
  double s = 0.0;
  for (double v : p.values()) s += v;
  return s / static_cast<double>(p.size());
}

inline bool all_finite(const PlaneD& p) {
  for (double v : p.values())
    if (!std::isfinite(v)) return false;
  return true;
}

inline double max_abs_diff(const PlaneD& a, const PlaneD& b) {
  if (!a.same_shape(b)) throw DimensionError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

}  // namespace prnu
