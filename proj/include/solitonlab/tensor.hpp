#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace solitonlab {

/// Dense rank-`Rank` array with every index ranging over [0, dim). Row-major.
template <std::size_t Rank, class T = double>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(int dim, T fill = T{}) : dim_(dim), data_(size_for(dim), fill) {}

  int dim() const noexcept { return dim_; }

  template <class... I>
    requires(sizeof...(I) == Rank)
  T& operator()(I... idx) {
    return data_[offset({static_cast<int>(idx)...})];
  }

  template <class... I>
    requires(sizeof...(I) == Rank)
  const T& operator()(I... idx) const {
    return data_[offset({static_cast<int>(idx)...})];
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  static std::size_t size_for(int dim) {
    std::size_t n = 1;
    for (std::size_t r = 0; r < Rank; ++r) n *= static_cast<std::size_t>(dim);
    return n;
  }

  std::size_t offset(const std::array<int, Rank>& idx) const {
    std::size_t o = 0;
    for (std::size_t r = 0; r < Rank; ++r) o = o * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx[r]);
    return o;
  }

  int dim_ = 0;
  std::vector<T> data_;
};

using Vector = std::vector<double>;
using Matrix = Tensor<2>;

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  const int d = a.dim();
  Matrix c(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < d; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

}  // namespace solitonlab
