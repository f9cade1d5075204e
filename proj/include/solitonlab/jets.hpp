#pragma once

// Truncated multivariate Taylor arithmetic ("jets") of order <= 3 in <= 8 variables.
//
// A jet stores the Taylor coefficients c_a of a function around a base point,
//   F(p + h) = sum_{|a| <= order} c_a h^a,
// so c_a = (d^a F)(p) / a!. The public `partial` accessor returns raw partials.
// Coefficients live in a dense array indexed by a degree-graded enumeration of
// multi-indices; the enumeration of order k is a prefix of the enumeration of
// order k + 1, which makes truncation a resize.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "solitonlab/errors.hpp"

namespace solitonlab {

inline constexpr int kMaxJetDim = 8;
inline constexpr int kMaxJetOrder = 3;

/// Exponent vector of a monomial, one entry per variable.
struct MultiIndex {
  std::array<std::uint8_t, kMaxJetDim> exponents{};

  MultiIndex() = default;

  /// Exponents listed per variable: MultiIndex{1, 1} is d^2/dx0 dx1.
  MultiIndex(std::initializer_list<int> exps) {
    if (exps.size() > kMaxJetDim) throw ArgumentError("multi-index longer than the maximum jet dimension");
    std::size_t i = 0;
    for (int e : exps) {
      if (e < 0 || e > kMaxJetOrder) throw ArgumentError("multi-index exponent out of range");
      exponents[i++] = static_cast<std::uint8_t>(e);
    }
  }

  /// Multi-index of the derivative along the listed directions: {0, 0, 2} is d^3/dx0^2 dx2.
  static MultiIndex along(std::initializer_list<int> directions) {
    MultiIndex m;
    for (int d : directions) {
      if (d < 0 || d >= kMaxJetDim) throw ArgumentError("derivative direction out of range");
      ++m.exponents[static_cast<std::size_t>(d)];
    }
    return m;
  }

  int degree() const {
    int s = 0;
    for (auto e : exponents) s += e;
    return s;
  }

  double factorial() const {
    double f = 1.0;
    for (auto e : exponents)
      for (int k = 2; k <= e; ++k) f *= k;
    return f;
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

namespace detail {

/// Monomial enumeration and multiplication table for one dimension, up to kMaxJetOrder.
struct JetLayout {
  struct Term {
    std::uint16_t lhs;
    std::uint16_t rhs;
    std::uint16_t out;
  };

  int dim = 0;
  std::vector<MultiIndex> monomials;
  std::array<std::size_t, kMaxJetOrder + 1> size_for_order{};
  std::vector<Term> products;  // sorted by degree of `out`
  std::array<std::size_t, kMaxJetOrder + 1> products_for_order{};
  std::vector<std::array<int, kMaxJetDim>> raise;  // position of monomial + e_i, -1 past the top order
  std::vector<int> lookup;                         // base-4 key -> position

  static std::size_t key(const MultiIndex& m, int dim) {
    std::size_t k = 0;
    for (int i = dim - 1; i >= 0; --i) k = 4 * k + m.exponents[static_cast<std::size_t>(i)];
    return k;
  }

  int position(const MultiIndex& m) const {
    for (int i = dim; i < kMaxJetDim; ++i)
      if (m.exponents[static_cast<std::size_t>(i)] != 0) return -1;
    if (m.degree() > kMaxJetOrder) return -1;
    return lookup[key(m, dim)];
  }

  explicit JetLayout(int d) : dim(d) {
    // Graded enumeration; within a degree, lexicographic with the first variable varying slowest.
    for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
      MultiIndex m;
      append_degree(m, 0, deg);
      size_for_order[static_cast<std::size_t>(deg)] = monomials.size();
    }
    std::size_t table = 1;
    for (int i = 0; i < d; ++i) table *= 4;
    lookup.assign(table, -1);
    for (std::size_t p = 0; p < monomials.size(); ++p) lookup[key(monomials[p], d)] = static_cast<int>(p);

    raise.resize(monomials.size());
    for (std::size_t p = 0; p < monomials.size(); ++p) {
      raise[p].fill(-1);
      for (int i = 0; i < d; ++i) {
        MultiIndex up = monomials[p];
        if (up.degree() >= kMaxJetOrder) continue;
        ++up.exponents[static_cast<std::size_t>(i)];
        raise[p][static_cast<std::size_t>(i)] = position(up);
      }
    }

    for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
      for (std::size_t a = 0; a < monomials.size(); ++a) {
        for (std::size_t b = 0; b < monomials.size(); ++b) {
          if (monomials[a].degree() + monomials[b].degree() != deg) continue;
          MultiIndex sum = monomials[a];
          for (int i = 0; i < d; ++i) sum.exponents[static_cast<std::size_t>(i)] += monomials[b].exponents[static_cast<std::size_t>(i)];
          products.push_back({static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                              static_cast<std::uint16_t>(position(sum))});
        }
      }
      products_for_order[static_cast<std::size_t>(deg)] = products.size();
    }
  }

 private:
  void append_degree(MultiIndex& m, int var, int remaining) {
    if (var == dim - 1) {
      m.exponents[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(remaining);
      monomials.push_back(m);
      m.exponents[static_cast<std::size_t>(var)] = 0;
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      m.exponents[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e);
      append_degree(m, var + 1, remaining - e);
    }
    m.exponents[static_cast<std::size_t>(var)] = 0;
  }
};

inline const JetLayout& jet_layout(int dim) {
  static const auto layouts = [] {
    std::array<std::unique_ptr<const JetLayout>, kMaxJetDim + 1> all;
    for (int d = 1; d <= kMaxJetDim; ++d) all[static_cast<std::size_t>(d)] = std::make_unique<const JetLayout>(d);
    return all;
  }();
  return *layouts[static_cast<std::size_t>(dim)];
}

inline void check_shape(int dim, int order) {
  if (dim < 1 || dim > kMaxJetDim) throw ArgumentError("jet dimension must lie in [1, 8], got " + std::to_string(dim));
  if (order < 0 || order > kMaxJetOrder) throw ArgumentError("jet order must lie in [0, 3], got " + std::to_string(order));
}

}  // namespace detail

/// Truncated Taylor expansion of a scalar function of `dim` variables, exact to `order`.
class Jet {
 public:
  Jet() = default;

  Jet(int dim, int order) : dim_(dim), order_(order) {
    detail::check_shape(dim, order);
    coeffs_.assign(detail::jet_layout(dim).size_for_order[static_cast<std::size_t>(order)], 0.0);
  }

  static Jet constant(int dim, int order, double value) {
    Jet j(dim, order);
    j.coeffs_[0] = value;
    return j;
  }

  /// The coordinate function x_index, based at `value`.
  static Jet variable(int dim, int order, int index, double value) {
    if (index < 0 || index >= dim) throw ArgumentError("jet variable index out of range");
    Jet j = constant(dim, order, value);
    if (order >= 1) j.coeffs_[static_cast<std::size_t>(1 + index)] = 1.0;
    return j;
  }

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  double value() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_[0]; }

  /// Taylor coefficients in the graded enumeration of `jet_layout(dim())`.
  std::span<const double> taylor() const noexcept { return coeffs_; }

  /// Raw partial derivative d^idx F at the base point.
  double partial(const MultiIndex& idx) const {
    if (idx.degree() > order_) throw ArgumentError("partial of degree " + std::to_string(idx.degree()) + " exceeds jet order " + std::to_string(order_));
    const int p = detail::jet_layout(dim_).position(idx);
    if (p < 0) throw ArgumentError("multi-index refers to a variable outside the jet dimension");
    return coeffs_[static_cast<std::size_t>(p)] * idx.factorial();
  }

  double d(int i) const { return partial(MultiIndex::along({i})); }
  double d(int i, int j) const { return partial(MultiIndex::along({i, j})); }
  double d(int i, int j, int k) const { return partial(MultiIndex::along({i, j, k})); }

  /// Jet of dF/dx_i, one order lower.
  Jet derivative(int i) const {
    if (order_ == 0) throw ArgumentError("cannot differentiate an order-0 jet");
    if (i < 0 || i >= dim_) throw ArgumentError("derivative direction out of range");
    const auto& layout = detail::jet_layout(dim_);
    Jet out(dim_, order_ - 1);
    for (std::size_t p = 0; p < out.coeffs_.size(); ++p) {
      const int up = layout.raise[p][static_cast<std::size_t>(i)];
      out.coeffs_[p] = coeffs_[static_cast<std::size_t>(up)] * (layout.monomials[p].exponents[static_cast<std::size_t>(i)] + 1);
    }
    return out;
  }

  Jet truncated(int order) const {
    if (order > order_) throw ArgumentError("cannot raise the order of a jet by truncation");
    Jet out = *this;
    out.order_ = order;
    out.coeffs_.resize(detail::jet_layout(dim_).size_for_order[static_cast<std::size_t>(order)]);
    return out;
  }

  Jet& operator+=(const Jet& o) { return accumulate(o, 1.0); }
  Jet& operator-=(const Jet& o) { return accumulate(o, -1.0); }
  Jet& operator+=(double c) {
    coeffs_[0] += c;
    return *this;
  }
  Jet& operator*=(double c) {
    for (auto& v : coeffs_) v *= c;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double c) { return a += c; }
  friend Jet operator+(double c, Jet a) { return a += c; }
  friend Jet operator-(Jet a, double c) { return a += -c; }
  friend Jet operator-(double c, const Jet& a) { return -a + c; }
  friend Jet operator*(Jet a, double c) { return a *= c; }
  friend Jet operator*(double c, Jet a) { return a *= c; }
  friend Jet operator-(Jet a) { return a *= -1.0; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    same_dim(a, b);
    const int order = std::min(a.order_, b.order_);
    const auto& layout = detail::jet_layout(a.dim_);
    Jet out(a.dim_, order);
    const std::size_t n = layout.products_for_order[static_cast<std::size_t>(order)];
    const double* pa = a.coeffs_.data();
    const double* pb = b.coeffs_.data();
    double* po = out.coeffs_.data();
    for (std::size_t t = 0; t < n; ++t) {
      const auto& term = layout.products[t];
      po[term.out] += pa[term.lhs] * pb[term.rhs];
    }
    return out;
  }

 private:
  static void same_dim(const Jet& a, const Jet& b) {
    if (a.dim_ != b.dim_) throw ArgumentError("jet operands have different dimensions");
  }

  Jet& accumulate(const Jet& o, double sign) {
    same_dim(*this, o);
    if (o.order_ < order_) *this = truncated(o.order_);
    for (std::size_t p = 0; p < coeffs_.size(); ++p) coeffs_[p] += sign * o.coeffs_[p];
    return *this;
  }

  int dim_ = 0;
  int order_ = 0;
  std::vector<double> coeffs_;
};

/// Seeds one jet per coordinate: jet i is x_i based at point[i].
inline std::vector<Jet> seed_jets(std::span<const double> point, int order) {
  const int dim = static_cast<int>(point.size());
  detail::check_shape(dim, order);
  std::vector<Jet> seeds;
  seeds.reserve(point.size());
  for (int i = 0; i < dim; ++i) seeds.push_back(Jet::variable(dim, order, i, point[static_cast<std::size_t>(i)]));
  return seeds;
}

/// F(x) for a univariate F given its derivatives F(x0), F'(x0), ... at x0 = x.value().
/// Needs at least x.order() + 1 derivatives.
inline Jet compose(const Jet& x, std::span<const double> derivatives) {
  if (derivatives.size() < static_cast<std::size_t>(x.order()) + 1)
    throw ArgumentError("compose needs one derivative per jet order");
  Jet h = x - x.value();
  Jet out = Jet::constant(x.dim(), x.order(), derivatives[0]);
  Jet power = Jet::constant(x.dim(), x.order(), 1.0);
  double factorial = 1.0;
  for (int k = 1; k <= x.order(); ++k) {
    power = power * h;
    factorial *= k;
    const double c = derivatives[static_cast<std::size_t>(k)] / factorial;
    if (c != 0.0) out += power * c;
  }
  return out;
}

inline Jet exp(const Jet& x) {
  const double e = std::exp(x.value());
  const std::array<double, 4> d{e, e, e, e};
  return compose(x, d);
}

inline Jet log(const Jet& x) {
  const double v = x.value();
  if (!(v > 0.0)) throw DomainError("log", "argument " + std::to_string(v) + " is not positive");
  const std::array<double, 4> d{std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v)};
  return compose(x, d);
}

inline Jet sin(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  const std::array<double, 4> d{s, c, -s, -c};
  return compose(x, d);
}

inline Jet cos(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  const std::array<double, 4> d{c, -s, -c, s};
  return compose(x, d);
}

inline Jet sqrt(const Jet& x) {
  const double v = x.value();
  if (!(v > 0.0)) throw DomainError("sqrt", "argument " + std::to_string(v) + " is not positive");
  const double s = std::sqrt(v);
  const std::array<double, 4> d{s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v)};
  return compose(x, d);
}

inline Jet reciprocal(const Jet& x) {
  const double v = x.value();
  if (v == 0.0) throw DomainError("div", "denominator value is zero");
  const double r = 1.0 / v;
  const std::array<double, 4> d{r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r};
  return compose(x, d);
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
inline Jet operator/(const Jet& a, double c) {
  if (c == 0.0) throw DomainError("div", "denominator value is zero");
  return a * (1.0 / c);
}
inline Jet operator/(double c, const Jet& b) { return c * reciprocal(b); }

/// x^n for integer n; negative n requires a nonzero base.
inline Jet pow(const Jet& x, int n) {
  const double v = x.value();
  if (n < 0 && v == 0.0) throw DomainError("pow_int", "zero base with negative exponent");
  std::array<double, 4> d{};
  double falling = 1.0;
  for (int k = 0; k <= x.order(); ++k) {
    d[static_cast<std::size_t>(k)] = falling == 0.0 ? 0.0 : falling * std::pow(v, n - k);
    falling *= static_cast<double>(n - k);
  }
  return compose(x, d);
}

/// x^p for real p; requires a positive base.
inline Jet pow(const Jet& x, double p) {
  const double v = x.value();
  if (!(v > 0.0)) throw DomainError("pow_real", "base " + std::to_string(v) + " is not positive");
  std::array<double, 4> d{};
  double falling = 1.0;
  for (int k = 0; k <= x.order(); ++k) {
    d[static_cast<std::size_t>(k)] = falling * std::pow(v, p - k);
    falling *= p - k;
  }
  return compose(x, d);
}

/// General power x^y = exp(y log x), used when the exponent is not constant.
inline Jet pow(const Jet& x, const Jet& y) {
  if (!(x.value() > 0.0)) throw DomainError("pow_real", "base " + std::to_string(x.value()) + " is not positive");
  return exp(y * log(x));
}

}  // namespace solitonlab
