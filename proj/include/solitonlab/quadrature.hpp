#pragma once

// Composite Gauss-Legendre quadrature with panel doubling, and the second-order
// reconstruction gamma(y) = gamma0 + gamma1 (y - y0) + int_{y0}^{y} (y - s) gamma''(s) ds.

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <functional>
#include <string>

#include "solitonlab/errors.hpp"

namespace solitonlab {

struct QuadratureOptions {
  double tol = 1e-12;  // relative to max(1, |integral|)
  int max_panels = 4096;
};

/// Integral of f over [a, b] (a > b allowed). Throws DomainError("quadrature") when panel
/// doubling stops before the estimate settles.
inline double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& opt = {}) {
  if (a == b) return 0.0;
  using Rule = boost::math::quadrature::gauss<double, 15>;
  auto composite = [&](int panels) {
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * h;
      sum += Rule::integrate(f, lo, lo + h);
    }
    return sum;
  };
  double previous = composite(1);
  for (int panels = 2; panels <= opt.max_panels; panels *= 2) {
    const double current = composite(panels);
    if (!std::isfinite(current)) break;
    if (std::abs(current - previous) <= opt.tol * std::max(1.0, std::abs(current))) return current;
    previous = current;
  }
  throw DomainError("quadrature", "no convergence on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
}

/// Solution of gamma'' = g with gamma(y0) = value0 and gamma'(y0) = slope0.
class SecondOrderIntegral {
 public:
  SecondOrderIntegral(std::function<double(double)> second, double y0, double value0, double slope0, QuadratureOptions opt = {})
      : second_(std::move(second)), y0_(y0), value0_(value0), slope0_(slope0), opt_(opt) {}

  double value(double y) const {
    const auto kernel = [&](double s) { return (y - s) * second_(s); };
    return value0_ + slope0_ * (y - y0_) + integrate(kernel, y0_, y, opt_);
  }

  double slope(double y) const { return slope0_ + integrate(second_, y0_, y, opt_); }
  double second(double y) const { return second_(y); }
  double base_point() const noexcept { return y0_; }

 private:
  std::function<double(double)> second_;
  double y0_;
  double value0_;
  double slope0_;
  QuadratureOptions opt_;
};

}  // namespace solitonlab
