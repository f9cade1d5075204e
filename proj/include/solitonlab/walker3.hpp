#pragma once

// Three-dimensional strict Walker metrics 2dtdy + dx^2 + phi(x,y) dy^2 in coordinates (t, x, y):
// the soliton equations written out in components, classification of phi, reconstruction of
// the potential and recognition of the homogeneous families.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "solitonlab/catalog.hpp"
#include "solitonlab/errors.hpp"
#include "solitonlab/expr.hpp"
#include "solitonlab/geometry.hpp"
#include "solitonlab/jets.hpp"

namespace solitonlab {

/// The six scalar soliton equations for a Walker metric:
/// f_tt, f_tx, f_xx - lambda, f_ty - lambda, 2 f_xy - phi_x f_t,
/// 2 lambda phi + phi_xx - 2 f_yy - phi_x f_x + phi_y f_t.
inline std::array<double, 6> walker_residuals(const CompiledExpr& phi, const ScalarField& f, double lambda, std::span<const double> point) {
  using detail::kT;
  using detail::kX;
  using detail::kY;
  if (point.size() != 3) throw ArgumentError("Walker points have three coordinates (t, x, y)");
  const Jet p = phi.jet(point, 2);
  const Jet fj = f.jet(point, 2);
  const double ft = fj.d(kT), fx = fj.d(kX);
  return {
      fj.d(kT, kT),
      fj.d(kT, kX),
      fj.d(kX, kX) - lambda,
      fj.d(kT, kY) - lambda,
      2.0 * fj.d(kX, kY) - p.d(kX) * ft,
      2.0 * lambda * p.value() + p.d(kX, kX) - 2.0 * fj.d(kY, kY) - p.d(kX) * fx + p.d(kY) * ft,
  };
}

inline std::array<double, 6> walker_residuals(const Expr& phi, const ScalarField& f, double lambda, std::span<const double> point,
                                              const ParamTable& params = {}) {
  return walker_residuals(CompiledExpr(phi, Bindings{detail::kWalkerCoords, params}), f, lambda, point);
}

/// n x n tensor grid over the (x, y) rectangle at t = 0.
inline std::vector<std::vector<double>> walker_grid(Interval x, Interval y, int n = 5) {
  if (n < 3) throw ArgumentError("Walker grid needs at least 3 points per direction");
  std::vector<std::vector<double>> grid;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      grid.push_back({0.0, x.lo + (x.hi - x.lo) * i / (n - 1), y.lo + (y.hi - y.lo) * j / (n - 1)});
  return grid;
}

enum class WalkerVerdict { kFlat, kCaseI, kCaseII, kNotSoliton };

inline const char* verdict_name(WalkerVerdict v) {
  switch (v) {
    case WalkerVerdict::kFlat: return "Flat";
    case WalkerVerdict::kCaseI: return "CaseI";
    case WalkerVerdict::kCaseII: return "CaseII";
    case WalkerVerdict::kNotSoliton: return "NotSoliton";
  }
  return "NotSoliton";
}

struct WalkerClassification {
  struct Sample {
    double y = 0.0;
    double a = 0.0;
    double b = 0.0;  // Case I only
    double c = 0.0;  // Case I only
  };

  WalkerVerdict verdict = WalkerVerdict::kNotSoliton;
  double alpha = 0.0;
  std::vector<Sample> samples;  // one per distinct grid y
  std::vector<std::vector<double>> grid;
  double scale = 1.0;
  double max_phi_xx = 0.0;
  double max_phi_xxx = 0.0;
  double ratio_mean = 0.0;
  double ratio_spread = 0.0;
  double form_residual = 0.0;  // max |phi_xxx - alpha phi_xx|, Case I
  double tol = 1e-8;
};

namespace detail {

inline void check_grid(const std::vector<std::vector<double>>& grid) {
  if (grid.size() < 9) throw ArgumentError("classification grid needs at least 9 points");
  bool x_varies = false, y_varies = false;
  for (const auto& p : grid) {
    if (p.size() != 3) throw ArgumentError("Walker points have three coordinates (t, x, y)");
    x_varies = x_varies || p[kX] != grid[0][kX];
    y_varies = y_varies || p[kY] != grid[0][kY];
  }
  if (!x_varies || !y_varies) throw ArgumentError("degenerate grid: points must span both x and y");
}

inline std::vector<double> distinct_y(const std::vector<std::vector<double>>& grid) {
  std::vector<double> ys;
  for (const auto& p : grid) ys.push_back(p[kY]);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  return ys;
}

}  // namespace detail

/// Decides which soliton form phi has. Thresholds are `tol` times max(1, max |phi|) on the grid;
/// the ratio phi_xxx/phi_xx must have spread below tol * max(1, |mean|).
inline WalkerClassification classify(const Expr& phi, const std::vector<std::vector<double>>& grid, const ParamTable& params = {},
                                     double tol = 1e-8) {
  using detail::kX;
  using detail::kY;
  detail::check_grid(grid);
  const CompiledExpr compiled(phi, Bindings{detail::kWalkerCoords, params});
  WalkerClassification out;
  out.grid = grid;
  out.tol = tol;

  std::vector<Jet> jets;
  for (const auto& p : grid) jets.push_back(compiled.jet(p, 3));
  double max_phi = 0.0;
  for (const auto& j : jets) {
    max_phi = std::max(max_phi, std::abs(j.value()));
    out.max_phi_xx = std::max(out.max_phi_xx, std::abs(j.d(kX, kX)));
    out.max_phi_xxx = std::max(out.max_phi_xxx, std::abs(j.d(kX, kX, kX)));
  }
  out.scale = std::max(1.0, max_phi);
  const double threshold = tol * out.scale;

  if (out.max_phi_xx < threshold) {
    out.verdict = WalkerVerdict::kFlat;
    return out;
  }

  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
  int n = 0;
  for (const auto& j : jets) {
    if (std::abs(j.d(kX, kX)) <= threshold) continue;
    const double r = j.d(kX, kX, kX) / j.d(kX, kX);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    sum += r;
    ++n;
  }
  out.ratio_mean = sum / n;
  out.ratio_spread = hi - lo;

  if (out.ratio_spread < tol * std::max(1.0, std::abs(out.ratio_mean)) && std::abs(out.ratio_mean) > tol) {
    const double alpha = out.ratio_mean;
    for (const auto& j : jets) out.form_residual = std::max(out.form_residual, std::abs(j.d(kX, kX, kX) - alpha * j.d(kX, kX)));
    if (out.form_residual < threshold * std::max(1.0, std::abs(alpha))) {
      out.verdict = WalkerVerdict::kCaseI;
      out.alpha = alpha;
      for (double y : detail::distinct_y(grid)) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
          if (grid[i][kY] != y) continue;
          const Jet& j = jets[i];
          const double x = grid[i][kX];
          WalkerClassification::Sample s;
          s.y = y;
          s.a = j.d(kX, kX) * std::exp(-alpha * x);
          s.b = j.d(kX) - j.d(kX, kX) / alpha;
          s.c = j.value() - j.d(kX, kX) / (alpha * alpha) - x * s.b;
          out.samples.push_back(s);
          break;
        }
      }
      return out;
    }
  }

  if (out.max_phi_xxx < threshold) {
    out.verdict = WalkerVerdict::kCaseII;
    for (double y : detail::distinct_y(grid))
      for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i][kY] == y) {
          out.samples.push_back({y, 0.5 * jets[i].d(kX, kX), 0.0, 0.0});
          break;
        }
    return out;
  }
  out.verdict = WalkerVerdict::kNotSoliton;
  return out;
}

struct ConstructedPotential {
  ScalarField potential;
  double alpha = 0.0;
  double y0 = 0.0;
  double max_residual = 0.0;  // walker residuals on the classification grid
};

/// Potential for a classified phi: f = alpha x + gamma(y) in Case I, f = gamma(y) in Case II, with
/// gamma'' = (phi_xx - alpha phi_x)/2 and gamma(y0) = gamma'(y0) = 0.
inline ConstructedPotential construct_potential(const Expr& phi, const WalkerClassification& cls, double y0, const ParamTable& params = {}) {
  using detail::kX;
  using detail::kY;
  if (cls.verdict != WalkerVerdict::kCaseI && cls.verdict != WalkerVerdict::kCaseII)
    throw ArgumentError(std::string("no potential to construct for verdict ") + verdict_name(cls.verdict));
  const double alpha = cls.verdict == WalkerVerdict::kCaseI ? cls.alpha : 0.0;
  auto compiled = std::make_shared<const CompiledExpr>(phi, Bindings{detail::kWalkerCoords, params});
  const double xs = cls.grid.front()[kX];

  // x-independence of gamma'' over the grid
  double spread = 0.0;
  for (const auto& p : cls.grid) {
    const Jet j = compiled->jet(p, 2);
    const std::array<double, 3> q{0.0, xs, p[kY]};
    const Jet k = compiled->jet(q, 2);
    const double here = 0.5 * (j.d(kX, kX) - alpha * j.d(kX));
    const double there = 0.5 * (k.d(kX, kX) - alpha * k.d(kX));
    spread = std::max(spread, std::abs(here - there));
  }
  if (spread > cls.tol * cls.scale * std::max(1.0, std::abs(alpha)))
    throw DomainError("construct_potential", "gamma'' depends on x (spread " + format_number(spread) + ")");

  auto second = [compiled, alpha, xs](double y) {
    const std::array<double, 3> q{0.0, xs, y};
    const Jet j = compiled->jet(q, 3);
    return std::array<double, 2>{0.5 * (j.d(kX, kX) - alpha * j.d(kX)), 0.5 * (j.d(kX, kX, kY) - alpha * j.d(kX, kY))};
  };
  ConstructedPotential out;
  out.alpha = alpha;
  out.y0 = y0;
  out.potential = detail::walker_potential(alpha != 0.0 ? "alpha x + gamma(y)" : "gamma(y)", alpha, second, y0, 0.0, 0.0);
  for (const auto& p : cls.grid)
    for (double r : walker_residuals(*compiled, out.potential, 0.0, p)) out.max_residual = std::max(out.max_residual, std::abs(r));
  if (!(out.max_residual < 1e-8))
    throw DomainError("construct_potential", "reconstructed potential leaves residual " + format_number(out.max_residual));
  return out;
}

enum class HomogeneousFamily { kNone, kNb, kPc, kCWplus, kCWminus };

inline const char* family_name(HomogeneousFamily f) {
  switch (f) {
    case HomogeneousFamily::kNone: return "none";
    case HomogeneousFamily::kNb: return "N_b";
    case HomogeneousFamily::kPc: return "P_c";
    case HomogeneousFamily::kCWplus: return "CWplus";
    case HomogeneousFamily::kCWminus: return "CWminus";
  }
  return "none";
}

struct FamilyMatch {
  HomogeneousFamily family = HomogeneousFamily::kNone;
  double parameter = 0.0;  // b for N_b, c for P_c
};

/// Tests, in order, phi = +-x^2, phi = e^(bx)/b^2 and phi = x^2 alpha(y)/2 with alpha' = c alpha^(3/2).
inline FamilyMatch match_homogeneous_family(const Expr& phi, const std::vector<std::vector<double>>& grid, const ParamTable& params = {},
                                            double tol = 1e-8) {
  using detail::kX;
  using detail::kY;
  detail::check_grid(grid);
  const CompiledExpr compiled(phi, Bindings{detail::kWalkerCoords, params});
  std::vector<Jet> jets;
  double max_phi = 0.0;
  for (const auto& p : grid) {
    jets.push_back(compiled.jet(p, 3));
    max_phi = std::max(max_phi, std::abs(jets.back().value()));
  }
  const double threshold = tol * std::max(1.0, max_phi);

  double plus = 0.0, minus = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x2 = grid[i][kX] * grid[i][kX];
    plus = std::max(plus, std::abs(jets[i].value() - x2));
    minus = std::max(minus, std::abs(jets[i].value() + x2));
  }
  if (plus < threshold) return {HomogeneousFamily::kCWplus, 0.0};
  if (minus < threshold) return {HomogeneousFamily::kCWminus, 0.0};

  // N_b: phi_x / phi constant = b, phi independent of y, log(b^2 phi) = b x.
  bool positive = true;
  for (const auto& j : jets) positive = positive && j.value() > 0.0;
  if (positive) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0, phi_y = 0.0;
    for (const auto& j : jets) {
      const double r = j.d(kX) / j.value();
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      sum += r;
      phi_y = std::max(phi_y, std::abs(j.d(kY)));
    }
    const double b = sum / static_cast<double>(jets.size());
    if (b != 0.0 && hi - lo < tol * std::max(1.0, std::abs(b)) && phi_y < threshold) {
      double lin = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) lin = std::max(lin, std::abs(std::log(b * b * jets[i].value()) - b * grid[i][kX]));
      if (lin < tol * std::max(1.0, std::abs(b))) return {HomogeneousFamily::kNb, b};
    }
  }

  // P_c: phi = x^2 alpha / 2 with alpha = phi_xx > 0 independent of x, c = alpha_y / alpha^(3/2).
  double shape = 0.0;
  bool alpha_positive = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Jet& j = jets[i];
    const double x = grid[i][kX];
    shape = std::max({shape, std::abs(j.value() - 0.5 * x * x * j.d(kX, kX)), std::abs(j.d(kX, kX, kX))});
    alpha_positive = alpha_positive && j.d(kX, kX) > threshold;
  }
  if (alpha_positive && shape < threshold) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    for (const auto& j : jets) {
      const double c = j.d(kX, kX, kY) / std::pow(j.d(kX, kX), 1.5);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
      sum += c;
    }
    const double c = sum / static_cast<double>(jets.size());
    if (hi - lo < tol * std::max(1.0, std::abs(c))) return {HomogeneousFamily::kPc, c};
  }
  return {};
}

}  // namespace solitonlab
