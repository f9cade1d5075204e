#pragma once

// Check suite for gradient Ricci solitons Hess f + rho = lambda g: the soliton equation itself,
// the identities it implies for constant scalar curvature, the Schouten-Codazzi test, Ricci and
// Hessian operator profiles, recurrence of a null gradient, and Killing-field statements.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "solitonlab/catalog.hpp"
#include "solitonlab/errors.hpp"
#include "solitonlab/geometry.hpp"
#include "solitonlab/speclin.hpp"

namespace solitonlab {

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  int points_evaluated = 0;
};

struct ProfileSummary {
  std::vector<Complex> ric_spectrum;
  int ric_rank = 0;
  std::optional<int> ric_nilpotency;
  std::vector<Complex> hf_spectrum;
  CausalType grad_f_causal_type = CausalType::kZero;
  double grad_f_norm_sq = 0.0;
};

struct CheckReport {
  std::string problem;
  int dim = 0;
  double lambda = 0.0;
  std::vector<CheckResult> checks;
  ProfileSummary profile;
  std::vector<std::string> notes;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Per-check tolerance table; names not overridden use the built-in defaults.
class Tolerances {
 public:
  static double default_for(const std::string& name) {
    static const std::map<std::string, double> defaults{
        {"soliton_residual", 1e-9},
        {"ricci_grad_f", 1e-8},
        {"grad_norm_minus_2lambda_f_spread", 1e-8},
        {"curvature_grad_f_identity", 1e-8},
        {"ricci_transport_identity", 1e-8},
        {"hessian_norm_identity", 1e-8},
        {"steady_hessian_norm", 1e-10},
        {"steady_grad_norm_spread", 1e-9},
        {"bochner", 1e-8},
        {"scalar_curvature_spread", 1e-9},
        {"codazzi_schouten", 1e-10},
        {"ricci_profile_stability", 1e-8},
        {"expected_ricci_structure", 1e-8},
        {"expected_grad_causal_type", 0.0},
        {"expected_grad_norm_sq", 1e-9},
        {"expected_hess_norm_sq", 1e-9},
        {"rigid_rank_sum", 0.0},
        {"rigid_ric_hf_product", 1e-10},
        {"hf_equals_minus_ric", 1e-10},
        {"recurrence_theta", 1e-9},
        {"killing", 1e-9},
        {"killing_grad_parallel", 1e-9},
    };
    const auto base = name.substr(0, name.find(':'));
    const auto it = defaults.find(base);
    if (it == defaults.end()) throw ArgumentError("unknown check name '" + name + "'");
    return it->second;
  }

  static bool known(const std::string& name) {
    try {
      (void)default_for(name);
      return true;
    } catch (const ArgumentError&) {
      return false;
    }
  }

  void set(const std::string& name, double value) {
    if (!known(name)) throw ArgumentError("unknown check name '" + name + "'");
    if (!(value > 0.0)) throw ArgumentError("tolerance for '" + name + "' must be positive");
    overrides_[name] = value;
  }

  double get(const std::string& name) const {
    if (const auto it = overrides_.find(name); it != overrides_.end()) return it->second;
    const auto base = name.substr(0, name.find(':'));
    if (const auto it = overrides_.find(base); it != overrides_.end()) return it->second;
    return default_for(name);
  }

 private:
  std::map<std::string, double> overrides_;
};

/// Everything computed once per sample point.
struct PointData {
  CurvaturePack curvature;
  ScalarPack scalar;
  double f = 0.0;
};

namespace detail {

inline std::string point_text(std::span<const double> p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + format_number(p[i]);
  return s + ")";
}

/// Runs `fn`, re-raising library errors with the point appended.
template <class F>
auto at_point(std::span<const double> p, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const SingularMetricError& e) {
    throw SingularMetricError(std::string(e.what()) + " at " + point_text(p));
  } catch (const DomainError& e) {
    std::string detail = e.what();
    if (detail.rfind(e.operation() + ": ", 0) == 0) detail = detail.substr(e.operation().size() + 2);
    throw DomainError(e.operation(), detail + " at " + point_text(p));
  }
}

inline double scale_of(std::initializer_list<double> magnitudes) {
  double s = 1.0;
  for (double m : magnitudes) s = std::max(s, m);
  return s;
}

inline CheckResult make_check(const std::string& name, double residual, const Tolerances& tol, int points) {
  CheckResult c{name, residual, tol.get(name), false, points};
  c.pass = std::isfinite(residual) && residual <= c.tolerance;
  return c;
}

inline double spread(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

inline double max_abs_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

inline PointData evaluate_point(const SolitonProblem& problem, std::span<const double> point) {
  return detail::at_point(point, [&] {
    PointData d;
    d.curvature = curvature(problem.metric, point);
    d.scalar = scalar_pack(d.curvature, problem.potential);
    d.f = d.scalar.value;
    return d;
  });
}

inline std::vector<PointData> evaluate_points(const SolitonProblem& problem, const std::vector<std::vector<double>>& points) {
  std::vector<PointData> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(evaluate_point(problem, p));
  return out;
}

/// Hess f + rho - lambda g at the point.
inline Matrix soliton_residual(const PointData& d, double lambda) {
  const int n = d.curvature.dim();
  Matrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = d.scalar.hess(i, j) + d.curvature.ricci(i, j) - lambda * d.curvature.g(i, j);
  return r;
}

inline Matrix soliton_residual(const SolitonProblem& problem, std::span<const double> point) {
  return soliton_residual(evaluate_point(problem, point), problem.lambda);
}

/// Max-abs soliton residual divided by max(1, largest term magnitude).
inline double soliton_statistic(const PointData& d, double lambda) {
  const double s = detail::scale_of({d.scalar.hess.max_abs(), d.curvature.ricci.max_abs(), std::abs(lambda) * d.curvature.g.max_abs()});
  return soliton_residual(d, lambda).max_abs() / s;
}

// Pointwise identity residuals. The curvature four-tensor is R(a,b,c,d) = g(R(d_a,d_b)d_d, d_c).

/// |Ric(grad f)|
inline double ricci_grad_f_residual(const PointData& d) {
  const auto& c = d.curvature;
  double m = 0.0;
  for (int i = 0; i < c.dim(); ++i) {
    double s = 0.0;
    for (int j = 0; j < c.dim(); ++j) s += c.ricci_op(i, j) * d.scalar.grad[static_cast<std::size_t>(j)];
    m = std::max(m, std::abs(s));
  }
  return m / detail::scale_of({c.ricci_op.max_abs() * max_abs(d.scalar.grad)});
}

/// R(X,Y,Z,grad f) + (nabla_X rho)(Y,Z) - (nabla_Y rho)(X,Z) over coordinate fields.
inline double curvature_grad_f_residual(const PointData& d) {
  const auto& c = d.curvature;
  const int n = c.dim();
  double m = 0.0, mag = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int e = 0; e < n; ++e) {
        double r = 0.0;
        for (int k = 0; k < n; ++k) r += c.riemann(a, b, e, k) * d.scalar.grad[static_cast<std::size_t>(k)];
        const double codazzi = c.nabla_ricci(a, b, e) - c.nabla_ricci(b, a, e);
        m = std::max(m, std::abs(r + codazzi));
        mag = std::max({mag, std::abs(r), std::abs(codazzi)});
      }
  return m / detail::scale_of({mag});
}

/// (nabla_{grad f} Ric) + Ric o H_f + R(grad f, .) grad f as operators.
inline double ricci_transport_residual(const PointData& d) {
  const auto& c = d.curvature;
  const auto& grad = d.scalar.grad;
  const int n = c.dim();
  Matrix transported(n);  // g^{ia} (nabla_{grad f} rho)_{aj}
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += grad[static_cast<std::size_t>(k)] * c.nabla_ricci(k, a, j);
      transported(a, j) = s;
    }
  transported = matmul(c.ginv, transported);
  const Matrix composed = matmul(c.ricci_op, d.scalar.hess_op);
  double m = 0.0, mag = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double curv = 0.0;
      for (int a = 0; a < n; ++a)
        for (int e = 0; e < n; ++e) curv += c.riemann_op(i, e, a, j) * grad[static_cast<std::size_t>(a)] * grad[static_cast<std::size_t>(e)];
      m = std::max(m, std::abs(transported(i, j) + composed(i, j) + curv));
      mag = std::max({mag, std::abs(transported(i, j)), std::abs(composed(i, j)), std::abs(curv)});
    }
  return m / detail::scale_of({mag});
}

/// lambda (d lambda - tau) - |Hess f|^2
inline double hessian_norm_residual(const PointData& d, double lambda) {
  const double lhs = lambda * (d.curvature.dim() * lambda - d.curvature.scalar);
  return std::abs(lhs - d.scalar.hess_norm_sq) / detail::scale_of({std::abs(lhs), std::abs(d.scalar.hess_norm_sq)});
}

/// (1/2) Lap |grad f|^2 - |Hess f|^2 - rho(grad f, grad f) - g(grad Lap f, grad f)
inline double bochner_residual(const PointData& d) {
  const auto& c = d.curvature;
  const auto& s = d.scalar;
  double ric = 0.0, trans = 0.0;
  for (int i = 0; i < c.dim(); ++i) {
    trans += s.grad_laplacian[static_cast<std::size_t>(i)] * s.df[static_cast<std::size_t>(i)];
    for (int j = 0; j < c.dim(); ++j) ric += c.ricci(i, j) * s.grad[static_cast<std::size_t>(i)] * s.grad[static_cast<std::size_t>(j)];
  }
  const double half_lap = 0.5 * s.laplacian_of_grad_norm_sq;
  return std::abs(half_lap - s.hess_norm_sq - ric - trans) / detail::scale_of({std::abs(half_lap), std::abs(s.hess_norm_sq), std::abs(ric), std::abs(trans)});
}

/// max over coordinate triples of |(nabla_k S)_ij - (nabla_i S)_kj|, S = rho - tau/(2(d-1)) g.
inline double schouten_codazzi_residual(const PointData& d) {
  const auto& c = d.curvature;
  const int n = c.dim();
  if (n < 2) return 0.0;
  const double w = 1.0 / (2.0 * (n - 1));
  auto ns = [&](int k, int i, int j) { return c.nabla_ricci(k, i, j) - w * c.dscalar[static_cast<std::size_t>(k)] * c.g(i, j); };
  double m = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m = std::max(m, std::abs(ns(k, i, j) - ns(i, k, j)));
  return m;
}

inline double schouten_codazzi_residual(const SolitonProblem& problem, std::span<const double> point) {
  return schouten_codazzi_residual(evaluate_point(problem, point));
}

struct Recurrence {
  Vector theta;
  double residual = 0.0;
};

/// For null nonzero grad f: U = df/|df|^2 (the minimum-norm coordinate solution of g(U, grad f) = 1),
/// theta_i = g(U, H_f e_i), residual max |H_f e_i - theta_i grad f|. nullopt when grad f is not null.
inline std::optional<Recurrence> recurrence_theta(const PointData& d, double causal_tol = 1e-10) {
  const auto& c = d.curvature;
  const auto& s = d.scalar;
  const auto type = causal_type(c.g, s.grad, causal_tol);
  if (type == CausalType::kZero) throw DomainError("recurrence_theta", "grad f vanishes");
  if (type != CausalType::kNull) return std::nullopt;
  const int n = c.dim();
  double norm2 = 0.0;
  for (double v : s.df) norm2 += v * v;
  Recurrence r;
  r.theta.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) r.theta[static_cast<std::size_t>(i)] += s.df[static_cast<std::size_t>(a)] / norm2 * s.hess(a, i);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      r.residual = std::max(r.residual, std::abs(s.hess_op(k, i) - r.theta[static_cast<std::size_t>(i)] * s.grad[static_cast<std::size_t>(k)]));
  return r;
}

inline std::optional<Recurrence> recurrence_theta(const SolitonProblem& problem, std::span<const double> point) {
  return recurrence_theta(evaluate_point(problem, point));
}

/// The pointwise identities implied by the soliton equation with constant scalar curvature.
inline std::vector<CheckResult> identity_suite(const SolitonProblem& problem, const std::vector<PointData>& data, const Tolerances& tol = {}) {
  const int n = static_cast<int>(data.size());
  const double lambda = problem.lambda;
  double r1a = 0.0, r1c = 0.0, r1d = 0.0, r3 = 0.0, rb = 0.0, hess_norm = 0.0;
  std::vector<double> mu, grad_norm, tau;
  for (const auto& d : data) {
    r1a = std::max(r1a, ricci_grad_f_residual(d));
    r1c = std::max(r1c, curvature_grad_f_residual(d));
    r1d = std::max(r1d, ricci_transport_residual(d));
    r3 = std::max(r3, hessian_norm_residual(d, lambda));
    rb = std::max(rb, bochner_residual(d));
    hess_norm = std::max(hess_norm, std::abs(d.scalar.hess_norm_sq));
    mu.push_back(d.scalar.grad_norm_sq - 2.0 * lambda * d.f);
    grad_norm.push_back(d.scalar.grad_norm_sq);
    tau.push_back(d.curvature.scalar);
  }
  std::vector<CheckResult> out;
  out.push_back(detail::make_check("ricci_grad_f", r1a, tol, n));
  out.push_back(detail::make_check("grad_norm_minus_2lambda_f_spread", detail::spread(mu) / detail::scale_of({detail::max_abs_of(mu)}), tol, n));
  out.push_back(detail::make_check("curvature_grad_f_identity", r1c, tol, n));
  out.push_back(detail::make_check("ricci_transport_identity", r1d, tol, n));
  out.push_back(detail::make_check("hessian_norm_identity", r3, tol, n));
  if (lambda == 0.0) {
    out.push_back(detail::make_check("steady_hessian_norm", hess_norm, tol, n));
    out.push_back(detail::make_check("steady_grad_norm_spread", detail::spread(grad_norm) / detail::scale_of({detail::max_abs_of(grad_norm)}), tol, n));
  }
  out.push_back(detail::make_check("bochner", rb, tol, n));
  out.push_back(detail::make_check("scalar_curvature_spread", detail::spread(tau) / detail::scale_of({detail::max_abs_of(tau)}), tol, n));
  return out;
}

struct RicciProfileResult {
  std::vector<OperatorProfile> ric;
  std::vector<OperatorProfile> hf;
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;
};

inline constexpr double kProfileTol = 1e-8;

/// Ric and H_f profiles at every point plus the checks implied by the problem's expectations.
inline RicciProfileResult ricci_profile(const SolitonProblem& problem, const std::vector<PointData>& data, const Tolerances& tol = {}) {
  RicciProfileResult out;
  const int n = static_cast<int>(data.size());
  for (const auto& d : data) {
    out.ric.push_back(operator_profile(d.curvature.ricci_op, kProfileTol));
    out.hf.push_back(operator_profile(d.scalar.hess_op, kProfileTol));
  }

  if (problem.homogeneous) {
    double dev = 0.0;
    for (std::size_t i = 1; i < out.ric.size(); ++i)
      for (const auto* set : {&out.ric, &out.hf}) {
        const auto& a = (*set)[0];
        const auto& b = (*set)[i];
        if (a.rank != b.rank || a.nilpotency != b.nilpotency) dev = std::max(dev, 1.0);
        for (std::size_t k = 0; k < a.spectrum.size(); ++k) dev = std::max(dev, std::abs(a.spectrum[k] - b.spectrum[k]));
      }
    out.checks.push_back(detail::make_check("ricci_profile_stability", dev, tol, n));
  }

  if (!problem.expected) return out;
  const ExpectedProfile& e = *problem.expected;
  const int dim = problem.dim();
  const double lambda = problem.lambda;

  if (e.ricci) {
    double dev = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& r = out.ric[i];
      switch (e.ricci->kind) {
        case RicciStructure::Kind::kZero:
          dev = std::max(dev, data[i].curvature.ricci_op.max_abs());
          for (const auto& z : out.hf[i].spectrum) dev = std::max(dev, std::abs(z - Complex{lambda, 0.0}));
          break;
        case RicciStructure::Kind::kZeroLambda:
          for (const auto& z : r.spectrum) dev = std::max(dev, std::min(std::abs(z), std::abs(z - Complex{lambda, 0.0})));
          for (const auto& z : out.hf[i].spectrum) dev = std::max(dev, std::min(std::abs(z), std::abs(z - Complex{lambda, 0.0})));
          break;
        case RicciStructure::Kind::kNilpotent:
          if (r.rank != e.ricci->rank || r.nilpotency != std::optional<int>(e.ricci->index)) dev = std::max(dev, 1.0);
          for (const auto& z : r.spectrum) dev = std::max(dev, std::abs(z));
          break;
      }
    }
    out.checks.push_back(detail::make_check("expected_ricci_structure", dev, tol, n));
    if (e.ricci->kind == RicciStructure::Kind::kNilpotent && e.steady) {
      double m = 0.0;
      for (const auto& d : data)
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) m = std::max(m, std::abs(d.scalar.hess_op(i, j) + d.curvature.ricci_op(i, j)));
      out.checks.push_back(detail::make_check("hf_equals_minus_ric", m, tol, n));
    }
  }
  if (e.rigid) {
    double mismatches = 0.0, product = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (out.ric[i].rank + out.hf[i].rank != dim) mismatches += 1.0;
      product = std::max({product, product_norm(data[i].curvature.ricci_op, data[i].scalar.hess_op),
                          product_norm(data[i].scalar.hess_op, data[i].curvature.ricci_op)});
    }
    out.checks.push_back(detail::make_check("rigid_rank_sum", mismatches, tol, n));
    out.checks.push_back(detail::make_check("rigid_ric_hf_product", product, tol, n));
  }
  if (e.grad_causal) {
    double mismatches = 0.0;
    for (const auto& d : data)
      if (causal_type(d.curvature.g, d.scalar.grad) != *e.grad_causal) mismatches += 1.0;
    out.checks.push_back(detail::make_check("expected_grad_causal_type", mismatches, tol, n));
  }
  if (e.grad_norm_sq) {
    double m = 0.0;
    for (const auto& d : data) m = std::max(m, std::abs(d.scalar.grad_norm_sq - *e.grad_norm_sq));
    out.checks.push_back(detail::make_check("expected_grad_norm_sq", m / detail::scale_of({std::abs(*e.grad_norm_sq)}), tol, n));
  }
  if (e.hess_norm_sq) {
    double m = 0.0;
    for (const auto& d : data) m = std::max(m, std::abs(d.scalar.hess_norm_sq - *e.hess_norm_sq));
    out.checks.push_back(detail::make_check("expected_hess_norm_sq", m / detail::scale_of({std::abs(*e.hess_norm_sq)}), tol, n));
  }
  return out;
}

inline const char* kSignNote =
    "sign: with R(X,Y,Z,W) = g(R(X,Y)W,Z) the checks use R(X,Y,Z,grad f) = -[(nabla_X rho)(Y,Z) - (nabla_Y rho)(X,Z)] "
    "and (nabla_{grad f} Ric) + Ric o H_f = -R(grad f, .) grad f";

/// Full report over `points`.
inline CheckReport verify(const SolitonProblem& problem, const std::vector<std::vector<double>>& points, const Tolerances& tol = {}) {
  if (points.empty()) throw ArgumentError("verify needs at least one point");
  CheckReport report;
  report.problem = problem.description;
  report.dim = problem.dim();
  report.lambda = problem.lambda;
  const auto data = evaluate_points(problem, points);
  const int n = static_cast<int>(data.size());

  double sol = 0.0;
  for (const auto& d : data) sol = std::max(sol, soliton_statistic(d, problem.lambda));
  report.checks.push_back(detail::make_check("soliton_residual", sol, tol, n));

  for (auto& c : identity_suite(problem, data, tol)) report.checks.push_back(std::move(c));

  double codazzi = 0.0;
  for (const auto& d : data) codazzi = std::max(codazzi, schouten_codazzi_residual(d));
  if (problem.expected && problem.expected->harmonic_weyl) report.checks.push_back(detail::make_check("codazzi_schouten", codazzi, tol, n));
  else report.notes.push_back("codazzi_schouten residual " + format_number(codazzi) + " (informational)");

  auto profile = ricci_profile(problem, data, tol);
  for (auto& c : profile.checks) report.checks.push_back(std::move(c));

  // Recurrence applies when grad f is null and nonzero at every point.
  bool all_null = true;
  for (const auto& d : data) all_null = all_null && causal_type(d.curvature.g, d.scalar.grad) == CausalType::kNull;
  if (all_null) {
    double r = 0.0;
    for (const auto& d : data) r = std::max(r, detail::at_point(d.curvature.point, [&] { return recurrence_theta(d)->residual; }));
    report.checks.push_back(detail::make_check("recurrence_theta", r, tol, n));
  } else {
    report.notes.push_back("recurrence_theta: not applicable (grad f is not null at every point)");
  }

  for (const auto& field : problem.killing) {
    double k = 0.0, par = 0.0;
    for (const auto& d : data) {
      detail::at_point(d.curvature.point, [&] {
        k = std::max(k, field_residuals(d.curvature, field).killing.max_abs());
        par = std::max(par, hessian_of(directional_derivative(d.curvature, field, problem.potential), d.curvature).max_abs());
        return 0;
      });
    }
    report.checks.push_back(detail::make_check("killing:" + field.label, k, tol, n));
    report.checks.push_back(detail::make_check("killing_grad_parallel:" + field.label, par, tol, n));
  }

  const auto& first = data.front();
  report.profile.ric_spectrum = profile.ric.front().spectrum;
  report.profile.ric_rank = profile.ric.front().rank;
  report.profile.ric_nilpotency = profile.ric.front().nilpotency;
  report.profile.hf_spectrum = profile.hf.front().spectrum;
  report.profile.grad_f_causal_type = causal_type(first.curvature.g, first.scalar.grad);
  report.profile.grad_f_norm_sq = first.scalar.grad_norm_sq;

  for (const auto& note : problem.notes) report.notes.push_back(note);
  report.notes.push_back(kSignNote);
  return report;
}

inline CheckReport verify(const SolitonProblem& problem, int samples, std::uint64_t seed, const Tolerances& tol = {}) {
  return verify(problem, sample_points(problem, samples, seed), tol);
}

}  // namespace solitonlab
