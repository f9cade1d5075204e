#pragma once

// Pointwise pseudo-Riemannian tensor calculus on coordinate metrics.
//
// Conventions (coordinate fields d_i):
//   Gamma^k_ij   = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)
//   R(X,Y)Z      = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//   riemann_op(l,c,a,b) = component l of R(d_a, d_b) d_c
//   rho(Y,Z)     = trace(X -> R(X,Y)Z)
//   R(X,Y,Z,W)   = g(R(X,Y)W, Z)          (riemann(a,b,c,d))
// With these choices the Cahen-Wallach metric 2dtdy + kappa x^2 dy^2 + dx^2 has
// R(d_y,d_x,d_y,d_x) = -kappa and rho(d_y,d_y) = -kappa.
//
// Derivatives of curvature are exact: the metric is evaluated as an order-3 jet and the
// connection, curvature and Ricci tensor are carried as jets of decreasing order.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "solitonlab/errors.hpp"
#include "solitonlab/expr.hpp"
#include "solitonlab/jets.hpp"
#include "solitonlab/tensor.hpp"

namespace solitonlab {

/// Smooth scalar function of the coordinates that can produce jets.
class ScalarField {
 public:
  using Evaluator = std::function<Jet(std::span<const double> point, int order)>;

  ScalarField() = default;
  ScalarField(std::string description, Evaluator eval) : description_(std::move(description)), eval_(std::move(eval)) {}

  static ScalarField from_expr(const Expr& e, const Bindings& bindings) {
    auto compiled = std::make_shared<const CompiledExpr>(e, bindings);
    return ScalarField(to_string(e), [compiled](std::span<const double> p, int order) { return compiled->jet(p, order); });
  }

  Jet jet(std::span<const double> point, int order) const { return eval_(point, order); }
  double value(std::span<const double> point) const { return eval_(point, 0).value(); }
  const std::string& description() const noexcept { return description_; }
  explicit operator bool() const noexcept { return static_cast<bool>(eval_); }

 private:
  std::string description_;
  Evaluator eval_;
};

/// Vector field given by its coordinate components X^i.
struct VectorField {
  std::string label;
  std::vector<ScalarField> components;
};

/// Coordinate metric g_ij given by expressions; symmetric, lower triangle authoritative.
class MetricSpec {
 public:
  MetricSpec() = default;

  /// `entries` maps (i, j) to g_ij; missing pairs are zero. Listing both (i, j) and (j, i) is an error.
  MetricSpec(std::vector<std::string> coords, const std::map<std::pair<int, int>, Expr>& entries, ParamTable params)
      : coords_(std::move(coords)), params_(std::move(params)) {
    const int d = dim();
    if (d < 1 || d > kMaxJetDim) throw ArgumentError("metric dimension must lie in [1, 8]");
    exprs_.assign(static_cast<std::size_t>(d * (d + 1) / 2), Expr::number(0.0));
    std::vector<bool> seen(exprs_.size(), false);
    for (const auto& [ij, e] : entries) {
      const auto [i, j] = ij;
      if (i < 0 || j < 0 || i >= d || j >= d) throw ArgumentError("metric entry index out of range");
      const std::size_t t = tri(i, j);
      if (seen[t]) throw ArgumentError("metric entry (" + coords_[static_cast<std::size_t>(i)] + "," + coords_[static_cast<std::size_t>(j)] + ") given twice");
      seen[t] = true;
      exprs_[t] = e;
    }
    const Bindings b{coords_, params_};
    for (const auto& e : exprs_) compiled_.emplace_back(e, b);
  }

  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const noexcept { return coords_; }
  const ParamTable& params() const noexcept { return params_; }
  Bindings bindings() const { return {coords_, params_}; }

  int coord_index(const std::string& name) const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] == name) return static_cast<int>(i);
    throw ArgumentError("unknown coordinate '" + name + "'");
  }

  const Expr& entry(int i, int j) const { return exprs_[tri(i, j)]; }
  Jet component(int i, int j, std::span<const double> point, int order) const { return compiled_[tri(i, j)].jet(point, order); }

  Matrix values(std::span<const double> point) const {
    const int d = dim();
    Matrix g(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j) g(i, j) = g(j, i) = compiled_[tri(i, j)].value(point);
    return g;
  }

 private:
  static std::size_t tri(int i, int j) {
    if (i < j) std::swap(i, j);
    return static_cast<std::size_t>(i * (i + 1) / 2 + j);
  }

  std::vector<std::string> coords_;
  ParamTable params_;
  std::vector<Expr> exprs_;
  std::vector<CompiledExpr> compiled_;
};

/// Metric, inverse and Levi-Civita connection at a point.
struct Connection {
  std::vector<double> point;
  Matrix g;                  // g_ij
  Matrix ginv;               // g^ij
  double det = 0.0;
  Tensor<3> gamma;           // gamma(k,i,j) = Gamma^k_ij
  Tensor<4> dgamma;          // dgamma(a,k,i,j) = d_a Gamma^k_ij
  Tensor<5> ddgamma;         // ddgamma(a,b,k,i,j) = d_a d_b Gamma^k_ij
  Tensor<2, Jet> g_jet;      // order 3
  Tensor<2, Jet> ginv_jet;   // order 3
  Tensor<3, Jet> gamma_jet;  // order 2

  int dim() const noexcept { return g.dim(); }
};

/// Every pointwise curvature quantity used by the checks.
struct CurvaturePack : Connection {
  Tensor<4> riemann_op;  // riemann_op(l,c,a,b) = (R(d_a,d_b)d_c)^l
  Tensor<4> riemann;     // riemann(a,b,c,d) = g(R(d_a,d_b)d_d, d_c)
  Matrix ricci;          // rho_ij
  Matrix ricci_op;       // Ric^i_j = g^ia rho_aj
  double scalar = 0.0;   // tau
  Tensor<3> dricci;      // dricci(k,i,j) = d_k rho_ij
  Vector dscalar;        // d_k tau
  Tensor<3> nabla_ricci; // nabla_ricci(k,i,j) = (nabla_k rho)_ij
};

/// Gradient, Hessian and derived scalars of a potential at a point.
struct ScalarPack {
  double value = 0.0;
  Vector df;                  // d_i f
  Vector grad;                // (grad f)^i = g^ij d_j f
  Matrix hess;                // Hess_ij = d_i d_j f - Gamma^k_ij d_k f
  Matrix hess_op;             // H^i_j = g^ia Hess_aj
  double laplacian = 0.0;     // g^ij Hess_ij
  double grad_norm_sq = 0.0;  // g(grad f, grad f)
  double hess_norm_sq = 0.0;  // g^ia g^jb Hess_ij Hess_ab
  Vector grad_laplacian;      // grad of the Laplacian, contravariant
  double laplacian_of_grad_norm_sq = 0.0;
};

namespace detail {

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
  const int d = m.dim();
  Eigen::MatrixXd e(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) e(i, j) = m(i, j);
  return e;
}

}  // namespace detail

/// Metric, its inverse and the connection with two derivatives, all at `point`.
inline Connection connection(const MetricSpec& spec, std::span<const double> point) {
  const int d = spec.dim();
  if (static_cast<int>(point.size()) != d) throw ArgumentError("point dimension does not match the metric");
  Connection c;
  c.point.assign(point.begin(), point.end());
  c.g_jet = Tensor<2, Jet>(d);
  c.g = Matrix(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) {
      c.g_jet(i, j) = spec.component(i, j, point, 3);
      c.g_jet(j, i) = c.g_jet(i, j);
      c.g(i, j) = c.g(j, i) = c.g_jet(i, j).value();
    }

  const Eigen::MatrixXd g0 = detail::to_eigen(c.g);
  double hadamard = 1.0;
  for (int i = 0; i < d; ++i) hadamard *= std::max(g0.row(i).norm(), 1e-300);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g0);
  c.det = lu.determinant();
  if (!(std::abs(c.det) > 1e-12 * hadamard))
    throw SingularMetricError("metric is degenerate at the evaluated point (|det g| = " + format_number(std::abs(c.det)) + ")");
  const Eigen::MatrixXd a0 = lu.inverse();

  // Inverse jet by the terminating Neumann series sum_k (-A0 N)^k A0, N = G - G(p).
  Tensor<2, Jet> m(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Jet acc(d, 3);
      for (int k = 0; k < d; ++k) {
        if (a0(i, k) == 0.0) continue;
        acc += (c.g_jet(k, j) - c.g(k, j)) * (-a0(i, k));
      }
      m(i, j) = std::move(acc);
    }
  Tensor<2, Jet> term(d), sum(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) term(i, j) = sum(i, j) = Jet::constant(d, 3, a0(i, j));
  for (int power = 1; power <= kMaxJetOrder; ++power) {
    Tensor<2, Jet> next(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Jet acc(d, 3);
        for (int k = 0; k < d; ++k) acc += m(i, k) * term(k, j);
        next(i, j) = std::move(acc);
      }
    term = std::move(next);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) sum(i, j) += term(i, j);
  }
  c.ginv_jet = std::move(sum);
  c.ginv = Matrix(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) c.ginv(i, j) = c.ginv_jet(i, j).value();

  // Christoffel symbols of the first kind, then raised.
  Tensor<3, Jet> dg(d);  // dg(l,i,j) = d_l g_ij, order 2
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j) dg(l, i, j) = dg(l, j, i) = c.g_jet(i, j).derivative(l);
  Tensor<3, Jet> lowered(d);  // lowered(l,i,j) = Gamma_lij
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j) lowered(l, i, j) = lowered(l, j, i) = (dg(i, j, l) + dg(j, i, l) - dg(l, i, j)) * 0.5;
  c.gamma_jet = Tensor<3, Jet>(d);
  c.gamma = Tensor<3>(d);
  c.dgamma = Tensor<4>(d);
  c.ddgamma = Tensor<5>(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j) {
        Jet acc(d, 2);
        for (int l = 0; l < d; ++l) acc += c.ginv_jet(k, l).truncated(2) * lowered(l, i, j);
        c.gamma(k, i, j) = c.gamma(k, j, i) = acc.value();
        for (int a = 0; a < d; ++a) {
          c.dgamma(a, k, i, j) = c.dgamma(a, k, j, i) = acc.d(a);
          for (int b = 0; b < d; ++b) c.ddgamma(a, b, k, i, j) = c.ddgamma(a, b, k, j, i) = acc.d(a, b);
        }
        c.gamma_jet(k, j, i) = acc;
        c.gamma_jet(k, i, j) = std::move(acc);
      }
  return c;
}

/// Full curvature data at `point`.
inline CurvaturePack curvature(const MetricSpec& spec, std::span<const double> point) {
  CurvaturePack p;
  static_cast<Connection&>(p) = connection(spec, point);
  const int d = p.dim();

  Tensor<3, Jet> gamma1(d);      // order 1
  Tensor<4, Jet> dgamma_jet(d);  // dgamma_jet(a,k,i,j), order 1
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        gamma1(k, i, j) = p.gamma_jet(k, i, j).truncated(1);
        for (int a = 0; a < d; ++a) dgamma_jet(a, k, i, j) = p.gamma_jet(k, i, j).derivative(a);
      }

  // riemann_op(l,c,a,b) = d_a Gamma^l_bc - d_b Gamma^l_ac + Gamma^l_am Gamma^m_bc - Gamma^l_bm Gamma^m_ac
  Tensor<4, Jet> rop(d);
  p.riemann_op = Tensor<4>(d);
  for (int l = 0; l < d; ++l)
    for (int c = 0; c < d; ++c)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          if (b < a) {
            rop(l, c, a, b) = -rop(l, c, b, a);
          } else if (a == b) {
            rop(l, c, a, b) = Jet(d, 1);
          } else {
            Jet acc = dgamma_jet(a, l, b, c) - dgamma_jet(b, l, a, c);
            for (int m = 0; m < d; ++m) acc += gamma1(l, a, m) * gamma1(m, b, c) - gamma1(l, b, m) * gamma1(m, a, c);
            rop(l, c, a, b) = std::move(acc);
          }
          p.riemann_op(l, c, a, b) = rop(l, c, a, b).value();
        }

  p.riemann = Tensor<4>(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          double s = 0.0;
          for (int l = 0; l < d; ++l) s += p.g(c, l) * p.riemann_op(l, e, a, b);
          p.riemann(a, b, c, e) = s;
        }

  Tensor<2, Jet> ricci_jet(d);
  p.ricci = Matrix(d);
  p.dricci = Tensor<3>(d);
  for (int b = 0; b < d; ++b)
    for (int c = 0; c < d; ++c) {
      Jet acc(d, 1);
      for (int a = 0; a < d; ++a) acc += rop(a, c, a, b);
      p.ricci(b, c) = acc.value();
      for (int k = 0; k < d; ++k) p.dricci(k, b, c) = acc.d(k);
      ricci_jet(b, c) = std::move(acc);
    }

  Jet tau(d, 1);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) tau += p.ginv_jet(i, j).truncated(1) * ricci_jet(i, j);
  p.scalar = tau.value();
  p.dscalar.assign(static_cast<std::size_t>(d), 0.0);
  for (int k = 0; k < d; ++k) p.dscalar[static_cast<std::size_t>(k)] = tau.d(k);

  p.ricci_op = matmul(p.ginv, p.ricci);

  p.nabla_ricci = Tensor<3>(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = p.dricci(k, i, j);
        for (int a = 0; a < d; ++a) s -= p.gamma(a, k, i) * p.ricci(a, j) + p.gamma(a, k, j) * p.ricci(i, a);
        p.nabla_ricci(k, i, j) = s;
      }
  return p;
}

/// Covariant Hessian d_i d_j h - Gamma^k_ij d_k h of a scalar jet of order >= 2.
inline Matrix hessian_of(const Jet& h, const Connection& c) {
  const int d = c.dim();
  Matrix out(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = h.d(i, j);
      for (int k = 0; k < d; ++k) s -= c.gamma(k, i, j) * h.d(k);
      out(i, j) = out(j, i) = s;
    }
  return out;
}

inline double trace_with_inverse(const Matrix& t, const Connection& c) {
  double s = 0.0;
  for (int i = 0; i < c.dim(); ++i)
    for (int j = 0; j < c.dim(); ++j) s += c.ginv(i, j) * t(i, j);
  return s;
}

/// Gradient, Hessian, Laplacian and Bochner ingredients of `f` at the pack's point.
inline ScalarPack scalar_pack(const Connection& c, const ScalarField& f) {
  const int d = c.dim();
  const Jet fj = f.jet(c.point, 3);
  ScalarPack s;
  s.value = fj.value();

  std::vector<Jet> df;  // order 2
  for (int i = 0; i < d; ++i) df.push_back(fj.derivative(i));
  s.df.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) s.df[static_cast<std::size_t>(i)] = df[static_cast<std::size_t>(i)].value();

  std::vector<Jet> grad;  // order 2
  Jet norm_sq(d, 2);
  for (int i = 0; i < d; ++i) {
    Jet acc(d, 2);
    for (int j = 0; j < d; ++j) acc += c.ginv_jet(i, j).truncated(2) * df[static_cast<std::size_t>(j)];
    norm_sq += acc * df[static_cast<std::size_t>(i)];
    grad.push_back(std::move(acc));
  }
  s.grad.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) s.grad[static_cast<std::size_t>(i)] = grad[static_cast<std::size_t>(i)].value();
  s.grad_norm_sq = norm_sq.value();

  Tensor<2, Jet> hess(d);  // order 1
  s.hess = Matrix(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) {
      Jet acc = df[static_cast<std::size_t>(i)].derivative(j);
      for (int k = 0; k < d; ++k) acc -= c.gamma_jet(k, i, j).truncated(1) * df[static_cast<std::size_t>(k)].truncated(1);
      s.hess(i, j) = s.hess(j, i) = acc.value();
      hess(j, i) = acc;
      hess(i, j) = std::move(acc);
    }
  s.hess_op = matmul(c.ginv, s.hess);

  Jet lap(d, 1);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) lap += c.ginv_jet(i, j).truncated(1) * hess(i, j);
  s.laplacian = lap.value();
  s.grad_laplacian.assign(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s.grad_laplacian[static_cast<std::size_t>(i)] += c.ginv(i, j) * lap.d(j);

  double hn = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) hn += s.hess_op(i, j) * s.hess_op(j, i);
  s.hess_norm_sq = hn;

  s.laplacian_of_grad_norm_sq = trace_with_inverse(hessian_of(norm_sq, c), c);
  return s;
}

inline ScalarPack scalar_pack(const MetricSpec& spec, const ScalarField& f, std::span<const double> point) {
  return scalar_pack(connection(spec, point), f);
}

/// Killing and parallel residuals of a vector field X at the pack's point.
struct FieldResiduals {
  Matrix killing;   // nabla_i X_j + nabla_j X_i
  Matrix parallel;  // parallel(k,i) = (nabla_i X)^k = d_i X^k + Gamma^k_ij X^j
};

inline FieldResiduals field_residuals(const Connection& c, const VectorField& x) {
  const int d = c.dim();
  if (static_cast<int>(x.components.size()) != d) throw ArgumentError("vector field has the wrong number of components");
  std::vector<Jet> xj;
  for (const auto& comp : x.components) xj.push_back(comp.jet(c.point, 1));
  FieldResiduals r{Matrix(d), Matrix(d)};
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) {
      double s = xj[static_cast<std::size_t>(k)].d(i);
      for (int j = 0; j < d; ++j) s += c.gamma(k, i, j) * xj[static_cast<std::size_t>(j)].value();
      r.parallel(k, i) = s;
    }
  // nabla_i X_j = g_jk (nabla_i X)^k since nabla g = 0.
  Matrix lowered(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += c.g(j, k) * r.parallel(k, i);
      lowered(i, j) = s;
    }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) r.killing(i, j) = lowered(i, j) + lowered(j, i);
  return r;
}

inline FieldResiduals field_residuals(const MetricSpec& spec, const VectorField& x, std::span<const double> point) {
  return field_residuals(connection(spec, point), x);
}

/// Jet of X(f) = X^i d_i f, order 2.
inline Jet directional_derivative(const Connection& c, const VectorField& x, const ScalarField& f) {
  const int d = c.dim();
  const Jet fj = f.jet(c.point, 3);
  Jet out(d, 2);
  for (int i = 0; i < d; ++i) out += x.components[static_cast<std::size_t>(i)].jet(c.point, 2) * fj.derivative(i);
  return out;
}

}  // namespace solitonlab
