#pragma once

// Small dense linear algebra for curvature and Hessian operators: spectra, rank,
// nilpotency, diagonalizability, signature and causal character.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "solitonlab/errors.hpp"
#include "solitonlab/tensor.hpp"

namespace solitonlab {

using Complex = std::complex<double>;

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

enum class CausalType { kZero, kSpacelike, kTimelike, kNull };

inline const char* causal_name(CausalType t) {
  switch (t) {
    case CausalType::kZero: return "zero";
    case CausalType::kSpacelike: return "spacelike";
    case CausalType::kTimelike: return "timelike";
    case CausalType::kNull: return "null";
  }
  return "zero";
}

namespace detail {

inline Eigen::MatrixXd as_eigen(const Matrix& m) {
  const int d = m.dim();
  Eigen::MatrixXd e(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) e(i, j) = m(i, j);
  return e;
}

inline double max_norm(const Eigen::MatrixXd& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline bool complex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace detail

/// Index of nilpotency: smallest k with A^k = 0 (0 for the zero matrix), judged on
/// the scaled powers |A^k|max / |A|max^k. nullopt when A is not nilpotent.
inline std::optional<int> nilpotency_index(const Matrix& a, double tol = 1e-10) {
  const Eigen::MatrixXd m = detail::as_eigen(a);
  const double n = detail::max_norm(m);
  if (n < tol) return 0;
  const Eigen::MatrixXd scaled = m / n;
  Eigen::MatrixXd power = scaled;
  for (int k = 1; k <= a.dim(); ++k) {
    if (detail::max_norm(power) < tol) return k;
    power = power * scaled;
  }
  return std::nullopt;
}

/// Eigenvalues sorted by (real, imaginary). Exact zeros when the matrix is nilpotent.
inline std::vector<Complex> spectrum(const Matrix& a, double tol = 1e-10) {
  const int d = a.dim();
  if (nilpotency_index(a, tol)) return std::vector<Complex>(static_cast<std::size_t>(d), Complex{0.0, 0.0});
  Eigen::EigenSolver<Eigen::MatrixXd> es(detail::as_eigen(a), false);
  if (es.info() != Eigen::Success) throw DomainError("spectrum", "eigenvalue iteration did not converge");
  std::vector<Complex> out;
  for (int i = 0; i < d; ++i) out.push_back(es.eigenvalues()(i));
  std::sort(out.begin(), out.end(), detail::complex_less);
  return out;
}

/// Numerical rank: singular values above tol * sigma_max. A matrix with sigma_max < tol has rank 0.
inline int rank(const Matrix& a, double tol = 1e-8) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::as_eigen(a));
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) < tol) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++r;
  return r;
}

/// Diagonalizable over C: geometric multiplicity equals algebraic for each eigenvalue cluster.
inline bool is_diagonalizable(const Matrix& a, double tol = 1e-8) {
  const int d = a.dim();
  if (d == 0) return true;
  const Eigen::MatrixXd m = detail::as_eigen(a);
  const double scale = std::max(1.0, detail::max_norm(m));
  const auto eig = spectrum(a, tol);
  std::vector<bool> used(eig.size(), false);
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (used[i]) continue;
    int multiplicity = 0;
    Complex mu{0.0, 0.0};
    for (std::size_t j = i; j < eig.size(); ++j)
      if (!used[j] && std::abs(eig[j] - eig[i]) < std::sqrt(tol) * scale) {
        used[j] = true;
        mu += eig[j];
        ++multiplicity;
      }
    mu /= static_cast<double>(multiplicity);
    const Eigen::MatrixXcd shifted = m.cast<Complex>() - mu * Eigen::MatrixXcd::Identity(d, d);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
    const auto& s = svd.singularValues();
    int r = 0;
    for (int k = 0; k < s.size(); ++k)
      if (s(k) > std::sqrt(tol) * scale) ++r;
    if (d - r != multiplicity) return false;
  }
  return true;
}

/// Signature of a symmetric matrix. Asymmetry beyond tol is an error.
inline Signature signature(const Matrix& a, double tol = 1e-10) {
  const Eigen::MatrixXd m = detail::as_eigen(a);
  const double scale = std::max(1.0, detail::max_norm(m));
  if (detail::max_norm(m - m.transpose()) > tol * scale) throw ArgumentError("signature needs a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  Signature s;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()(i);
    if (v > tol * scale) ++s.positive;
    else if (v < -tol * scale) ++s.negative;
    else ++s.zero;
  }
  return s;
}

/// Causal character of v with respect to g. Null when |g(v,v)| is small relative to v^T|g|v.
inline CausalType causal_type(const Matrix& g, std::span<const double> v, double tol = 1e-10) {
  const int d = g.dim();
  if (static_cast<int>(v.size()) != d) throw ArgumentError("vector dimension does not match the metric");
  if (max_abs(v) < tol) return CausalType::kZero;
  // threshold scaled by |g| |v|^2 so round-off in tiny components of v cannot decide the type
  double q = 0.0, gmax = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      q += g(i, j) * v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
      gmax = std::max(gmax, std::abs(g(i, j)));
    }
  const double vmax = max_abs(v);
  const double qa = gmax * vmax * vmax * d;
  if (std::abs(q) <= tol * qa) return CausalType::kNull;
  return q > 0.0 ? CausalType::kSpacelike : CausalType::kTimelike;
}

struct OperatorProfile {
  std::vector<Complex> spectrum;
  int rank = 0;
  int kernel_dim = 0;
  std::optional<int> nilpotency;  // nullopt: not nilpotent
  bool diagonalizable = true;
};

inline OperatorProfile operator_profile(const Matrix& a, double tol = 1e-8) {
  OperatorProfile p;
  p.nilpotency = nilpotency_index(a, tol);
  p.spectrum = spectrum(a, tol);
  p.rank = rank(a, tol);
  p.kernel_dim = a.dim() - p.rank;
  p.diagonalizable = is_diagonalizable(a, tol);
  return p;
}

/// Every eigenvalue lies within tol of one of `targets` on the real axis.
inline bool spectrum_within(const std::vector<Complex>& spec, std::initializer_list<double> targets, double tol) {
  for (const auto& z : spec) {
    bool hit = false;
    for (double t : targets) hit = hit || std::abs(z - Complex{t, 0.0}) <= tol;
    if (!hit) return false;
  }
  return true;
}

/// Largest |entry| of A*B.
inline double product_norm(const Matrix& a, const Matrix& b) { return matmul(a, b).max_abs(); }

}  // namespace solitonlab
