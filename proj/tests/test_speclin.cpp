#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "solitonlab/speclin.hpp"
#include "support.hpp"

using namespace solitonlab;
using testsupport::Rng;

namespace {

Matrix from(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<int>(rows.size()));
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix from_eigen(const Eigen::MatrixXd& e) {
  Matrix m(static_cast<int>(e.rows()));
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.dim(), m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) e(i, j) = m(i, j);
  return e;
}

// Random matrix with condition number below `max_cond`.
Eigen::MatrixXd well_conditioned(Rng& rng, int d, double max_cond = 100.0) {
  while (true) {
    Eigen::MatrixXd p(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) p(i, j) = rng.uniform(-1, 1);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(p);
    const auto s = svd.singularValues();
    if (s(d - 1) > 0 && s(0) / s(d - 1) < max_cond) return p;
  }
}

}  // namespace

TEST(Signature, Examples) {
  const auto s = signature(from({{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  EXPECT_EQ(s.positive, 2);
  EXPECT_EQ(s.negative, 1);
  EXPECT_EQ(s.zero, 0);
  for (double phi : {-3.0, 0.0, 0.5, 7.0}) {
    const auto w = signature(from({{0, 0, 1}, {0, 1, 0}, {1, 0, phi}}));
    EXPECT_EQ(w.positive, 2);
    EXPECT_EQ(w.negative, 1);
    EXPECT_EQ(w.zero, 0);
  }
  const auto z = signature(Matrix(4));
  EXPECT_EQ(z.zero, 4);
  EXPECT_THROW((void)signature(from({{0, 1}, {0, 0}})), ArgumentError);
}

TEST(Signature, SylvesterInvariance) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = rng.integer(2, 6);
    Eigen::VectorXd diag(d);
    int pos = 0, neg = 0, zero = 0;
    for (int i = 0; i < d; ++i) {
      const int kind = rng.integer(0, 2);
      diag(i) = kind == 0 ? rng.uniform(0.5, 2) : kind == 1 ? -rng.uniform(0.5, 2) : 0.0;
      (kind == 0 ? pos : kind == 1 ? neg : zero)++;
    }
    const Eigen::MatrixXd p = well_conditioned(rng, d, 10.0);
    Eigen::MatrixXd a = p.transpose() * diag.asDiagonal() * p;
    a = 0.5 * (a + a.transpose());
    const auto s = signature(from_eigen(a), 1e-9);
    EXPECT_EQ(s.positive, pos);
    EXPECT_EQ(s.negative, neg);
    EXPECT_EQ(s.zero, zero);
  }
}

TEST(Profile, WalkerRicciShape) {
  const auto p = operator_profile(from({{0, 0, -0.5}, {0, 0, 0}, {0, 0, 0}}));
  EXPECT_EQ(p.rank, 1);
  EXPECT_EQ(p.kernel_dim, 2);
  EXPECT_EQ(p.nilpotency, 2);
  EXPECT_FALSE(p.diagonalizable);
  ASSERT_EQ(p.spectrum.size(), 3u);
  for (const auto& z : p.spectrum) EXPECT_EQ(z, Complex(0.0, 0.0));
}

TEST(Profile, ThreeStepModel) {
  const auto p = operator_profile(from({{1, -1, 1}, {1, -1, 1}, {-1, 1, 0}}));
  EXPECT_EQ(p.nilpotency, 3);
  EXPECT_EQ(p.rank, 2);
}

TEST(Profile, DiagonalProjection) {
  const double lambda = 0.7;
  const auto p = operator_profile(from({{lambda, 0, 0}, {0, lambda, 0}, {0, 0, 0}}));
  EXPECT_EQ(p.rank, 2);
  EXPECT_TRUE(p.diagonalizable);
  EXPECT_FALSE(p.nilpotency.has_value());
  EXPECT_TRUE(spectrum_within(p.spectrum, {0.0, lambda}, 1e-12));
  EXPECT_FALSE(spectrum_within(p.spectrum, {0.0}, 1e-12));
}

TEST(Profile, ZeroMatrix) {
  const auto p = operator_profile(Matrix(3));
  EXPECT_EQ(p.nilpotency, 0);
  EXPECT_EQ(p.rank, 0);
  EXPECT_EQ(p.kernel_dim, 3);
  EXPECT_TRUE(p.diagonalizable);
}

TEST(Profile, ComplexSpectrum) {
  const auto p = operator_profile(from({{0, -1}, {1, 0}}));
  ASSERT_EQ(p.spectrum.size(), 2u);
  EXPECT_NEAR(std::abs(p.spectrum[0].imag()), 1.0, 1e-12);
  EXPECT_TRUE(p.diagonalizable);
}

TEST(Property, RankPlusKernelAndNilpotentSpectrum) {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = rng.integer(1, 6);
    Matrix a(d);
    const bool upper = trial % 2 == 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (!upper || j > i) a(i, j) = rng.integer(0, 3) == 0 ? 0.0 : rng.uniform(-1, 1);
    const auto p = operator_profile(a);
    EXPECT_EQ(p.rank + p.kernel_dim, d);
    if (p.nilpotency)
      for (const auto& z : p.spectrum) EXPECT_LT(std::abs(z), 1e-8);
  }
}

TEST(Property, SimilarityInvariance) {
  Rng rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = rng.integer(2, 5);
    // a Jordan-type matrix with known structure
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(d, d);
    const int kind = trial % 3;
    for (int i = 0; i < d; ++i) {
      if (kind == 1) j(i, i) = rng.integer(0, 1) * 0.8;
      if (kind == 2) j(i, i) = rng.uniform(-2, 2);
      if (i + 1 < d && kind != 2 && rng.integer(0, 1)) j(i, i + 1) = 1.0;
      if (kind == 1 && i + 1 < d && j(i, i) != j(i + 1, i + 1)) j(i, i + 1) = 0.0;
    }
    const Eigen::MatrixXd p = well_conditioned(rng, d);
    const Matrix a = from_eigen(j);
    const Matrix b = from_eigen(p * j * p.inverse());
    const auto pa = operator_profile(a);
    const auto pb = operator_profile(b);
    EXPECT_EQ(pa.rank, pb.rank) << trial;
    EXPECT_EQ(pa.kernel_dim, pb.kernel_dim) << trial;
    EXPECT_EQ(pa.nilpotency, pb.nilpotency) << trial;
    EXPECT_EQ(pa.diagonalizable, pb.diagonalizable) << trial;
    ASSERT_EQ(pa.spectrum.size(), pb.spectrum.size());
    // a Jordan block of size k moves its eigenvalue by about eps^(1/k) under round-off
    const double tol = kind == 2 ? 1e-6 : 5e-3;
    for (std::size_t i = 0; i < pa.spectrum.size(); ++i) EXPECT_LT(std::abs(pa.spectrum[i] - pb.spectrum[i]), tol) << trial;
  }
}

// Strictly upper triangular with a full superdiagonal: index d.
// With a zero pattern the index is one plus the longest chain i < j < ... of nonzero entries.
TEST(Property, UpperTriangularNilpotency) {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = rng.integer(1, 7);
    Matrix a(d);
    std::vector<std::vector<bool>> nz(static_cast<std::size_t>(d), std::vector<bool>(static_cast<std::size_t>(d), false));
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        if (rng.integer(0, 2) == 0) {
          a(i, j) = rng.uniform(0.5, 1.5);  // positive entries: no cancellation in powers
          nz[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
        }
    std::vector<int> longest(static_cast<std::size_t>(d), 0);  // longest path (edges) starting at i
    for (int i = d - 1; i >= 0; --i)
      for (int j = i + 1; j < d; ++j)
        if (nz[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) longest[static_cast<std::size_t>(i)] = std::max(longest[static_cast<std::size_t>(i)], 1 + longest[static_cast<std::size_t>(j)]);
    const int edges = *std::max_element(longest.begin(), longest.end());
    const int expected = edges == 0 ? 0 : edges + 1;
    EXPECT_EQ(nilpotency_index(a), expected) << trial;
  }
}

TEST(Property, NonNilpotent) {
  EXPECT_FALSE(nilpotency_index(from({{1, 0}, {0, 0}})).has_value());
  EXPECT_FALSE(nilpotency_index(from({{0, 1}, {1, 0}})).has_value());
}

TEST(Causal, WalkerExamples) {
  const Matrix g = from({{0, 0, 1}, {0, 1, 0}, {1, 0, 0.37}});
  for (double b : {0.3, 1.0, 4.0}) EXPECT_EQ(causal_type(g, std::vector<double>{0, b, 0}), CausalType::kSpacelike);
  EXPECT_EQ(causal_type(g, std::vector<double>{1.7, 0, 0}), CausalType::kNull);
  EXPECT_EQ(causal_type(g, std::vector<double>{0, 0, 0}), CausalType::kZero);
  EXPECT_EQ(causal_type(g, std::vector<double>{1.0, 0, -1.0}), CausalType::kTimelike);  // -2 + 0.37
  // tiny round-off in the transverse components does not change a null verdict
  EXPECT_EQ(causal_type(g, std::vector<double>{1.7, 1e-17, 3e-18}), CausalType::kNull);
  EXPECT_THROW((void)causal_type(g, std::vector<double>{1.0, 0.0}), ArgumentError);
}
