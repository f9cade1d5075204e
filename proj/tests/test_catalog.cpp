#include <gtest/gtest.h>

#include <cmath>

#include "solitonlab/catalog.hpp"
#include "solitonlab/verify.hpp"
#include "support.hpp"

using namespace solitonlab;

namespace {

bool inside(const SolitonProblem& p, const std::vector<double>& pt) {
  for (std::size_t i = 0; i < pt.size(); ++i)
    if (pt[i] < p.box[i].lo || pt[i] > p.box[i].hi) return false;
  return true;
}

FamilyArgs walker_args() { return {{}, {{"phi", "exp(x)*(1+0.3*y)"}, {"potential", "x"}}}; }

}  // namespace

TEST(Instantiate, EveryListedFamily) {
  for (const auto& f : family_list()) {
    const auto p = instantiate(f.name, f.name == "walker3" ? walker_args() : FamilyArgs{});
    EXPECT_EQ(p.family, f.name);
    EXPECT_EQ(static_cast<int>(p.box.size()), p.dim());
    EXPECT_FALSE(p.description.empty());
  }
}

TEST(Instantiate, NbExample) {
  const auto p = instantiate("N_b", {{{"b", 1.0}}, {}});
  ASSERT_TRUE(p.phi.has_value());
  EXPECT_EQ(to_string(*p.phi), to_string(parse("exp(1*x)/1")));
  EXPECT_EQ(p.lambda, 0.0);
  const auto& e = *p.expected;
  EXPECT_TRUE(e.steady);
  EXPECT_EQ(e.grad_causal, CausalType::kSpacelike);
  EXPECT_EQ(e.grad_norm_sq, 1.0);
  ASSERT_TRUE(e.ricci.has_value());
  EXPECT_EQ(e.ricci->kind, RicciStructure::Kind::kNilpotent);
  EXPECT_EQ(e.ricci->index, 2);
  EXPECT_EQ(e.ricci->rank, 1);
  const std::vector<double> pt{0.1, 0.4, -0.2};
  EXPECT_DOUBLE_EQ(p.potential.value(pt), 0.4);
}

TEST(Instantiate, CWplusExample) {
  const auto p = instantiate("CWplus");
  const auto& e = *p.expected;
  EXPECT_TRUE(e.steady);
  EXPECT_EQ(e.grad_causal, CausalType::kNull);
  EXPECT_TRUE(e.locally_symmetric);
}

TEST(Instantiate, MinkowskiExample) {
  const auto p = instantiate("minkowski_rigid", {{{"d", 3}, {"nu", 1}, {"lambda", 0.7}}, {}});
  const auto& e = *p.expected;
  EXPECT_FALSE(e.steady);
  EXPECT_EQ(e.ricci->kind, RicciStructure::Kind::kZero);
  EXPECT_DOUBLE_EQ(p.lambda, 0.7);
}

TEST(Instantiate, Errors) {
  EXPECT_THROW((void)instantiate("no_such_family"), ArgumentError);
  EXPECT_THROW((void)instantiate("N_b", {{{"b", 0.0}}, {}}), ArgumentError);
  EXPECT_THROW((void)instantiate("N_b", {{{"q", 1.0}}, {}}), ArgumentError);
  EXPECT_THROW((void)instantiate("P_c", {{{"c", 1.0}, {"k", 0.2}}, {}}), ArgumentError);
  EXPECT_THROW((void)instantiate("sphere_rigid", {{{"lambda", -1.0}}, {}}), ArgumentError);
  EXPECT_THROW((void)instantiate("walker3", {{}, {{"phi", "x^2"}}}), ArgumentError);
  EXPECT_THROW((void)instantiate("cahen_wallach", {{{"n", 7}}, {}}), ArgumentError);
  // box sweep: phi with a pole inside the default box
  EXPECT_THROW((void)instantiate("walker3", {{}, {{"phi", "1/y"}, {"potential", "0"}}}), Error);
  EXPECT_THROW((void)instantiate("N_b", {{}, {{"b", "y"}}}), ArgumentError);
}

// A number given for a function parameter is the constant function.
TEST(Instantiate, NumericFunctionParameter) {
  const auto p = instantiate("thm12_case2", {{{"a", 3.0}}, {}});
  EXPECT_NE(p.description.find("a=3"), std::string::npos) << p.description;
  const auto w = instantiate("walker3", {{{"potential", 0.0}}, {{"phi", "x*y"}}});
  EXPECT_EQ(w.family, "walker3");
}

TEST(Sampling, DeterministicAndInsideBox) {
  for (const auto& f : family_list()) {
    const auto p = instantiate(f.name, f.name == "walker3" ? walker_args() : FamilyArgs{});
    const auto a = sample_points(p, 3, 42), b = sample_points(p, 3, 42), c = sample_points(p, 3, 43);
    EXPECT_EQ(a, b);
    EXPECT_NE(a[0], c[0]);
    for (const auto& pt : a) EXPECT_TRUE(inside(p, pt));
  }
  EXPECT_THROW((void)sample_points(instantiate("CWplus"), 0, 1), ArgumentError);
}

TEST(Sampling, DocumentedAlgorithm) {
  const std::vector<Interval> box{{-1.0, 1.0}, {2.0, 3.0}};
  std::mt19937_64 gen(99);
  const auto pts = sample_points(box, 2, 99);
  for (const auto& p : pts)
    for (std::size_t i = 0; i < 2; ++i) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      EXPECT_EQ(p[i], box[i].lo + u * (box[i].hi - box[i].lo));
    }
}

TEST(Property, ExpectedProfileMatchesMeasured) {
  for (const auto& f : family_list()) {
    if (f.name == "walker3") continue;
    const auto p = instantiate(f.name);
    const auto data = evaluate_points(p, sample_points(p, 30, 3));
    const auto prof = ricci_profile(p, data);
    for (const auto& c : prof.checks) EXPECT_TRUE(c.pass) << f.name << " " << c.name << " " << c.max_residual;
    const auto& e = *p.expected;
    if (e.ricci && e.ricci->kind == RicciStructure::Kind::kNilpotent)
      for (const auto& r : prof.ric) {
        EXPECT_EQ(r.nilpotency, e.ricci->index) << f.name;
        EXPECT_EQ(r.rank, e.ricci->rank) << f.name;
        for (const auto& z : r.spectrum) EXPECT_EQ(z, Complex(0.0, 0.0));
      }
  }
}

TEST(Property, PcAlphaOde) {
  testsupport::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = rng.uniform(-2.0, 2.0), k = 2.0 + std::abs(c);
    const auto p = instantiate("P_c", {{{"c", c}, {"k", k}}, {}});
    const CompiledExpr phi(*p.phi, p.metric.bindings());
    for (const auto& pt : sample_points(p, 10, 5)) {
      // alpha = phi_xx, alpha' = phi_xxy
      const Jet j = phi.jet(pt, 3);
      const double alpha = j.d(1, 1), dalpha = j.d(1, 1, 2);
      EXPECT_NEAR(dalpha, c * std::pow(alpha, 1.5), 1e-9 * std::max(1.0, std::abs(dalpha)));
    }
  }
}

TEST(Property, PcPotentialMatchesClosedForm) {
  testsupport::Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = rng.uniform(0.2, 2.0), k = 1.0 + c, a0 = rng.uniform(-1, 1), a1 = rng.uniform(-1, 1);
    const auto p = instantiate("P_c", {{{"c", c}, {"k", k}, {"a0", a0}, {"a1", a1}}, {}});
    const double y0 = 0.5 * (p.box[2].lo + p.box[2].hi);
    for (const auto& pt : sample_points(p, 10, 6)) {
      const double y = pt[2];
      const double exact = a0 + a1 * (y - y0) - (2.0 / (c * c)) * (std::log(k - c * y) - std::log(k - c * y0)) - (2.0 / (c * (k - c * y0))) * (y - y0);
      const Jet f = p.potential.jet(pt, 2);
      EXPECT_NEAR(f.value(), exact, 1e-10);
      EXPECT_NEAR(f.d(2, 2), 2.0 / ((k - c * y) * (k - c * y)), 1e-12);
    }
  }
}

TEST(Perturbation, ChangesTheProblem) {
  const auto p = instantiate("N_b");
  const auto q = perturbed(p);
  ASSERT_TRUE(q.phi.has_value());
  EXPECT_NE(to_string(*q.phi), to_string(*p.phi));
  const auto m = instantiate("minkowski_rigid");
  const auto mq = perturbed(m);
  const std::vector<double> pt{0.1, 0.2, 0.5};
  EXPECT_NEAR(mq.potential.value(pt) - m.potential.value(pt), 0.01 * 0.125, 1e-15);
}
