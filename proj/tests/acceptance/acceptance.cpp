// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "solitonlab/solitonlab.hpp"

using namespace solitonlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures with a short reason; the first few reasons are reported.
class Tally {
 public:
  void require(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) reasons_ += (reasons_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  Outcome outcome() const {
    if (failures_ == 0) return {true, notes_};
    return {false, std::to_string(failures_) + " failure(s): " + reasons_};
  }

 private:
  int failures_ = 0;
  std::string reasons_, notes_;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::vector<SolitonProblem> catalog() {
  std::vector<SolitonProblem> out;
  for (const auto& f : family_list()) {
    FamilyArgs args;
    if (f.name == "walker3") args.functions = {{"phi", "exp(x)*(1+0.3*y)"}, {"potential", "x"}};
    out.push_back(instantiate(f.name, args));
  }
  return out;
}

double max6(const std::array<double, 6>& r) {
  double m = 0.0;
  for (double v : r) m = std::max(m, std::abs(v));
  return m;
}

Outcome calibration() {
  Tally t;
  const auto p = instantiate("cahen_wallach", {{{"kappa1", 1.0}}, {}});
  for (const double x : {2.0, -0.7, 0.3}) {
    const std::vector<double> pt{0.1, 0.5, x};  // (t, y, x)
    const auto c = curvature(p.metric, pt);
    t.require(std::abs(c.gamma(2, 1, 1) + x) <= 1e-12, "Gamma^x_yy");
    t.require(std::abs(c.gamma(0, 2, 1) - x) <= 1e-12, "Gamma^t_xy");
    t.require(std::abs(c.riemann(1, 2, 1, 2) + 1.0) <= 1e-12, "R(dy,dx,dy,dx)");
    t.require(std::abs(c.ricci(1, 1) + 1.0) <= 1e-12, "rho_yy");
    t.require(std::abs(c.scalar) <= 1e-12, "tau");
  }
  return t.outcome();
}

Outcome soliton_backbone() {
  Tally t;
  double worst = 0.0, weakest = 1e300;
  for (const auto& p : catalog()) {
    double m = 0.0, mp = 0.0;
    for (const auto& d : evaluate_points(p, sample_points(p, 100, 1))) m = std::max(m, soliton_statistic(d, p.lambda));
    const auto q = perturbed(p);
    for (const auto& d : evaluate_points(q, sample_points(q, 100, 1))) mp = std::max(mp, soliton_statistic(d, q.lambda));
    t.require(m < 1e-9, p.description + " residual " + sci(m));
    t.require(mp > 1e-3, p.description + " perturbed " + sci(mp));
    worst = std::max(worst, m);
    weakest = std::min(weakest, mp);
  }
  t.note("max residual " + sci(worst) + ", min perturbed " + sci(weakest));
  return t.outcome();
}

Outcome identity_suite_all() {
  Tally t;
  double worst = 0.0;
  for (const auto& p : catalog()) {
    const auto data = evaluate_points(p, sample_points(p, 100, 2));
    for (const auto& c : identity_suite(p, data)) {
      if (c.name == "steady_hessian_norm") t.require(c.max_residual < 1e-10, p.description + " " + c.name);
      else if (c.name != "scalar_curvature_spread" && c.name != "steady_grad_norm_spread") {
        t.require(c.max_residual <= 1e-8, p.description + " " + c.name + " " + sci(c.max_residual));
        worst = std::max(worst, c.max_residual);
      }
    }
  }
  const auto cw = instantiate("cahen_wallach");
  double hess = 1e300;
  for (const auto& d : evaluate_points(cw, sample_points(cw, 100, 2))) {
    double n = 0.0;
    for (double v : d.scalar.hess.data()) n += v * v;
    hess = std::min(hess, std::sqrt(n));
  }
  t.require(hess > 0.1, "Cahen-Wallach Hessian too small");
  t.note("max identity residual " + sci(worst) + ", min |Hess| on Cahen-Wallach " + sci(hess));
  return t.outcome();
}

Outcome eigenstructure() {
  Tally t;
  for (const double lambda : {0.5, 1.0, 2.0})
    for (const auto& p : {instantiate("sphere_rigid", {{{"lambda", lambda}}, {}}), instantiate("minkowski_rigid", {{{"lambda", lambda}}, {}})})
      for (const auto& d : evaluate_points(p, sample_points(p, 100, 3))) {
        const auto ric = operator_profile(d.curvature.ricci_op);
        const auto hf = operator_profile(d.scalar.hess_op);
        t.require(spectrum_within(ric.spectrum, {0.0, lambda}, 1e-10), p.description + " Spec Ric");
        t.require(spectrum_within(hf.spectrum, {0.0, lambda}, 1e-10), p.description + " Spec H_f");
        t.require(ric.rank + hf.rank == p.dim(), p.description + " rank sum");
        t.require(product_norm(d.curvature.ricci_op, d.scalar.hess_op) < 1e-10, p.description + " Ric H_f");
      }
  return t.outcome();
}

Outcome nilpotency() {
  Tally t;
  for (const auto& p : {instantiate("N_b"), instantiate("P_c"), instantiate("CWplus"), instantiate("CWminus"), instantiate("cahen_wallach")})
    for (const auto& d : evaluate_points(p, sample_points(p, 100, 4))) {
      const auto ric = operator_profile(d.curvature.ricci_op);
      t.require(ric.rank == 1, p.description + " rank");
      t.require(ric.nilpotency == 2, p.description + " index");
      double m = 0.0;
      for (int i = 0; i < p.dim(); ++i)
        for (int j = 0; j < p.dim(); ++j) m = std::max(m, std::abs(d.scalar.hess_op(i, j) + d.curvature.ricci_op(i, j)));
      t.require(m < 1e-10, p.description + " H_f + Ric");
    }
  Matrix model(3);
  const double h[3][3] = {{1, -1, 1}, {1, -1, 1}, {-1, 1, 0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) model(i, j) = h[i][j];
  t.require(operator_profile(model).nilpotency == 3, "rank-2 model index");
  return t.outcome();
}

Outcome causal_types() {
  Tally t;
  for (const double b : {0.5, 1.0, 2.0}) {
    const auto p = instantiate("N_b", {{{"b", b}}, {}});
    for (const auto& d : evaluate_points(p, sample_points(p, 50, 5))) {
      t.require(causal_type(d.curvature.g, d.scalar.grad) == CausalType::kSpacelike, "N_b spacelike");
      t.require(std::abs(d.scalar.grad_norm_sq - b * b) < 1e-10, "N_b |grad f|^2");
    }
  }
  for (const auto& p : {instantiate("P_c"), instantiate("CWplus"), instantiate("CWminus"), instantiate("cahen_wallach")})
    for (const auto& d : evaluate_points(p, sample_points(p, 50, 5)))
      t.require(causal_type(d.curvature.g, d.scalar.grad) == CausalType::kNull, p.description + " null");
  for (const double a : {0.5, 1.0, 3.0}) {
    const auto p = instantiate("timelike_linear", {{{"a", a}}, {}});
    for (const auto& d : evaluate_points(p, sample_points(p, 50, 5))) {
      t.require(causal_type(d.curvature.g, d.scalar.grad) == CausalType::kTimelike, "timelike");
      t.require(std::abs(d.scalar.grad_norm_sq + a * a) < 1e-10, "timelike |grad f|^2");
    }
  }
  // parallel residual of grad f itself on cahen_wallach
  const auto cw = instantiate("cahen_wallach");
  std::vector<ScalarField> comps;
  for (int k = 0; k < cw.dim(); ++k)
    comps.push_back(ScalarField("(grad f)^" + std::to_string(k), [f = cw.potential, k, spec = cw.metric](std::span<const double> pt, int order) {
      // (grad f)^k = g^{kj} d_j f as a jet
      const auto c = connection(spec, pt);
      const Jet fj = f.jet(pt, order + 1);
      Jet out = Jet::constant(static_cast<int>(pt.size()), order, 0.0);
      for (int j = 0; j < static_cast<int>(pt.size()); ++j) out = out + c.ginv_jet(k, j).truncated(order) * fj.derivative(j);
      return out;
    }));
  const VectorField grad{"grad f", comps};
  double worst = 0.0;
  for (const auto& pt : sample_points(cw, 50, 5)) worst = std::max(worst, field_residuals(cw.metric, grad, pt).parallel.max_abs());
  t.require(worst < 1e-10, "grad f parallel residual on cahen_wallach is " + sci(worst) + " (nabla grad f = H_f = -Ric is nonzero)");
  t.note("grad f parallel residual " + sci(worst));
  return t.outcome();
}

Outcome classification() {
  Tally t;
  std::mt19937_64 gen(7);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); };
  const auto grid = walker_grid({-1.0, 1.0}, {-0.5, 0.5});
  auto fresh = walker_grid({-0.9, 0.85}, {-0.45, 0.4}, 6);
  for (auto& p : fresh) p[0] = 0.3;
  for (int i = 0; i < 20; ++i) {
    const double alpha = uni(0.3, 2.0) * (i % 2 ? -1 : 1);
    const auto p = instantiate("thm12_case1", {{{"alpha", alpha}},
                                               {{"a", format_number(uni(0.5, 2)) + "+" + format_number(uni(-0.3, 0.3)) + "*y"},
                                                {"b", format_number(uni(-1, 1)) + "*y^2"},
                                                {"c", "sin(" + format_number(uni(-1, 1)) + "*y)"}}});
    const auto cls = classify(*p.phi, grid);
    t.require(cls.verdict == WalkerVerdict::kCaseI && std::abs(cls.alpha - alpha) < 1e-10, "CaseI round trip");
    if (cls.verdict == WalkerVerdict::kCaseI) {
      const auto f = construct_potential(*p.phi, cls, 0.0);
      for (const auto& pt : fresh) t.require(max6(walker_residuals(*p.phi, f.potential, 0.0, pt)) < 1e-8, "CaseI potential");
    }
  }
  for (int i = 0; i < 20; ++i) {
    const auto p = instantiate("thm12_case2", {{}, {{"a", format_number(uni(0.5, 2)) + "+" + format_number(uni(-0.5, 0.5)) + "*y^2"},
                                                   {"b", format_number(uni(-1, 1)) + "*y"}}});
    const auto cls = classify(*p.phi, grid);
    t.require(cls.verdict == WalkerVerdict::kCaseII, "CaseII round trip");
    if (cls.verdict == WalkerVerdict::kCaseII) {
      const auto f = construct_potential(*p.phi, cls, 0.0);
      for (const auto& pt : fresh) t.require(max6(walker_residuals(*p.phi, f.potential, 0.0, pt)) < 1e-8, "CaseII potential");
    }
  }
  t.require(classify(parse("2*x*y + y^3 - 1"), grid).verdict == WalkerVerdict::kFlat, "Flat");
  t.require(classify(parse("x^4"), grid).verdict == WalkerVerdict::kNotSoliton, "NotSoliton");
  // cross-oracle: the six Walker equations against Hess f + rho - lambda g
  double worst = 0.0;
  std::vector<SolitonProblem> pool;
  for (const char* f : {"N_b", "P_c", "CWplus", "CWminus", "thm12_case1", "thm12_case2"}) pool.push_back(instantiate(f));
  pool.push_back(instantiate("walker3", {{{"lambda", 0.4}}, {{"phi", "x^2*y + exp(0.5*x)"}, {"potential", "0.2*x^2 + 0.4*t*y + x*y"}}}));
  const std::size_t n = pool.size();
  for (std::size_t i = 0; i < n; ++i) pool.push_back(perturbed(pool[i]));
  for (const auto& p : pool) {
    const CompiledExpr phi(*p.phi, p.metric.bindings());
    for (const auto& pt : sample_points(p, 8, 8)) {
      const auto r = walker_residuals(phi, p.potential, p.lambda, pt);
      const Matrix s = soliton_residual(p, pt);
      const double expect[6] = {s(0, 0), s(0, 1), s(1, 1), s(0, 2), 2 * s(1, 2), -2 * s(2, 2)};
      for (int k = 0; k < 6; ++k) worst = std::max(worst, std::abs(r[static_cast<std::size_t>(k)] - expect[k]));
    }
  }
  t.require(worst < 1e-10, "cross-oracle " + sci(worst));
  t.note("cross-oracle max difference " + sci(worst));
  return t.outcome();
}

Outcome family_matching() {
  Tally t;
  std::mt19937_64 gen(8);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); };
  for (int i = 0; i < 20; ++i) {
    const double b = uni(0.2, 3.0) * (i % 2 ? -1 : 1);
    const auto nb = instantiate("N_b", {{{"b", b}}, {}});
    const auto m = match_homogeneous_family(*nb.phi, walker_grid(nb.box[1], nb.box[2]));
    t.require(m.family == HomogeneousFamily::kNb && std::abs(m.parameter - b) < 1e-8, "N_b");
    const double c = uni(0.1, 2.0) * (i % 2 ? -1 : 1);
    const auto pc = instantiate("P_c", {{{"c", c}, {"k", 1.0 + std::abs(c)}}, {}});
    const auto mc = match_homogeneous_family(*pc.phi, walker_grid(pc.box[1], pc.box[2]));
    t.require(mc.family == HomogeneousFamily::kPc && std::abs(mc.parameter - c) < 1e-8, "P_c");
    const Interval xr{uni(-2, -0.5), uni(0.5, 2)}, yr{uni(-1, 0), uni(0.1, 1)};
    t.require(match_homogeneous_family(parse("x^2"), walker_grid(xr, yr)).family == HomogeneousFamily::kCWplus, "CWplus");
    t.require(match_homogeneous_family(parse("-x^2"), walker_grid(xr, yr)).family == HomogeneousFamily::kCWminus, "CWminus");
  }
  t.require(match_homogeneous_family(parse("x^3"), walker_grid({-1, 1}, {-0.5, 0.5})).family == HomogeneousFamily::kNone, "x^3 rejected");
  return t.outcome();
}

Outcome codazzi() {
  Tally t;
  double zero = 0.0;
  for (const auto& p : {instantiate("cahen_wallach"), instantiate("CWplus"), instantiate("CWminus"), instantiate("minkowski_rigid"),
                        instantiate("sphere_rigid"), instantiate("timelike_linear")})
    for (const auto& pt : sample_points(p, 50, 9)) zero = std::max(zero, schouten_codazzi_residual(p, pt));
  t.require(zero < 1e-10, "symmetric entries " + sci(zero));
  const auto w = instantiate("thm12_case1", {{}, {{"a", "1+0.3*y"}}});
  double nonzero = 0.0;
  for (const auto& pt : sample_points(w, 50, 9)) nonzero = std::max(nonzero, schouten_codazzi_residual(w, pt));
  t.require(nonzero > 1e-4, "y-dependent Walker soliton " + sci(nonzero));
  t.note("symmetric " + sci(zero) + ", Walker " + sci(nonzero));
  return t.outcome();
}

std::string run_tool(const std::string& args) {
  std::string out;
  FILE* f = popen((std::string(SOLITONLAB_CLI_PATH) + " " + args + " 2>/dev/null").c_str(), "r");
  if (!f) return out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  pclose(f);
  return out;
}

Outcome determinism() {
  Tally t;
  for (const char* args : {"verify --family N_b --param b=1.5 --samples 100 --seed 7 --format json",
                           "verify --family cahen_wallach --param n=2 --param kappa2=-0.5 --samples 60 --seed 3 --format json",
                           "classify --phi 'exp(x)*(1+0.3*y)' --format json"}) {
    const auto a = run_tool(args), b = run_tool(args);
    t.require(!a.empty() && a == b, std::string("differs: ") + args);
  }
  return t.outcome();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"calibration", calibration},
      {"soliton backbone", soliton_backbone},
      {"identity suite", identity_suite_all},
      {"rigid eigenstructure", eigenstructure},
      {"nilpotency", nilpotency},
      {"causal types", causal_types},
      {"classification round trip", classification},
      {"family matching", family_matching},
      {"Codazzi-Schouten", codazzi},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %2zu %-28s %s%s%s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL", o.detail.empty() ? "" : "  ", o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
