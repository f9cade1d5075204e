#pragma once

// Concrete metric/potential families with their expected invariants, plus deterministic
// sampling of points inside a family's box.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "solitonlab/errors.hpp"
#include "solitonlab/expr.hpp"
#include "solitonlab/geometry.hpp"
#include "solitonlab/jets.hpp"
#include "solitonlab/quadrature.hpp"
#include "solitonlab/speclin.hpp"

namespace solitonlab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// What the Ricci operator is expected to look like.
struct RicciStructure {
  enum class Kind { kZero, kZeroLambda, kNilpotent } kind = Kind::kZero;
  int index = 0;  // nilpotent only
  int rank = 0;   // nilpotent only
};

struct ExpectedProfile {
  bool steady = false;
  std::optional<CausalType> grad_causal;
  std::optional<RicciStructure> ricci;
  std::optional<double> grad_norm_sq;
  std::optional<double> hess_norm_sq;
  bool strict_walker = false;
  bool locally_symmetric = false;
  bool rigid = false;           // Ric and H_f have complementary images
  bool harmonic_weyl = false;   // Schouten tensor is Codazzi
};

struct SolitonProblem {
  std::string family;  // "custom" for problems not built here
  std::string description;
  MetricSpec metric;
  ScalarField potential;
  double lambda = 0.0;
  std::vector<Interval> box;
  std::vector<VectorField> killing;
  std::vector<std::string> notes;
  std::optional<Expr> phi;  // Walker families, coordinates (t, x, y)
  std::optional<ExpectedProfile> expected;
  bool homogeneous = false;

  int dim() const { return metric.dim(); }
};

/// Family parameters: reals by name, plus expression-valued parameters for the Walker families.
struct FamilyArgs {
  std::map<std::string, double> reals;
  std::map<std::string, std::string> functions;
};

struct FamilyInfo {
  std::string name;
  std::string parameters;  // human-readable list with defaults
  std::string summary;
};

inline const std::vector<FamilyInfo>& family_list() {
  static const std::vector<FamilyInfo> list{
      {"minkowski_rigid", "d=3 nu=1 lambda=0.7", "flat metric of index nu, f = (lambda/2)|x|^2"},
      {"timelike_linear", "a=1", "-dt^2+dx^2+dy^2, f = a t, steady"},
      {"sphere_rigid", "lambda=1", "round 2-sphere of Ricci constant lambda times a line, f = (lambda/2) x^2"},
      {"cahen_wallach", "n=1 kappa1..kappaN=1 a0=0 a1=0", "2dtdy + sum kappa_i x_i^2 dy^2 + dx^2, f = a0 + a1 y + (kappa/2) y^2"},
      {"walker3", "phi=<expr> potential=<expr> lambda=0", "2dtdy + dx^2 + phi(x,y) dy^2 with a given potential"},
      {"thm12_case1", "alpha=1 a=1 b=0 c=0 a0=0 a1=0", "phi = a e^(alpha x)/alpha^2 + x b + c, f = alpha x + gamma(y), gamma'' = -alpha b/2"},
      {"thm12_case2", "a=1 b=0 c=0 a0=0 a1=1", "phi = x^2 a + x b + c, f = gamma(y), gamma'' = a"},
      {"N_b", "b=1", "phi = e^(b x)/b^2, f = b x"},
      {"P_c", "c=1 k=2 a0=0 a1=1", "phi = x^2 alpha(y)/2, alpha = 4/(k-cy)^2, f = gamma(y)"},
      {"CWplus", "", "phi = x^2, f = y^2/2"},
      {"CWminus", "", "phi = -x^2, f = -y^2/2"},
  };
  return list;
}

/// Deterministic points in the box: std::mt19937_64 seeded with `seed`, one draw per
/// coordinate in order, mapped to [0,1) as (draw >> 11) * 2^-53 and then affinely into the interval.
inline std::vector<std::vector<double>> sample_points(const std::vector<Interval>& box, int count, std::uint64_t seed) {
  if (count < 1) throw ArgumentError("sample count must be at least 1");
  std::mt19937_64 gen(seed);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(count), std::vector<double>(box.size()));
  for (auto& p : out)
    for (std::size_t i = 0; i < box.size(); ++i) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      p[i] = box[i].lo + u * (box[i].hi - box[i].lo);
    }
  return out;
}

inline std::vector<std::vector<double>> sample_points(const SolitonProblem& problem, int count, std::uint64_t seed) {
  return sample_points(problem.box, count, seed);
}

namespace detail {

inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline const std::vector<std::string> kWalkerCoords{"t", "x", "y"};
constexpr int kT = 0, kX = 1, kY = 2;

class ArgReader {
 public:
  ArgReader(const FamilyArgs& args, std::string family) : args_(args), family_(std::move(family)) {}

  double real(const std::string& name, double fallback) {
    used_.insert(name);
    if (args_.functions.count(name)) throw ArgumentError(family_ + ": parameter '" + name + "' must be a number");
    const auto it = args_.reals.find(name);
    return it == args_.reals.end() ? fallback : it->second;
  }

  int integer(const std::string& name, int fallback, int lo, int hi) {
    const double v = real(name, fallback);
    if (v != std::floor(v) || v < lo || v > hi)
      throw ArgumentError(family_ + ": parameter '" + name + "' must be an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
  }

  Expr function(const std::string& name, const std::string& fallback) {
    used_.insert(name);
    if (const auto r = args_.reals.find(name); r != args_.reals.end()) return Expr::number(r->second);
    const auto it = args_.functions.find(name);
    return parse(it == args_.functions.end() ? fallback : it->second);
  }

  std::optional<std::string> raw_function(const std::string& name) {
    used_.insert(name);
    if (const auto r = args_.reals.find(name); r != args_.reals.end()) return format_number(r->second);
    const auto it = args_.functions.find(name);
    if (it == args_.functions.end()) return std::nullopt;
    return it->second;
  }

  /// Reals that were not consumed; an error unless `allow_extra` (then they become expression parameters).
  ParamTable finish(bool allow_extra = false) const {
    ParamTable extra;
    for (const auto& [k, v] : args_.reals)
      if (!used_.count(k)) {
        if (!allow_extra) throw ArgumentError(family_ + ": unknown parameter '" + k + "'");
        extra[k] = v;
      }
    for (const auto& [k, v] : args_.functions)
      if (!used_.count(k)) throw ArgumentError(family_ + ": unknown parameter '" + k + "'");
    return extra;
  }

 private:
  const FamilyArgs& args_;
  std::string family_;
  std::set<std::string> used_;
};

inline MetricSpec walker_metric(const Expr& phi, const ParamTable& params) {
  std::map<std::pair<int, int>, Expr> entries{
      {{kY, kT}, Expr::number(1.0)},
      {{kX, kX}, Expr::number(1.0)},
      {{kY, kY}, phi},
  };
  return MetricSpec(kWalkerCoords, entries, params);
}

inline VectorField coordinate_field(int dim, int index, std::string label) {
  VectorField v{std::move(label), {}};
  for (int i = 0; i < dim; ++i) {
    const double c = i == index ? 1.0 : 0.0;
    v.components.emplace_back(format_number(c), [dim, c](std::span<const double>, int order) { return Jet::constant(dim, order, c); });
  }
  return v;
}

/// f = alpha x + gamma(y) on Walker coordinates, gamma'' and gamma''' supplied pointwise,
/// gamma(y0) = a0, gamma'(y0) = a1.
inline ScalarField walker_potential(std::string description, double alpha, std::function<std::array<double, 2>(double)> second,
                                    double y0, double a0, double a1) {
  auto gamma = std::make_shared<const SecondOrderIntegral>([second](double y) { return second(y)[0]; }, y0, a0, a1);
  return ScalarField(std::move(description), [gamma, second, alpha](std::span<const double> p, int order) {
    const double y = p[kY];
    const auto g23 = second(y);
    const std::array<double, 4> derivs{gamma->value(y), gamma->slope(y), g23[0], g23[1]};
    Jet f = compose(Jet::variable(3, order, kY, y), derivs);
    if (alpha != 0.0) f += Jet::variable(3, order, kX, p[kX]) * alpha;
    return f;
  });
}

/// gamma'' and gamma''' from an expression in y (bound against the Walker coordinates).
inline std::function<std::array<double, 2>(double)> second_from_expr(const Expr& e, const ParamTable& params) {
  auto compiled = std::make_shared<const CompiledExpr>(e, Bindings{kWalkerCoords, params});
  if (e.symbols().count("t") || e.symbols().count("x")) throw ArgumentError("expression '" + to_string(e) + "' must depend on y only");
  return [compiled](double y) {
    const std::array<double, 3> p{0.0, 0.0, y};
    const Jet j = compiled->jet(p, 1);
    return std::array<double, 2>{j.value(), j.d(kY)};
  };
}

inline std::vector<std::vector<double>> sweep_points(const std::vector<Interval>& box) {
  const std::size_t d = box.size();
  std::vector<std::vector<double>> pts;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    std::vector<double> p(d);
    for (std::size_t i = 0; i < d; ++i) p[i] = (mask >> i) & 1 ? box[i].hi : box[i].lo;
    pts.push_back(std::move(p));
  }
  std::vector<double> center(d);
  for (std::size_t i = 0; i < d; ++i) center[i] = 0.5 * (box[i].lo + box[i].hi);
  pts.push_back(std::move(center));
  for (auto& p : sample_points(box, 16, 0)) pts.push_back(std::move(p));
  return pts;
}

/// Evaluates metric, connection and potential over the sweep; any error means the box is invalid.
inline void validate_box(const SolitonProblem& p) {
  if (static_cast<int>(p.box.size()) != p.dim()) throw ArgumentError(p.family + ": box has the wrong number of intervals");
  for (const auto& iv : p.box)
    if (!(iv.lo < iv.hi)) throw ArgumentError(p.family + ": empty box interval");
  for (const auto& pt : sweep_points(p.box)) {
    try {
      const Connection c = connection(p.metric, pt);
      (void)p.potential.jet(pt, 3);
      for (const auto& k : p.killing)
        for (const auto& comp : k.components) (void)comp.jet(pt, 2);
      (void)c;
    } catch (const Error& e) {
      std::string where;
      for (double v : pt) where += (where.empty() ? "" : ", ") + short_number(v);
      throw ArgumentError(p.family + ": box validity sweep failed at (" + where + "): " + e.what());
    }
  }
}

inline std::vector<Interval> walker_box(double ylo = -0.5, double yhi = 0.5) { return {{-1.0, 1.0}, {-1.0, 1.0}, {ylo, yhi}}; }

inline const char* kCoefficientNote =
    "coefficient: potential built from gamma'' = a(y) (f'' = kappa for Cahen-Wallach); a quarter of that leaves a nonzero soliton residual";

inline ExpectedProfile walker_steady_profile(CausalType causal) {
  ExpectedProfile e;
  e.steady = true;
  e.grad_causal = causal;
  e.ricci = RicciStructure{RicciStructure::Kind::kNilpotent, 2, 1};
  e.hess_norm_sq = 0.0;
  e.strict_walker = true;
  return e;
}

inline SolitonProblem finish_walker(std::string family, std::string description, const Expr& phi, ScalarField potential, double lambda,
                                    std::vector<Interval> box, const ParamTable& params) {
  SolitonProblem p;
  p.family = std::move(family);
  p.description = std::move(description);
  p.metric = walker_metric(phi, params);
  p.potential = std::move(potential);
  p.lambda = lambda;
  p.box = std::move(box);
  p.phi = phi;
  p.killing.push_back(coordinate_field(3, kT, "d_t"));
  return p;
}

}  // namespace detail

/// Builds a catalog family. Throws ArgumentError for unknown families, bad parameters or a box
/// on which the metric or potential cannot be evaluated.
inline SolitonProblem instantiate(const std::string& family, const FamilyArgs& args = {}) {
  using detail::kT;
  using detail::kX;
  using detail::kY;
  detail::ArgReader in(args, family);
  SolitonProblem p;
  const auto x = Expr::symbol("x"), y = Expr::symbol("y");
  const auto num = [](double v) { return Expr::number(v); };

  if (family == "minkowski_rigid") {
    const int d = in.integer("d", 3, 1, kMaxJetDim);
    const int nu = in.integer("nu", 1, 0, 1);
    const double lambda = in.real("lambda", 0.7);
    in.finish();
    std::vector<std::string> coords;
    if (nu == 1) coords.push_back("t");
    for (int i = static_cast<int>(coords.size()); i < d; ++i) coords.push_back("x" + std::to_string(i + 1 - nu));
    std::map<std::pair<int, int>, Expr> entries;
    Expr f = num(0.0);
    for (int i = 0; i < d; ++i) {
      const double s = (nu == 1 && i == 0) ? -1.0 : 1.0;
      entries[{i, i}] = num(s);
      const Expr sq = Expr::binary(BinaryOp::kPow, Expr::symbol(coords[static_cast<std::size_t>(i)]), num(2.0));
      f = i == 0 ? num(s * lambda / 2) * sq : f + num(s * lambda / 2) * sq;
    }
    p.metric = MetricSpec(coords, entries, {});
    p.potential = ScalarField::from_expr(f, p.metric.bindings());
    p.lambda = lambda;
    p.box.assign(static_cast<std::size_t>(d), Interval{-1.0, 1.0});
    p.description = "minkowski_rigid(d=" + std::to_string(d) + ", nu=" + std::to_string(nu) + ", lambda=" + detail::short_number(lambda) + ")";
    if (d - nu >= 2) {
      // rotation in the first spatial plane
      const int i = nu, j = nu + 1;
      VectorField rot{"rotation", {}};
      for (int k = 0; k < d; ++k) {
        Expr c = num(0.0);
        if (k == i) c = Expr::negate(Expr::symbol(coords[static_cast<std::size_t>(j)]));
        if (k == j) c = Expr::symbol(coords[static_cast<std::size_t>(i)]);
        rot.components.push_back(ScalarField::from_expr(c, p.metric.bindings()));
      }
      p.killing.push_back(std::move(rot));
    }
    ExpectedProfile e;
    e.steady = lambda == 0.0;
    e.ricci = RicciStructure{RicciStructure::Kind::kZero};
    e.hess_norm_sq = d * lambda * lambda;
    e.locally_symmetric = true;
    e.rigid = lambda != 0.0;
    e.harmonic_weyl = true;
    if (lambda == 0.0) e.grad_causal = CausalType::kZero, e.grad_norm_sq = 0.0;
    p.expected = e;
    p.homogeneous = true;
  } else if (family == "timelike_linear") {
    const double a = in.real("a", 1.0);
    in.finish();
    const std::vector<std::string> coords{"t", "x", "y"};
    p.metric = MetricSpec(coords, {{{0, 0}, num(-1.0)}, {{1, 1}, num(1.0)}, {{2, 2}, num(1.0)}}, {});
    p.potential = ScalarField::from_expr(num(a) * Expr::symbol("t"), p.metric.bindings());
    p.box.assign(3, Interval{-1.0, 1.0});
    p.description = "timelike_linear(a=" + detail::short_number(a) + ")";
    p.killing.push_back(detail::coordinate_field(3, 0, "d_t"));
    ExpectedProfile e;
    e.steady = true;
    e.grad_causal = a == 0.0 ? CausalType::kZero : CausalType::kTimelike;
    e.ricci = RicciStructure{RicciStructure::Kind::kZero};
    e.grad_norm_sq = -a * a;
    e.hess_norm_sq = 0.0;
    e.locally_symmetric = true;
    e.harmonic_weyl = true;
    p.expected = e;
    p.homogeneous = true;
  } else if (family == "sphere_rigid") {
    const double lambda = in.real("lambda", 1.0);
    in.finish();
    if (!(lambda > 0.0)) throw ArgumentError("sphere_rigid: lambda must be positive");
    const std::vector<std::string> coords{"theta", "phi", "x"};
    const auto theta = Expr::symbol("theta");
    const Expr sin2 = Expr::binary(BinaryOp::kPow, Expr::call(Function::kSin, theta), num(2.0));
    p.metric = MetricSpec(coords, {{{0, 0}, num(1.0 / lambda)}, {{1, 1}, num(1.0 / lambda) * sin2}, {{2, 2}, num(1.0)}}, {});
    p.potential = ScalarField::from_expr(num(lambda / 2) * Expr::binary(BinaryOp::kPow, x, num(2.0)), p.metric.bindings());
    p.lambda = lambda;
    p.box = {{0.3, std::numbers::pi - 0.3}, {-1.0, 1.0}, {0.25, 1.25}};
    p.description = "sphere_rigid(lambda=" + detail::short_number(lambda) + ")";
    p.killing.push_back(detail::coordinate_field(3, 1, "d_phi"));
    ExpectedProfile e;
    e.grad_causal = CausalType::kSpacelike;
    e.ricci = RicciStructure{RicciStructure::Kind::kZeroLambda};
    e.hess_norm_sq = lambda * lambda;
    e.locally_symmetric = true;
    e.rigid = true;
    e.harmonic_weyl = true;
    p.expected = e;
    p.homogeneous = true;
  } else if (family == "cahen_wallach") {
    const int n = in.integer("n", 1, 1, 6);
    std::vector<double> kappa;
    for (int i = 1; i <= n; ++i) kappa.push_back(in.real("kappa" + std::to_string(i), 1.0));
    const double a0 = in.real("a0", 0.0), a1 = in.real("a1", 0.0);
    in.finish();
    std::vector<std::string> coords{"t", "y"};
    if (n == 1) coords.push_back("x");
    else
      for (int i = 1; i <= n; ++i) coords.push_back("x" + std::to_string(i));
    std::map<std::pair<int, int>, Expr> entries{{{1, 0}, num(1.0)}};
    Expr gyy = num(0.0);
    double ksum = 0.0;
    for (int i = 0; i < n; ++i) {
      const Expr term = num(kappa[static_cast<std::size_t>(i)]) * Expr::binary(BinaryOp::kPow, Expr::symbol(coords[static_cast<std::size_t>(2 + i)]), num(2.0));
      gyy = i == 0 ? term : gyy + term;
      entries[{2 + i, 2 + i}] = num(1.0);
      ksum += kappa[static_cast<std::size_t>(i)];
    }
    entries[{1, 1}] = gyy;
    p.metric = MetricSpec(coords, entries, {});
    const Expr f = num(a0) + num(a1) * y + num(ksum / 2) * Expr::binary(BinaryOp::kPow, y, num(2.0));
    p.potential = ScalarField::from_expr(f, p.metric.bindings());
    p.box.assign(static_cast<std::size_t>(n + 2), Interval{-1.0, 1.0});
    p.box[1] = {0.25, 1.25};
    std::string ks;
    for (double k : kappa) ks += (ks.empty() ? "" : ",") + detail::short_number(k);
    p.description = "cahen_wallach(n=" + std::to_string(n) + ", kappa=" + ks + ", a0=" + detail::short_number(a0) + ", a1=" + detail::short_number(a1) + ")";
    p.notes.push_back(detail::kCoefficientNote);
    p.killing.push_back(detail::coordinate_field(n + 2, 0, "d_t"));
    ExpectedProfile e;
    e.steady = true;
    e.hess_norm_sq = 0.0;
    e.locally_symmetric = true;
    e.harmonic_weyl = true;
    e.strict_walker = true;
    const bool grad_nonzero = (a1 + ksum * p.box[1].lo) * (a1 + ksum * p.box[1].hi) > 0.0;
    if (grad_nonzero) e.grad_causal = CausalType::kNull, e.grad_norm_sq = 0.0;
    if (ksum != 0.0) e.ricci = RicciStructure{RicciStructure::Kind::kNilpotent, 2, 1};
    p.expected = e;
    p.homogeneous = true;
  } else if (family == "walker3") {
    const auto phi_text = in.raw_function("phi");
    const auto f_text = in.raw_function("potential");
    const double lambda = in.real("lambda", 0.0);
    const ParamTable params = in.finish(true);
    if (!phi_text || !f_text) throw ArgumentError("walker3: parameters 'phi' and 'potential' are required");
    const Expr phi = parse(*phi_text), f = parse(*f_text);
    auto potential = ScalarField::from_expr(f, Bindings{detail::kWalkerCoords, params});
    p = detail::finish_walker(family, "walker3(phi=" + to_string(phi) + ", f=" + to_string(f) + ", lambda=" + detail::short_number(lambda) + ")", phi,
                              std::move(potential), lambda, detail::walker_box(), params);
  } else if (family == "thm12_case1") {
    const double alpha = in.real("alpha", 1.0);
    const Expr a = in.function("a", "1"), b = in.function("b", "0"), c = in.function("c", "0");
    const double a0 = in.real("a0", 0.0), a1 = in.real("a1", 0.0);
    in.finish();
    if (alpha == 0.0) throw ArgumentError("thm12_case1: alpha must be nonzero");
    const Expr phi = num(1.0 / (alpha * alpha)) * a * Expr::call(Function::kExp, num(alpha) * x) + x * b + c;
    const auto box = detail::walker_box();
    const double y0 = 0.5 * (box[kY].lo + box[kY].hi);
    auto second = detail::second_from_expr(num(-0.5 * alpha) * b, {});
    auto potential = detail::walker_potential("alpha x + gamma(y), gamma'' = " + to_string(num(-0.5 * alpha) * b), alpha, second, y0, a0, a1);
    p = detail::finish_walker(family,
                              "thm12_case1(alpha=" + detail::short_number(alpha) + ", a=" + to_string(a) + ", b=" + to_string(b) + ", c=" + to_string(c) + ")",
                              phi, std::move(potential), 0.0, box, {});
    ExpectedProfile e = detail::walker_steady_profile(CausalType::kSpacelike);
    e.grad_norm_sq = alpha * alpha;
    const auto a_of = detail::second_from_expr(a, {});
    for (const auto& pt : detail::sweep_points(box))
      if (std::abs(a_of(pt[kY])[0]) < 1e-8) e.ricci.reset();
    p.expected = e;
  } else if (family == "thm12_case2") {
    const Expr a = in.function("a", "1"), b = in.function("b", "0"), c = in.function("c", "0");
    const double a0 = in.real("a0", 0.0), a1 = in.real("a1", 1.0);
    in.finish();
    const Expr phi = Expr::binary(BinaryOp::kPow, x, num(2.0)) * a + x * b + c;
    const auto box = detail::walker_box();
    const double y0 = 0.5 * (box[kY].lo + box[kY].hi);
    auto second = detail::second_from_expr(a, {});
    auto potential = detail::walker_potential("gamma(y), gamma'' = " + to_string(a), 0.0, second, y0, a0, a1);
    p = detail::finish_walker(family, "thm12_case2(a=" + to_string(a) + ", b=" + to_string(b) + ", c=" + to_string(c) + ")", phi, std::move(potential),
                              0.0, box, {});
    p.notes.push_back(detail::kCoefficientNote);
    ExpectedProfile e = detail::walker_steady_profile(CausalType::kNull);
    e.grad_norm_sq = 0.0;
    for (const auto& pt : detail::sweep_points(box)) {
      if (std::abs(second(pt[kY])[0]) < 1e-8) e.ricci.reset();
      if (std::abs(p.potential.jet(pt, 1).d(kY)) < 1e-8) e.grad_causal.reset();
    }
    p.expected = e;
  } else if (family == "N_b") {
    const double b = in.real("b", 1.0);
    in.finish();
    if (b == 0.0) throw ArgumentError("N_b: b must be nonzero");
    const Expr phi = Expr::call(Function::kExp, num(b) * x) / num(b * b);
    auto potential = ScalarField::from_expr(num(b) * x, Bindings{detail::kWalkerCoords, {}});
    p = detail::finish_walker(family, "N_b(b=" + detail::short_number(b) + ")", phi, std::move(potential), 0.0, detail::walker_box(), {});
    ExpectedProfile e = detail::walker_steady_profile(CausalType::kSpacelike);
    e.grad_norm_sq = b * b;
    p.expected = e;
    p.homogeneous = true;
  } else if (family == "P_c") {
    const double c = in.real("c", 1.0), k = in.real("k", 2.0);
    const double a0 = in.real("a0", 0.0), a1 = in.real("a1", 1.0);
    in.finish();
    const auto box = detail::walker_box();
    for (double yy : {box[kY].lo, box[kY].hi})
      if (!(k - c * yy > 0.0)) throw ArgumentError("P_c: k - c y must stay positive on the box");
    const Expr base = num(k) - num(c) * y;
    const Expr alpha = num(4.0) / Expr::binary(BinaryOp::kPow, base, num(2.0));
    const Expr phi = num(0.5) * Expr::binary(BinaryOp::kPow, x, num(2.0)) * alpha;
    const double y0 = 0.5 * (box[kY].lo + box[kY].hi);
    auto second = [c, k](double yy) {
      const double u = k - c * yy;
      return std::array<double, 2>{2.0 / (u * u), 4.0 * c / (u * u * u)};
    };
    auto potential = detail::walker_potential("gamma(y), gamma'' = 2/(k - c y)^2", 0.0, second, y0, a0, a1);
    p = detail::finish_walker(family, "P_c(c=" + detail::short_number(c) + ", k=" + detail::short_number(k) + ")", phi, std::move(potential), 0.0, box, {});
    p.notes.push_back(detail::kCoefficientNote);
    ExpectedProfile e = detail::walker_steady_profile(CausalType::kNull);
    e.grad_norm_sq = 0.0;
    for (const auto& pt : detail::sweep_points(box))
      if (std::abs(p.potential.jet(pt, 1).d(kY)) < 1e-8) e.grad_causal.reset();
    p.expected = e;
    p.homogeneous = true;
  } else if (family == "CWplus" || family == "CWminus") {
    in.finish();
    const double s = family == "CWplus" ? 1.0 : -1.0;
    const Expr x2 = Expr::binary(BinaryOp::kPow, x, num(2.0));
    const Expr phi = s > 0 ? x2 : Expr::negate(x2);
    auto potential = ScalarField::from_expr(num(s / 2) * Expr::binary(BinaryOp::kPow, y, num(2.0)), Bindings{detail::kWalkerCoords, {}});
    p = detail::finish_walker(family, family, phi, std::move(potential), 0.0, detail::walker_box(0.25, 1.25), {});
    p.notes.push_back(detail::kCoefficientNote);
    ExpectedProfile e = detail::walker_steady_profile(CausalType::kNull);
    e.grad_norm_sq = 0.0;
    e.locally_symmetric = true;
    e.harmonic_weyl = true;
    p.expected = e;
    p.homogeneous = true;
  } else {
    throw ArgumentError("unknown family '" + family + "'");
  }
  p.family = family;
  detail::validate_box(p);
  return p;
}

/// Perturbation used to confirm that the soliton checks are sensitive: 0.01 x^3 added to phi
/// for Walker problems, otherwise 0.01 y^3 (0.01 times the cube of the last coordinate when there is no y) added to f.
inline SolitonProblem perturbed(const SolitonProblem& p) {
  SolitonProblem q = p;
  q.expected.reset();
  q.homogeneous = false;
  if (p.phi) {
    const Expr phi = *p.phi + Expr::number(0.01) * Expr::binary(BinaryOp::kPow, Expr::symbol("x"), Expr::number(3.0));
    q.phi = phi;
    q.metric = detail::walker_metric(phi, p.metric.params());
    q.description = p.description + " + 0.01 x^3 in phi";
    return q;
  }
  const auto& coords = p.metric.coords();
  int idx = p.dim() - 1;
  for (int i = 0; i < p.dim(); ++i)
    if (coords[static_cast<std::size_t>(i)] == "y") idx = i;
  const ScalarField base = p.potential;
  const int d = p.dim();
  q.potential = ScalarField(base.description() + " + 0.01 " + coords[static_cast<std::size_t>(idx)] + "^3", [base, idx, d](std::span<const double> pt, int order) {
    return base.jet(pt, order) + pow(Jet::variable(d, order, idx, pt[static_cast<std::size_t>(idx)]), 3) * 0.01;
  });
  q.description = p.description + " + 0.01 " + coords[static_cast<std::size_t>(idx)] + "^3 in f";
  return q;
}

}  // namespace solitonlab
