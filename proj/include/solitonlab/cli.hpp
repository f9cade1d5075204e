#pragma once

// Configuration-driven front end shared by the command-line tool and the tests.
//
// Config file grammar (flat, line oriented):
//   # comment                      ignored, also after a value
//   [section]                      one of problem, params, metric, box, tol, killing
//   key = value                    value may be wrapped in double quotes
// Sections:
//   [problem]  family, description, coords (comma separated), lambda, potential, phi, samples, seed
//   [params]   name = number or expression
//   [metric]   "a,b" = expression for g_ab, a and b coordinate names or 0-based indices
//   [box]      coord = lo:hi
//   [tol]      check_name = value
//   [killing]  label = X^0; X^1; ...
// Command-line flags override file values.
//
// Exit status: 0 every check passed, 1 some check failed, 2 configuration error,
// 3 evaluation error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "solitonlab/catalog.hpp"
#include "solitonlab/errors.hpp"
#include "solitonlab/expr.hpp"
#include "solitonlab/report.hpp"
#include "solitonlab/verify.hpp"
#include "solitonlab/walker3.hpp"

namespace solitonlab::cli {

enum class Mode { kVerify, kClassify, kCatalogList };
enum class Format { kText, kJson };

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitEvaluationError = 3;

using Entries = std::vector<std::pair<std::string, std::string>>;

struct ConfigFile {
  std::map<std::string, Entries> sections;

  const Entries* section(const std::string& name) const {
    const auto it = sections.find(name);
    return it == sections.end() ? nullptr : &it->second;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::optional<double> parse_real(std::string_view s) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

inline double require_real(std::string_view s, const std::string& what) {
  const auto v = parse_real(s);
  if (!v) throw ArgumentError(what + ": '" + std::string(s) + "' is not a number");
  return *v;
}

inline std::pair<std::string, std::string> split_assignment(std::string_view s, const std::string& what) {
  const auto eq = s.find('=');
  if (eq == std::string_view::npos) throw ArgumentError(what + ": expected name=value, got '" + std::string(s) + "'");
  auto key = trim(s.substr(0, eq));
  if (key.empty()) throw ArgumentError(what + ": empty name in '" + std::string(s) + "'");
  return {std::move(key), trim(s.substr(eq + 1))};
}

inline Interval parse_interval(std::string_view s, const std::string& what) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) throw ArgumentError(what + ": expected lo:hi, got '" + std::string(s) + "'");
  const Interval iv{require_real(s.substr(0, colon), what), require_real(s.substr(colon + 1), what)};
  if (!(iv.lo < iv.hi)) throw ArgumentError(what + ": interval '" + std::string(s) + "' is empty");
  return iv;
}

inline std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

inline ConfigFile parse_config(std::string_view text) {
  static const std::set<std::string> known{"problem", "params", "metric", "box", "tol", "killing"};
  ConfigFile cfg;
  std::string current;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string where = "config line " + std::to_string(line_no);
    // strip a comment that is not inside quotes
    bool quoted = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    if (quoted) throw ArgumentError(where + ": unterminated quote");
    const std::string line = detail::trim(std::string_view(raw).substr(0, cut));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ArgumentError(where + ": malformed section header");
      current = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      if (!known.count(current)) throw ArgumentError(where + ": unknown section [" + current + "]");
      cfg.sections[current];
      continue;
    }
    if (current.empty()) throw ArgumentError(where + ": entry before any section header");
    auto [key, value] = detail::split_assignment(line, where);
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"') key = key.substr(1, key.size() - 2);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    cfg.sections[current].emplace_back(std::move(key), std::move(value));
  }
  return cfg;
}

inline ConfigFile load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ArgumentError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

/// Custom metric read from a [metric] section.
struct CustomMetric {
  std::vector<std::string> coords;
  Entries entries;  // "a,b" -> expression
};

struct RunConfig {
  Mode mode = Mode::kVerify;
  std::optional<std::string> family;
  std::optional<std::string> description;
  FamilyArgs params;
  std::optional<CustomMetric> metric;
  std::optional<std::string> phi;
  std::optional<std::string> potential;
  std::optional<double> lambda;
  int samples = 100;
  std::uint64_t seed = 1;
  std::map<std::string, Interval> box;
  Tolerances tolerances;
  Entries killing;
  Format format = Format::kText;
  std::optional<std::string> out;
};

/// Raw command-line values, before validation.
struct Flags {
  std::optional<std::string> family;
  std::optional<std::string> metric_file;
  std::optional<std::string> phi;
  std::optional<std::string> potential;
  std::optional<std::string> lambda;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> params;
  std::vector<std::string> boxes;
  std::vector<std::string> tols;
  std::optional<std::string> format;
  std::optional<std::string> out;
};

namespace detail {

inline void add_param(FamilyArgs& args, const std::string& key, const std::string& value) {
  args.reals.erase(key);
  args.functions.erase(key);
  if (value.empty()) throw ArgumentError("parameter '" + key + "' has an empty value");
  if (const auto v = parse_real(value)) args.reals[key] = *v;
  else args.functions[key] = value;
}

inline void apply_file(RunConfig& cfg, const ConfigFile& file) {
  std::optional<std::string> coords;
  if (const auto* s = file.section("problem"))
    for (const auto& [k, v] : *s) {
      if (k == "family") cfg.family = v;
      else if (k == "description") cfg.description = v;
      else if (k == "coords") coords = v;
      else if (k == "lambda") cfg.lambda = require_real(v, "[problem] lambda");
      else if (k == "potential") cfg.potential = v;
      else if (k == "phi") cfg.phi = v;
      else if (k == "samples") cfg.samples = static_cast<int>(require_real(v, "[problem] samples"));
      else if (k == "seed") cfg.seed = static_cast<std::uint64_t>(require_real(v, "[problem] seed"));
      else throw ArgumentError("[problem]: unknown key '" + k + "'");
    }
  if (const auto* s = file.section("params"))
    for (const auto& [k, v] : *s) add_param(cfg.params, k, v);
  if (const auto* s = file.section("metric")) {
    if (!coords) throw ArgumentError("[metric] needs [problem] coords");
    cfg.metric = CustomMetric{split_list(*coords, ','), *s};
  } else if (coords) {
    throw ArgumentError("[problem] coords given without a [metric] section");
  }
  if (const auto* s = file.section("box"))
    for (const auto& [k, v] : *s) cfg.box[k] = parse_interval(v, "[box] " + k);
  if (const auto* s = file.section("tol"))
    for (const auto& [k, v] : *s) cfg.tolerances.set(k, require_real(v, "[tol] " + k));
  if (const auto* s = file.section("killing")) cfg.killing = *s;
}

}  // namespace detail

/// Config from an optional file plus flags; flags win.
inline RunConfig make_config(Mode mode, const Flags& flags) {
  RunConfig cfg;
  cfg.mode = mode;
  if (flags.metric_file) detail::apply_file(cfg, load_config(*flags.metric_file));
  if (flags.family) cfg.family = flags.family;
  if (flags.phi) cfg.phi = flags.phi;
  if (flags.potential) cfg.potential = flags.potential;
  if (flags.lambda) cfg.lambda = detail::require_real(*flags.lambda, "--lambda");
  if (flags.samples) cfg.samples = *flags.samples;
  if (flags.seed) cfg.seed = *flags.seed;
  for (const auto& p : flags.params) {
    const auto [k, v] = detail::split_assignment(p, "--param");
    detail::add_param(cfg.params, k, v);
  }
  for (const auto& b : flags.boxes) {
    const auto [k, v] = detail::split_assignment(b, "--box");
    cfg.box[k] = detail::parse_interval(v, "--box " + k);
  }
  for (const auto& t : flags.tols) {
    const auto [k, v] = detail::split_assignment(t, "--tol");
    cfg.tolerances.set(k, detail::require_real(v, "--tol " + k));
  }
  if (flags.format) {
    if (*flags.format == "text") cfg.format = Format::kText;
    else if (*flags.format == "json") cfg.format = Format::kJson;
    else throw ArgumentError("--format must be text or json");
  }
  if (flags.out) cfg.out = flags.out;
  if (cfg.samples < 1) throw ArgumentError("sample count must be at least 1");
  return cfg;
}

namespace detail {

inline int coordinate_index(const std::vector<std::string>& coords, const std::string& name) {
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] == name) return static_cast<int>(i);
  if (const auto v = parse_real(name); v && *v == std::floor(*v) && *v >= 0 && *v < static_cast<double>(coords.size())) return static_cast<int>(*v);
  throw ArgumentError("unknown coordinate '" + name + "'");
}

inline ParamTable real_params(const FamilyArgs& args) {
  if (!args.functions.empty()) throw ArgumentError("parameter '" + args.functions.begin()->first + "' must be a number here");
  return ParamTable(args.reals.begin(), args.reals.end());
}

inline SolitonProblem custom_problem(const RunConfig& cfg) {
  const auto& m = *cfg.metric;
  if (!cfg.potential) throw ArgumentError("a custom metric needs a potential");
  const ParamTable params = real_params(cfg.params);
  std::map<std::pair<int, int>, Expr> entries;
  for (const auto& [key, value] : m.entries) {
    const auto ij = split_list(key, ',');
    if (ij.size() != 2) throw ArgumentError("[metric] key '" + key + "' must name two coordinates");
    entries[{coordinate_index(m.coords, ij[0]), coordinate_index(m.coords, ij[1])}] = parse(value);
  }
  SolitonProblem p;
  p.family = "custom";
  p.metric = MetricSpec(m.coords, entries, params);
  const Expr f = parse(*cfg.potential);
  p.potential = ScalarField::from_expr(f, p.metric.bindings());
  p.lambda = cfg.lambda.value_or(0.0);
  p.box.assign(m.coords.size(), Interval{-1.0, 1.0});
  p.description = cfg.description.value_or("custom metric, f = " + to_string(f));
  return p;
}

inline SolitonProblem build_problem(const RunConfig& cfg) {
  int sources = (cfg.family ? 1 : 0) + (cfg.metric ? 1 : 0);
  const bool walker_shorthand = !cfg.family && !cfg.metric && cfg.phi;
  if (walker_shorthand) ++sources;
  if (sources != 1) throw ArgumentError("exactly one problem source is required: --family, a [metric] section, or --phi with --potential");

  SolitonProblem p;
  if (cfg.metric) {
    if (cfg.phi) throw ArgumentError("--phi cannot be combined with a custom metric");
    p = custom_problem(cfg);
  } else {
    const std::string family = cfg.family.value_or("walker3");
    FamilyArgs args = cfg.params;
    if (cfg.phi) args.functions["phi"] = *cfg.phi;
    if (cfg.potential) args.functions["potential"] = *cfg.potential;
    if (cfg.lambda) args.reals["lambda"] = *cfg.lambda;
    p = instantiate(family, args);
    if (cfg.description) p.description = *cfg.description;
  }
  for (const auto& [label, text] : cfg.killing) {
    const auto parts = split_list(text, ';');
    if (static_cast<int>(parts.size()) != p.dim()) throw ArgumentError("Killing field '" + label + "' needs " + std::to_string(p.dim()) + " components");
    VectorField v{label, {}};
    for (const auto& c : parts) v.components.push_back(ScalarField::from_expr(parse(c), p.metric.bindings()));
    p.killing.push_back(std::move(v));
  }
  if (!cfg.box.empty()) {
    for (const auto& [name, iv] : cfg.box) p.box[static_cast<std::size_t>(coordinate_index(p.metric.coords(), name))] = iv;
    solitonlab::detail::validate_box(p);
  }
  return p;
}

struct ClassifyInput {
  Expr phi;
  ParamTable params;
  Interval x{-1.0, 1.0};
  Interval y{-0.5, 0.5};
};

inline ClassifyInput build_classify_input(const RunConfig& cfg) {
  if (cfg.metric) throw ArgumentError("classify works on Walker problems; give --phi or a Walker --family");
  ClassifyInput in;
  if (cfg.family) {
    if (cfg.phi) throw ArgumentError("give either --family or --phi, not both");
    FamilyArgs args = cfg.params;
    if (cfg.potential) args.functions["potential"] = *cfg.potential;
    if (cfg.lambda) args.reals["lambda"] = *cfg.lambda;
    const SolitonProblem p = instantiate(*cfg.family, args);
    if (!p.phi) throw ArgumentError("family '" + *cfg.family + "' is not a Walker family");
    in.phi = *p.phi;
    in.params = p.metric.params();
    in.x = p.box[1];
    in.y = p.box[2];
  } else {
    if (!cfg.phi) throw ArgumentError("classify needs --phi or a Walker --family");
    in.phi = parse(*cfg.phi);
    in.params = real_params(cfg.params);
  }
  for (const auto& [name, iv] : cfg.box) {
    if (name == "x") in.x = iv;
    else if (name == "y") in.y = iv;
    else if (name != "t") throw ArgumentError("classify box accepts t, x and y only");
  }
  // bind check: unknown names fail here, as a configuration error
  (void)CompiledExpr(in.phi, Bindings{solitonlab::detail::kWalkerCoords, in.params});
  return in;
}

}  // namespace detail

struct RunResult {
  int status = kExitPass;
  std::string output;
  std::string error;
};

inline std::string catalog_listing(Format format) {
  std::ostringstream o;
  const auto& list = family_list();
  if (format == Format::kJson) {
    o << "[";
    for (std::size_t i = 0; i < list.size(); ++i)
      o << (i ? ",\n" : "\n") << "  {\"name\": " << json::quote(list[i].name) << ", \"parameters\": " << json::quote(list[i].parameters)
        << ", \"summary\": " << json::quote(list[i].summary) << "}";
    o << "\n]\n";
  } else {
    for (const auto& f : list) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%-16s %-32s ", f.name.c_str(), f.parameters.c_str());
      o << buf << f.summary << "\n";
    }
  }
  return o.str();
}

/// Runs one command. Never throws for library errors; they become exit statuses 2 and 3.
inline RunResult execute(const RunConfig& cfg) {
  RunResult r;
  if (cfg.mode == Mode::kCatalogList) {
    r.output = catalog_listing(cfg.format);
    return r;
  }

  if (cfg.mode == Mode::kVerify) {
    SolitonProblem problem;
    std::vector<std::vector<double>> points;
    try {
      problem = detail::build_problem(cfg);
      points = sample_points(problem, cfg.samples, cfg.seed);
    } catch (const Error& e) {
      return {kExitConfigError, {}, e.what()};
    }
    try {
      const CheckReport report = verify(problem, points, cfg.tolerances);
      r.output = cfg.format == Format::kJson ? to_json(report) : to_text(report);
      r.status = report.passed() ? kExitPass : kExitCheckFailed;
      if (!report.passed()) {
        std::string failed;
        for (const auto& c : report.checks)
          if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
        r.error = "failed checks: " + failed;
      }
    } catch (const Error& e) {
      return {kExitEvaluationError, {}, e.what()};
    }
    return r;
  }

  detail::ClassifyInput in;
  try {
    in = detail::build_classify_input(cfg);
  } catch (const Error& e) {
    return {kExitConfigError, {}, e.what()};
  }
  try {
    ClassifyReport rep;
    rep.phi = to_string(in.phi);
    const auto grid = walker_grid(in.x, in.y);
    rep.classification = classify(in.phi, grid, in.params);
    rep.match = match_homogeneous_family(in.phi, grid, in.params);
    const auto verdict = rep.classification.verdict;
    if (verdict == WalkerVerdict::kCaseI || verdict == WalkerVerdict::kCaseII) {
      try {
        rep.potential = construct_potential(in.phi, rep.classification, 0.5 * (in.y.lo + in.y.hi), in.params);
        const CompiledExpr phi(in.phi, Bindings{solitonlab::detail::kWalkerCoords, in.params});
        const auto fresh = sample_points(std::vector<Interval>{{-1.0, 1.0}, in.x, in.y}, 25, cfg.seed);
        for (const auto& p : fresh)
          for (double v : walker_residuals(phi, rep.potential->potential, 0.0, p)) rep.fresh_grid_residual = std::max(rep.fresh_grid_residual, std::abs(v));
      } catch (const DomainError& e) {
        rep.failure = e.what();
      }
    } else if (verdict == WalkerVerdict::kNotSoliton) {
      rep.failure = "phi_xxx/phi_xx is not constant and phi_xxx does not vanish";
    }
    r.output = cfg.format == Format::kJson ? to_json(rep) : to_text(rep);
    r.status = rep.passed() ? kExitPass : kExitCheckFailed;
    if (!rep.passed()) r.error = "no soliton potential for this phi" + (rep.failure.empty() ? std::string() : ": " + rep.failure);
  } catch (const ArgumentError& e) {
    return {kExitConfigError, {}, e.what()};
  } catch (const Error& e) {
    return {kExitEvaluationError, {}, e.what()};
  }
  return r;
}

/// execute() plus output handling: report to --out or `out`, diagnostics to `err`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const RunResult r = execute(cfg);
  if (!r.output.empty()) {
    if (cfg.out) {
      std::ofstream f(*cfg.out, std::ios::binary);
      if (!f) {
        err << "error: cannot write '" << *cfg.out << "'\n";
        return kExitConfigError;
      }
      f << r.output;
    } else {
      out << r.output;
    }
  }
  if (!r.error.empty()) err << (r.status == kExitCheckFailed ? "" : "error: ") << r.error << "\n";
  return r.status;
}

}  // namespace solitonlab::cli
