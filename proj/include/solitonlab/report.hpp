#pragma once

// Text and JSON rendering of check reports. JSON is written by hand so that key order and number
// formatting (17 significant digits, %.17g) are fixed; identical reports give identical bytes.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "solitonlab/expr.hpp"
#include "solitonlab/verify.hpp"
#include "solitonlab/walker3.hpp"

namespace solitonlab {

namespace json {

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (const char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

/// %.17g, or null for values JSON cannot hold.
inline std::string number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

inline std::string spectrum(const std::vector<Complex>& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", [" : "[") + number(s[i].real()) + ", " + number(s[i].imag()) + "]";
  return out + "]";
}

}  // namespace json

inline std::string to_json(const CheckReport& r) {
  std::ostringstream o;
  o << "{\n";
  o << "  \"problem\": " << json::quote(r.problem) << ",\n";
  o << "  \"dim\": " << r.dim << ",\n";
  o << "  \"lambda\": " << json::number(r.lambda) << ",\n";
  o << "  \"checks\": [";
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const auto& c = r.checks[i];
    o << (i ? ",\n" : "\n") << "    {\"name\": " << json::quote(c.name) << ", \"max_residual\": " << json::number(c.max_residual)
      << ", \"tolerance\": " << json::number(c.tolerance) << ", \"pass\": " << (c.pass ? "true" : "false")
      << ", \"points_evaluated\": " << c.points_evaluated << "}";
  }
  o << (r.checks.empty() ? "],\n" : "\n  ],\n");
  const auto& p = r.profile;
  o << "  \"profile\": {\n";
  o << "    \"ric_spectrum\": " << json::spectrum(p.ric_spectrum) << ",\n";
  o << "    \"ric_rank\": " << p.ric_rank << ",\n";
  o << "    \"ric_nilpotency\": " << (p.ric_nilpotency ? std::to_string(*p.ric_nilpotency) : "null") << ",\n";
  o << "    \"hf_spectrum\": " << json::spectrum(p.hf_spectrum) << ",\n";
  o << "    \"grad_f_causal_type\": " << json::quote(causal_name(p.grad_f_causal_type)) << ",\n";
  o << "    \"grad_f_norm_sq\": " << json::number(p.grad_f_norm_sq) << "\n";
  o << "  },\n";
  o << "  \"notes\": [";
  for (std::size_t i = 0; i < r.notes.size(); ++i) o << (i ? ",\n" : "\n") << "    " << json::quote(r.notes[i]);
  o << (r.notes.empty() ? "]\n" : "\n  ]\n");
  o << "}\n";
  return o.str();
}

namespace detail {

inline std::string spectrum_text(const std::vector<Complex>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    char buf[64];
    if (s[i].imag() == 0.0) std::snprintf(buf, sizeof buf, "%.10g", s[i].real());
    else std::snprintf(buf, sizeof buf, "%.10g%+.10gi", s[i].real(), s[i].imag());
    out += (i ? ", " : "") + std::string(buf);
  }
  return out + "}";
}

}  // namespace detail

inline std::string to_text(const CheckReport& r) {
  std::ostringstream o;
  char line[256];
  o << "problem: " << r.problem << "\n";
  o << "dim: " << r.dim << "  lambda: " << format_number(r.lambda) << "\n\n";
  std::snprintf(line, sizeof line, "%-38s %-24s %-10s %-7s %s\n", "check", "max_residual", "tolerance", "points", "status");
  o << line;
  for (const auto& c : r.checks) {
    std::snprintf(line, sizeof line, "%-38s %-24.17g %-10.3g %-7d %s\n", c.name.c_str(), c.max_residual, c.tolerance, c.points_evaluated,
                  c.pass ? "pass" : "FAIL");
    o << line;
  }
  const auto& p = r.profile;
  o << "\nprofile (first point):\n";
  o << "  Ric spectrum     " << detail::spectrum_text(p.ric_spectrum) << "\n";
  o << "  Ric rank         " << p.ric_rank << "\n";
  o << "  Ric nilpotency   " << (p.ric_nilpotency ? std::to_string(*p.ric_nilpotency) : std::string("not nilpotent")) << "\n";
  o << "  H_f spectrum     " << detail::spectrum_text(p.hf_spectrum) << "\n";
  o << "  grad f           " << causal_name(p.grad_f_causal_type) << ", |grad f|^2 = " << format_number(p.grad_f_norm_sq) << "\n";
  if (!r.notes.empty()) {
    o << "\nnotes:\n";
    for (const auto& n : r.notes) o << "  - " << n << "\n";
  }
  o << "\nresult: " << (r.passed() ? "PASS" : "FAIL") << "\n";
  return o.str();
}

/// Outcome of the classify pipeline: verdict, reconstructed potential and family match.
struct ClassifyReport {
  std::string phi;
  WalkerClassification classification;
  std::optional<ConstructedPotential> potential;
  double fresh_grid_residual = 0.0;  // walker residuals of the potential on an offset grid
  double tolerance = 1e-8;
  FamilyMatch match;
  std::string failure;  // why no potential was built, if any

  bool passed() const {
    if (classification.verdict == WalkerVerdict::kFlat) return true;
    return potential.has_value() && std::isfinite(fresh_grid_residual) && fresh_grid_residual < tolerance;
  }
};

inline std::string to_json(const ClassifyReport& r) {
  std::ostringstream o;
  const auto& c = r.classification;
  o << "{\n";
  o << "  \"phi\": " << json::quote(r.phi) << ",\n";
  o << "  \"verdict\": " << json::quote(verdict_name(c.verdict)) << ",\n";
  o << "  \"alpha\": " << json::number(c.alpha) << ",\n";
  o << "  \"grid_points\": " << c.grid.size() << ",\n";
  o << "  \"statistics\": {\"max_phi_xx\": " << json::number(c.max_phi_xx) << ", \"max_phi_xxx\": " << json::number(c.max_phi_xxx)
    << ", \"ratio_mean\": " << json::number(c.ratio_mean) << ", \"ratio_spread\": " << json::number(c.ratio_spread)
    << ", \"form_residual\": " << json::number(c.form_residual) << "},\n";
  o << "  \"samples\": [";
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    const auto& s = c.samples[i];
    o << (i ? ", " : "") << "{\"y\": " << json::number(s.y) << ", \"a\": " << json::number(s.a);
    if (c.verdict == WalkerVerdict::kCaseI) o << ", \"b\": " << json::number(s.b) << ", \"c\": " << json::number(s.c);
    o << "}";
  }
  o << "],\n";
  if (r.potential) {
    o << "  \"potential\": {\"form\": " << json::quote(r.potential->potential.description()) << ", \"y0\": " << json::number(r.potential->y0)
      << ", \"grid_residual\": " << json::number(r.potential->max_residual) << ", \"fresh_grid_residual\": " << json::number(r.fresh_grid_residual)
      << ", \"tolerance\": " << json::number(r.tolerance) << "},\n";
  } else {
    o << "  \"potential\": null,\n";
  }
  o << "  \"family_match\": {\"family\": " << json::quote(family_name(r.match.family)) << ", \"parameter\": " << json::number(r.match.parameter) << "},\n";
  o << "  \"pass\": " << (r.passed() ? "true" : "false") << "\n";
  o << "}\n";
  return o.str();
}

inline std::string to_text(const ClassifyReport& r) {
  std::ostringstream o;
  const auto& c = r.classification;
  o << "phi: " << r.phi << "\n";
  o << "verdict: " << verdict_name(c.verdict);
  if (c.verdict == WalkerVerdict::kCaseI) o << "  alpha = " << format_number(c.alpha);
  o << "\n";
  o << "grid: " << c.grid.size() << " points, max|phi_xx| = " << format_number(c.max_phi_xx) << ", max|phi_xxx| = " << format_number(c.max_phi_xxx)
    << "\n";
  if (!c.samples.empty()) {
    o << "samples:\n";
    for (const auto& s : c.samples) {
      o << "  y = " << format_number(s.y) << "  a = " << format_number(s.a);
      if (c.verdict == WalkerVerdict::kCaseI) o << "  b = " << format_number(s.b) << "  c = " << format_number(s.c);
      o << "\n";
    }
  }
  if (r.potential) {
    o << "potential: f = " << r.potential->potential.description() << ", gamma(y0) = gamma'(y0) = 0 at y0 = " << format_number(r.potential->y0) << "\n";
    o << "  walker residuals: grid " << format_number(r.potential->max_residual) << ", fresh grid " << format_number(r.fresh_grid_residual)
      << " (tolerance " << format_number(r.tolerance) << ")\n";
  } else if (!r.failure.empty()) {
    o << "potential: none (" << r.failure << ")\n";
  }
  o << "family match: " << family_name(r.match.family);
  if (r.match.family == HomogeneousFamily::kNb || r.match.family == HomogeneousFamily::kPc) o << " (" << format_number(r.match.parameter) << ")";
  o << "\n";
  o << "result: " << (r.passed() ? "PASS" : "FAIL") << "\n";
  return o.str();
}

}  // namespace solitonlab
