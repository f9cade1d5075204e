#pragma once

// Small helpers shared by the unit tests: seeded generators and multi-index enumeration.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "solitonlab/jets.hpp"

namespace testsupport {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  std::vector<double> point(int dim, double lo, double hi) {
    std::vector<double> p(static_cast<std::size_t>(dim));
    for (auto& v : p) v = uniform(lo, hi);
    return p;
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// Every multi-index of total degree <= order in `dim` variables.
inline std::vector<solitonlab::MultiIndex> multi_indices(int dim, int order) {
  std::vector<solitonlab::MultiIndex> out;
  solitonlab::MultiIndex m;
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == dim) {
      out.push_back(m);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      m.exponents[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e);
      self(self, var + 1, left - e);
    }
    m.exponents[static_cast<std::size_t>(var)] = 0;
  };
  rec(rec, 0, order);
  return out;
}

/// Random polynomial jet: all Taylor coefficients up to `order` drawn from [-1, 1].
inline solitonlab::Jet random_jet(Rng& rng, int dim, int order) {
  using solitonlab::Jet;
  std::vector<Jet> dx;
  for (int i = 0; i < dim; ++i) dx.push_back(Jet::variable(dim, order, i, 0.0));
  Jet out = Jet::constant(dim, order, 0.0);
  for (const auto& m : multi_indices(dim, order)) {
    Jet term = Jet::constant(dim, order, rng.uniform(-1.0, 1.0));
    for (int i = 0; i < dim; ++i)
      for (int e = 0; e < m.exponents[static_cast<std::size_t>(i)]; ++e) term = term * dx[static_cast<std::size_t>(i)];
    out = out + term;
  }
  return out;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace testsupport
