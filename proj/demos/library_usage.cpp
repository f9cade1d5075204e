// Verifies one catalog family and classifies a Walker function through the library API.
#include <iostream>

#include "solitonlab/solitonlab.hpp"

int main() {
  using namespace solitonlab;

  const SolitonProblem nb = instantiate("N_b", {{{"b", 1.5}}, {}});
  const CheckReport report = verify(nb, 20, 7);
  std::cout << to_text(report) << "\n";

  const Expr phi = parse("exp(2*x)/4*(1+y^2) + x*y");
  const auto grid = walker_grid({-1.0, 1.0}, {-0.5, 0.5});
  const WalkerClassification cls = classify(phi, grid);
  std::cout << "verdict: " << verdict_name(cls.verdict) << ", alpha = " << format_number(cls.alpha) << "\n";
  return report.passed() && cls.verdict == WalkerVerdict::kCaseI ? 0 : 1;
}
