// Describes a two-dimensional algebra through its alpha matrices, checks the
// classical preconditions and prints the coproduct of X2.
#include <iostream>

#include "qtwist/qtwist.hpp"

using namespace qtwist;

int main() {
  // alpha_1 = I and alpha_2 = [[0,1],[1,0]] commute, and the lowered tensor
  // is symmetric because r is the identity.
  AlgebraSpec s;
  s.name = "two-dim-example";
  s.m = s.n = 2;
  s.r = RationalMatrix::identity(2);
  s.B = structure_from_alpha({RationalMatrix{{1, 0}, {0, 1}}, RationalMatrix{{0, 1}, {1, 0}}}, s.r);
  s.order = 3;

  const auto report = validation_checks(s);
  std::cout << io::render_validation_text(report);
  if (!report.passed()) return 1;

  auto ctx = HopfContext::from_spec(s, s.order);
  std::cout << "\nDelta(X2) =\n";
  for (const auto& line : format_lines(coproduct(*ctx, ctx->x(1)))) std::cout << "  " << line << "\n";

  const auto checks = run_suite(Construction::build(ctx), Suite::all);
  std::cout << "\n" << io::render_report_text(checks);
  return checks.overall() ? 0 : 1;
}
