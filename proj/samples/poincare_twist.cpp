// Builds the twist for the null-plane Poincare algebra and prints the
// first terms of the universal R-matrix together with a verification run.
#include <iostream>

#include "qtwist/qtwist.hpp"

using namespace qtwist;

int main(int argc, char** argv) {
  const int order = argc > 1 ? std::stoi(argv[1]) : 2;
  auto ctx = HopfContext::from_spec(presets::poincare(), order);

  std::cout << "[H1,X1] = " << format_tensor(ctx->derived().commutator(0, 0)) << "\n\n";

  std::cout << "R =\n";
  for (const auto& line : format_lines(build_R(*ctx))) std::cout << "  " << line << "\n";

  const auto c = Construction::build(ctx);
  const auto report = run_suite(c, Suite::all, 2);
  std::cout << "\n" << io::render_report_text(report);
  return report.overall() ? 0 : 1;
}
