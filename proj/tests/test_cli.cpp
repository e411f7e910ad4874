#include <sstream>

#include <catch_amalgamated.hpp>

#include "qtwist/cli.hpp"

using namespace qtwist;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qtwist");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string data = QTWIST_DATA_DIR;
const std::string specs = QTWIST_SPECS_DIR;

}  // namespace

TEST_CASE("validate exit codes", "[cli]") {
  CHECK(run({"validate", specs + "/poincare-null-plane.json"}).code == 0);
  CHECK(run({"validate", data + "/abelian.json"}).code == 0);
  const auto bad = run({"validate", data + "/jacobi-violating.json"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL jacobi") != std::string::npos);
  CHECK(bad.out.find("witness: [beta_X1, beta_X2]") != std::string::npos);
  const auto malformed = run({"validate", data + "/malformed-rational.json"});
  CHECK(malformed.code == 2);
  CHECK(malformed.err.find("r[0][0]") != std::string::npos);
  CHECK(run({"validate", data + "/does-not-exist.json"}).code == 2);
  CHECK(run({"validate"}).code == 2);
  const auto machine = run({"validate", data + "/jacobi-violating.json", "--format", "machine"});
  CHECK(machine.code == 1);
  CHECK(io::json::parse(machine.out)["overall"] == "fail");
}

TEST_CASE("check exit codes", "[cli]") {
  const auto ok = run({"check", "--preset", "poincare-null-plane", "--suite", "all", "--order", "4"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  CHECK(ok.out.find("overall: pass") != std::string::npos);
  CHECK(run({"check", "--preset", "jordanian-borel", "--order", "0"}).code == 0);
  CHECK(run({"check", specs + "/shift-ring-3.json", "--suite", "ybe"}).code == 0);

  const auto mutated = run({"check", data + "/poincare-mutated.json"});
  CHECK(mutated.code == 1);
  CHECK(mutated.out.find("FAIL jacobi") != std::string::npos);

  CHECK(run({"check", "--preset", "de-sitter"}).code == 2);
  CHECK(run({"check", "--preset", "jordanian-borel", "--suite", "everything"}).code == 2);
  CHECK(run({"check", "--preset", "jordanian-borel", "--suite", "section3"}).code == 2);
  CHECK(run({"check"}).code == 2);
  CHECK(run({"check", specs + "/jordanian-borel.json", "--preset", "jordanian-borel"}).code == 2);
  CHECK(run({"check", "--preset", "jordanian-borel", "--order", "-1"}).code == 2);
  CHECK(run({"check", "--preset", "jordanian-borel", "--format", "yaml"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("machine reports are byte-identical across runs and thread counts", "[cli]") {
  const std::vector<std::string> base{"check", "--preset", "poincare-null-plane", "--order", "3", "--format", "machine"};
  const auto first = run(base);
  CHECK(first.code == 0);
  auto threaded = base;
  threaded.insert(threaded.end(), {"--threads", "4"});
  CHECK(run(base).out == first.out);
  CHECK(run(threaded).out == first.out);
  auto timed = base;
  timed.push_back("--timing");
  CHECK(io::json::parse(run(timed).out)["checks"][0].contains("elapsed_ms"));
  CHECK_FALSE(io::json::parse(first.out)["checks"][0].contains("elapsed_ms"));
}

TEST_CASE("expand", "[cli]") {
  const auto phi0 = run({"expand", "--preset", "poincare-null-plane", "--expr", "phi", "--order", "0"});
  CHECK(phi0.code == 0);
  CHECK(phi0.out == "1⊗1\n");

  const auto k = run({"expand", "--preset", "poincare-null-plane", "--expr", "K"});
  CHECK(k.code == 0);
  CHECK(k.out.find("xi = (0, 0, 1/2)") != std::string::npos);
  // K3 = (1 - e^{-2 H^3}) / 2 with H^3 = h H3
  CHECK(k.out.find("K3:\n  h H3\n  -h^2 H3^2\n  2/3 h^3 H3^3\n  -1/3 h^4 H3^4\n") != std::string::npos);

  const auto r1 = run({"expand", "--preset", "poincare-null-plane", "--expr", "rmat", "--order", "1"});
  CHECK(r1.code == 0);
  for (const char* t : {"1⊗1", "h X1⊗H1", "-h H1⊗X1", "h X3⊗H3", "-h H3⊗X3"})
    CHECK(r1.out.find(std::string(t) + "\n") != std::string::npos);

  const auto d = run({"expand", "--preset", "jordanian-borel", "--expr", "coproduct:X", "--order", "2"});
  CHECK(d.code == 0);
  CHECK(d.out == "1⊗X\nX⊗1\n2 h H⊗X\n2 h^2 H^2⊗X\n");

  const auto f = run({"expand", specs + "/jordanian-borel.json", "--expr", "F", "--order", "1", "--format", "machine"});
  CHECK(f.code == 0);
  const auto doc = io::json::parse(f.out);
  CHECK(doc["terms"].size() == 2);
  CHECK(doc["terms"][1]["coeff"] == "-1");

  CHECK(run({"expand", "--preset", "poincare-null-plane", "--expr", "antipode"}).code == 2);
  CHECK(run({"expand", "--preset", "poincare-null-plane", "--expr", "coproduct:Z9"}).code == 2);
  CHECK(run({"expand", "--preset", "poincare-null-plane"}).code == 2);
  CHECK(run({"expand", data + "/abelian.json", "--expr", "K"}).code == 1);
}

TEST_CASE("spec rendering", "[cli]") {
  const auto s = run({"spec", "--preset", "shift-ring(3)"});
  CHECK(s.code == 0);
  CHECK(io::parse_spec_text(s.out) == presets::shift_ring(3));
  CHECK(run({"spec", "--preset", "nope"}).code == 2);
}
