#pragma once

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtwist/qtwist.hpp"

namespace qtwist::cli {

enum ExitCode : int { ok = 0, check_failed = 1, usage = 2 };

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

inline AlgebraSpec load_spec(const std::string& path, const std::string& preset) {
  if (!path.empty() && !preset.empty()) throw parse_error("", 0, "give either a spec file or --preset, not both");
  if (!preset.empty()) return presets::by_name(preset);
  if (path.empty()) throw parse_error("", 0, "a spec file or --preset is required");
  return io::parse_spec_file(path);
}

inline std::optional<std::size_t> generator_index(const AlgebraSpec& s, const std::string& name) {
  const auto names = s.names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

template <std::size_t L>
void print_tensor(std::ostream& out, const std::string& label, const Tensor<L>& t, bool machine, io::json& doc) {
  if (machine) {
    (label.empty() ? doc : doc[label]) = io::tensor_to_json(t);
    return;
  }
  if (!label.empty()) out << label << ":\n";
  for (const auto& line : format_lines(t)) out << (label.empty() ? "" : "  ") << line << "\n";
}

inline int cmd_validate(const std::string& path, bool machine, Streams io_) {
  const AlgebraSpec spec = io::parse_spec_file(path);
  ValidationReport rep;
  try {
    rep = validate_spec(spec);
  } catch (const spec_error& e) {
    io_.err << "error: " << e.what() << "\n";
    return check_failed;
  }
  if (machine) {
    io::json doc;
    doc["spec"] = spec.name;
    doc["overall"] = rep.passed() ? "pass" : "fail";
    io::json checks = io::json::array();
    for (const auto& c : rep.checks) {
      io::json j{{"name", c.name}, {"status", c.pass ? "pass" : "fail"}, {"violations", c.violations}};
      if (!c.pass) j["witness"] = c.witness;
      checks.push_back(j);
    }
    doc["checks"] = checks;
    io_.out << doc.dump(2) << "\n";
  } else {
    io_.out << io::render_validation_text(rep);
  }
  return rep.passed() ? ok : check_failed;
}

inline int cmd_check(const AlgebraSpec& spec, const std::string& suite_name, std::optional<int> order, bool machine,
                     unsigned threads, bool timing, Streams io_) {
  const auto suite = parse_suite(suite_name);
  if (!suite) {
    io_.err << "error: unknown suite '" << suite_name << "'\n";
    return usage;
  }
  const int N = order.value_or(spec.order);
  if (*suite == Suite::section3 && spec.name != presets::poincare_null_plane) {
    io_.err << "error: suite 'section3' needs the poincare-null-plane preset\n";
    return usage;
  }
  const CheckReport report = run_suite_for_spec(spec, *suite, N, threads);
  io_.out << (machine ? io::render_report_machine(report, timing) : io::render_report_text(report));
  return report.overall() ? ok : check_failed;
}

inline int cmd_expand(const AlgebraSpec& spec, const std::string& expr, std::optional<int> order, bool machine,
                      Streams io_) {
  const int N = order.value_or(spec.order);
  auto ctx = HopfContext::from_spec(spec, N);
  io::json doc;
  doc["spec"] = spec.name;
  doc["order"] = N;
  doc["expr"] = expr;
  if (expr == "phi") {
    print_tensor(io_.out, "", build_phi(*ctx), machine, doc["terms"]);
  } else if (expr == "F") {
    print_tensor(io_.out, "", build_twist_F(*ctx), machine, doc["terms"]);
  } else if (expr == "rmat") {
    print_tensor(io_.out, "", build_R(*ctx), machine, doc["terms"]);
  } else if (expr.rfind("coproduct:", 0) == 0) {
    const std::string gen = expr.substr(10);
    const auto idx = generator_index(spec, gen);
    if (!idx) {
      io_.err << "error: unknown generator '" << gen << "'\n";
      return usage;
    }
    const Element g = *idx < spec.m ? ctx->h(*idx) : ctx->x(*idx - spec.m);
    print_tensor(io_.out, "", coproduct(*ctx, g), machine, doc["terms"]);
  } else if (expr == "K") {
    std::vector<Scalar> xi;
    try {
      xi = choose_xi(spec);
    } catch (const no_valid_xi_error& e) {
      io_.err << "error: " << e.what() << "\n";
      return check_failed;
    }
    const auto K = classical_K(*ctx, xi);
    io::json xs = io::json::array();
    for (const auto& v : xi) xs.push_back(to_string(v));
    doc["xi"] = xs;
    if (!machine) {
      io_.out << "xi = (";
      for (std::size_t i = 0; i < xi.size(); ++i) io_.out << (i ? ", " : "") << to_string(xi[i]);
      io_.out << ")\n";
    }
    for (std::size_t mu = 0; mu < K.size(); ++mu) {
      const std::string label = "K" + std::to_string(mu + 1);
      print_tensor(io_.out, label, K[mu], machine, doc["terms"]);
    }
  } else {
    io_.err << "error: unknown expression '" << expr << "' (expected phi, F, rmat, coproduct:GEN or K)\n";
    return usage;
  }
  if (machine) io_.out << doc.dump(2) << "\n";
  return ok;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. argv[0] is the
/// program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Exact verification of twists and universal R-matrices for quasi-Abelian quantum algebras",
               "qtwist"};
  app.require_subcommand(1);

  std::string path, preset, suite = "all", format = "text", expr;
  std::optional<int> order;
  unsigned threads = 1;
  bool timing = false;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "machine"}));
  };

  auto* validate = app.add_subcommand("validate", "Check the classical preconditions of a spec file");
  validate->add_option("spec", path, "Spec file")->required();
  add_format(validate);

  auto* check = app.add_subcommand("check", "Run the verification suite");
  check->add_option("spec", path, "Spec file");
  check->add_option("--preset", preset, "Built-in algebra");
  check->add_option("--suite", suite, "all, twist, ybe, triangular, hopf, classical or section3");
  check->add_option("--order", order, "Truncation order")->check(CLI::Range(0, 64));
  check->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));
  check->add_flag("--timing", timing, "Include elapsed_ms in machine reports");
  add_format(check);

  auto* expand = app.add_subcommand("expand", "Print a normal-ordered expansion");
  expand->add_option("spec", path, "Spec file");
  expand->add_option("--preset", preset, "Built-in algebra");
  expand->add_option("--expr", expr, "phi, F, rmat, coproduct:GEN or K")->required();
  expand->add_option("--order", order, "Truncation order")->check(CLI::Range(0, 64));
  add_format(expand);

  auto* spec_cmd = app.add_subcommand("spec", "Print a preset as a spec file");
  spec_cmd->add_option("--preset", preset, "Built-in algebra")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return usage;
  }

  const bool machine = format == "machine";
  Streams s{out, err};
  try {
    if (*validate) return detail::cmd_validate(path, machine, s);
    if (*spec_cmd) {
      out << io::render_spec(presets::by_name(preset));
      return ok;
    }
    const AlgebraSpec spec = detail::load_spec(path, preset);
    if (*check) return detail::cmd_check(spec, suite, order, machine, threads, timing, s);
    return detail::cmd_expand(spec, expr, order, machine, s);
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    return usage;
  } catch (const unsupported_preset_error& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const spec_error& e) {
    err << "error: " << e.what() << "\n";
    return check_failed;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
}

}  // namespace qtwist::cli
