// wreathdp: compile integer polynomial equations into equation systems over
// wreath products of free abelian groups, build and check witnesses, and
// query the algebraic oracle.
//
// Exit status: 0 success, 1 verify found a failing equation (or selftest a
// violation), 2 bad input or options, 3 precondition failure.

#include "wreathdp/wreathdp.hpp"
#include "wreathdp/selftest.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace wreathdp;

struct Options {
  std::string poly;
  std::vector<std::size_t> ranks;  // outermost base first, as typed
  std::vector<std::int64_t> solution;
  std::string system_path;
  std::string assignment_path;
  std::string output;
  std::size_t i = 2;
  std::size_t samples = 200;
  std::uint64_t seed = 0;
};

/// Parse errors raised while reading a named file.
struct FileParseError {
  std::string path;
  ParseError error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class F>
auto parsing(const std::string& path, F&& fn) {
  try {
    return fn(read_file(path));
  } catch (const ParseError& e) {
    throw FileParseError{path, e};
  }
}

void emit(const Options& opt, const std::string& text) {
  if (opt.output.empty() || opt.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.output, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + opt.output + "'");
  out << text;
}

/// --ranks m_k,...,m_1 to the innermost-first spec.
IteratedSpec iterated_spec(const Options& opt) {
  if (opt.ranks.size() < 2) throw UsageError("--ranks needs at least two entries");
  return IteratedSpec(std::vector<std::size_t>(opt.ranks.rbegin(), opt.ranks.rend()));
}

/// --ranks n,m for Z^n wr Z^m.
GroupSpec flat_spec(const Options& opt) {
  const IteratedSpec s = iterated_spec(opt);
  if (s.depth() != 2) throw UsageError("expected exactly two ranks");
  return GroupSpec(s.ranks[0], s.ranks[1]);
}

IntPolynomial polynomial(const Options& opt) {
  if (opt.poly.empty()) throw UsageError("--poly is required");
  return parse_int_polynomial(opt.poly);
}

std::vector<std::int64_t> solution(const Options& opt, const IntPolynomial& f) {
  if (opt.solution.size() != f.variables()) {
    throw UsageError("--solution needs " + std::to_string(f.variables()) + " values, got " +
                     std::to_string(opt.solution.size()));
  }
  return opt.solution;
}

std::string join(const std::vector<std::int64_t>& z) {
  std::string s;
  for (std::size_t k = 0; k < z.size(); ++k) s += (k ? "," : "") + std::to_string(z[k]);
  return s;
}

int cmd_compile(const Options& opt) {
  const auto f = polynomial(opt);
  const IteratedSpec spec = iterated_spec(opt);
  if (spec.depth() == 2) {
    const auto out = compile(f, flat_spec(opt));
    emit(opt, serialize_system(out.system, WreathGroup(out.spec), out.header()));
  } else {
    const auto red = compile_iterated(f, spec);
    emit(opt, serialize_system(red.system, NestedGroup(spec), red.header()));
  }
  return 0;
}

int cmd_witness(const Options& opt) {
  const auto f = polynomial(opt);
  const auto z = solution(opt, f);
  const IteratedSpec spec = iterated_spec(opt);
  const std::vector<std::string> header{"f = " + format(f), "z = (" + join(z) + ")"};
  if (spec.depth() == 2) {
    const auto out = compile(f, flat_spec(opt));
    emit(opt, serialize_assignment(witness(out, z), WreathGroup(out.spec), header));
  } else {
    const auto red = compile_iterated(f, spec);
    emit(opt, serialize_assignment(witness_iterated(red, z), NestedGroup(spec), header));
  }
  return 0;
}

template <GroupContext G>
int verify_in(const Options& opt, const G& grp) {
  if (opt.system_path.empty() || opt.assignment_path.empty()) {
    throw UsageError("verify needs --system and --assignment");
  }
  const auto sys = parsing(opt.system_path, [&](const std::string& t) { return parse_system(t, grp); });
  const auto asg =
      parsing(opt.assignment_path, [&](const std::string& t) { return parse_assignment(t, grp); });
  const auto report = check_system(sys, asg, grp);
  std::ostringstream out;
  for (auto idx : report.failing) {
    out << "equation " << idx + 1 << " fails: " << serialize_word(sys.equations()[idx].lhs, grp)
        << " = 1\n";
  }
  if (report.satisfied) {
    out << "satisfied: " << sys.size() << " equations\n";
  } else {
    out << "unsatisfied: " << report.failing.size() << " of " << sys.size()
        << " equations fail\n";
  }
  emit(opt, out.str());
  return report.satisfied ? 0 : 1;
}

int cmd_verify(const Options& opt) {
  const IteratedSpec spec = iterated_spec(opt);
  if (spec.depth() == 2) return verify_in(opt, WreathGroup(flat_spec(opt)));
  return verify_in(opt, NestedGroup(spec));
}

int cmd_oracle(const Options& opt) {
  const auto f = polynomial(opt);
  const auto z = solution(opt, f);
  const auto res = oracle_ef(f, z, flat_spec(opt).m);
  const std::string target = std::to_string(res.d + 1);
  std::ostringstream out;
  out << "e_f = " << format(res.e_f) << "\n";
  if (res.member) {
    out << "valuation " << res.valuation.to_string() << " >= " << target << ": solution\n";
  } else {
    out << "valuation " << res.valuation.to_string() << " < " << target << ": NOT a solution\n";
  }
  emit(opt, out.str());
  return 0;
}

/// Reads --assignment and refuses it unless it satisfies the compiled system.
template <GroupContext G>
void load_checked(const Options& opt, const G& grp, const System<typename G::element_type>& sys,
                  Assignment<typename G::element_type>& asg) {
  asg = parsing(opt.assignment_path, [&](const std::string& t) { return parse_assignment(t, grp); });
  const auto report = check_system(sys, asg, grp);
  if (!report.satisfied) {
    throw PreconditionError("assignment does not satisfy the compiled system (equation " +
                            std::to_string(report.failing.front() + 1) + " fails)");
  }
}

int cmd_extract(const Options& opt) {
  if (opt.assignment_path.empty()) throw UsageError("extract needs --assignment");
  const auto f = polynomial(opt);
  const IteratedSpec spec = iterated_spec(opt);
  std::vector<std::int64_t> z;
  if (spec.depth() == 2) {
    const auto out = compile(f, flat_spec(opt));
    Assignment<WreathElement> asg;
    load_checked(opt, WreathGroup(out.spec), out.system, asg);
    z = extract_solution(out, asg);
  } else {
    const auto red = compile_iterated(f, spec);
    Assignment<NestedElement> asg;
    load_checked(opt, NestedGroup(spec), red.system, asg);
    z = extract_iterated(red, asg);
  }
  emit(opt, join(z) + "\n");
  return 0;
}

int cmd_lcs_rank(const Options& opt) {
  emit(opt, to_string(lcs_rank(opt.i, flat_spec(opt))) + "\n");
  return 0;
}

int cmd_selftest(const Options& opt) {
  if (opt.samples == 0) throw UsageError("--samples must be positive");
  std::ostringstream out;
  bool ok = true;
  for (const auto& r : selftest::run_all(opt.samples, opt.seed)) {
    out << (r.violations == 0 ? "PASS " : "FAIL ") << r.name << ": " << r.samples << " samples, "
        << r.violations << " violations\n";
    if (r.violations) {
      ok = false;
      out << "  first: " << r.first_failure << "\n";
    }
  }
  emit(opt, out.str());
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Equation systems over wreath products of free abelian groups"};
  app.require_subcommand(1);

  auto add_ranks = [&](CLI::App* sub) {
    sub->add_option("--ranks", opt.ranks, "Ranks, outermost base first: n,m for Z^n wr Z^m")
        ->delimiter(',')
        ->required();
  };
  auto add_poly = [&](CLI::App* sub) {
    sub->add_option("--poly", opt.poly, "Integer polynomial in z1..zs")->required();
  };
  auto add_solution = [&](CLI::App* sub) {
    sub->add_option("--solution", opt.solution, "Integer tuple z1,...,zs")
        ->delimiter(',')
        ->required()
        ->allow_extra_args(false);
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", opt.output, "Output file (default stdout)");
  };

  auto* compile_cmd = app.add_subcommand("compile", "Emit the equation system for f = 0");
  add_poly(compile_cmd);
  add_ranks(compile_cmd);
  add_output(compile_cmd);

  auto* witness_cmd = app.add_subcommand("witness", "Emit a satisfying assignment for a root");
  add_poly(witness_cmd);
  add_ranks(witness_cmd);
  add_solution(witness_cmd);
  add_output(witness_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Check an assignment against a system");
  verify_cmd->add_option("--system", opt.system_path, "System file")->required();
  verify_cmd->add_option("--assignment", opt.assignment_path, "Assignment file")->required();
  add_ranks(verify_cmd);
  add_output(verify_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle", "Decide f(z) = 0 through e_f");
  add_poly(oracle_cmd);
  add_ranks(oracle_cmd);
  add_solution(oracle_cmd);
  add_output(oracle_cmd);

  auto* extract_cmd = app.add_subcommand("extract", "Read the integer tuple off an assignment");
  add_poly(extract_cmd);
  add_ranks(extract_cmd);
  extract_cmd->add_option("--assignment", opt.assignment_path, "Assignment file")->required();
  add_output(extract_cmd);

  auto* lcs_cmd = app.add_subcommand("lcs-rank", "Rank of a lower central series quotient");
  add_ranks(lcs_cmd);
  lcs_cmd->add_option("--i", opt.i, "Index i >= 2")->required();
  add_output(lcs_cmd);

  auto* self_cmd = app.add_subcommand("selftest", "Run the randomized property suites");
  self_cmd->add_option("--samples", opt.samples, "Samples per suite")->capture_default_str();
  self_cmd->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  add_output(self_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*compile_cmd) return cmd_compile(opt);
    if (*witness_cmd) return cmd_witness(opt);
    if (*verify_cmd) return cmd_verify(opt);
    if (*oracle_cmd) return cmd_oracle(opt);
    if (*extract_cmd) return cmd_extract(opt);
    if (*lcs_cmd) return cmd_lcs_rank(opt);
    if (*self_cmd) return cmd_selftest(opt);
  } catch (const FileParseError& e) {
    std::cerr << e.path << ":" << e.error.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
