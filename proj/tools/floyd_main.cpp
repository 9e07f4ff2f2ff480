// Command-line frontend: precedence matrices, machine runs with traces,
// determinization, conversions in both directions, lasso verdicts, and
// brute-force language comparison. Results go to standard output,
// diagnostics to standard error.
//
// Exit codes: 0 success/accept, 1 input or usage error, 2 validation failure
// (precedence conflict, grammar shape, Equals cycle, state-cap overflow),
// 3 reject, 4 undetermined, 5 language disagreement.
#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "floyd/floyd.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitValidation = 2;
constexpr int kExitReject = 3;
constexpr int kExitUndetermined = 4;
constexpr int kExitDisagree = 5;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Empty path means standard output.
void write_result(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

/// Maps every library error to the documented exit codes.
int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const floyd::ConflictError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const floyd::EqCycleError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const floyd::DeterminizeLimitError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const floyd::GrammarError& e) {
    std::cerr << e.what() << "\n";
    bool validation = e.kind() == floyd::GrammarError::Kind::Validation ||
                      e.kind() == floyd::GrammarError::Kind::NotReduced;
    return validation ? kExitValidation : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  }
}

int cmd_opm(const std::string& path) {
  floyd::Grammar g = floyd::parse_grammar(read_file(path));
  try {
    std::cout << floyd::format_matrix(floyd::compute_opm(g));
  } catch (const floyd::ConflictError& e) {
    std::cout << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

int cmd_run(const std::string& path, const std::string& word, bool show_trace) {
  floyd::FloydAutomaton a = floyd::parse_automaton(read_file(path));
  floyd::AutomatonRunner runner(a);
  std::vector<std::string> w = floyd::detail::split_tokens(word);
  if (runner.accepts(w)) {
    if (show_trace) std::cout << floyd::format_trace(runner.trace(w), w);
    std::cout << "accept\n";
    return kExitOk;
  }
  std::cout << "reject\n";
  return kExitReject;
}

int cmd_determinize(const std::string& path, const std::string& out, std::size_t cap) {
  floyd::FloydAutomaton a = floyd::parse_automaton(read_file(path));
  floyd::DeterminizeResult res = floyd::determinize(a, cap);
  write_result(out, floyd::serialize_automaton(res.automaton));
  return kExitOk;
}

int cmd_g2a(const std::string& path, const std::string& out) {
  floyd::Grammar g = floyd::normalize(floyd::parse_grammar(read_file(path)));
  write_result(out, floyd::serialize_automaton(floyd::grammar_to_automaton(g)));
  return kExitOk;
}

int cmd_a2g(const std::string& path, const std::string& out) {
  floyd::FloydAutomaton a = floyd::parse_automaton(read_file(path));
  write_result(out, floyd::serialize_grammar(floyd::automaton_to_grammar(a)));
  return kExitOk;
}

int cmd_omega(const std::string& path, const std::string& prefix,
              const std::string& loop, std::size_t budget) {
  std::vector<std::string> u = floyd::detail::split_tokens(prefix);
  std::vector<std::string> v = floyd::detail::split_tokens(loop);
  if (v.empty()) {
    std::cerr << "--loop must contain at least one token\n";
    return kExitInput;
  }
  floyd::FloydAutomaton a = floyd::parse_automaton(read_file(path));
  floyd::OmegaResult r = floyd::omega_accepts(a, {u, v}, budget);
  switch (r.verdict) {
    case floyd::OmegaResult::Verdict::Accepted:
      std::cout << "Accepted\n" << r.detail << "\n";
      return kExitOk;
    case floyd::OmegaResult::Verdict::Rejected:
      std::cout << "Rejected\n" << r.detail << "\n";
      return kExitReject;
    case floyd::OmegaResult::Verdict::Undetermined:
      std::cout << "Undetermined\n" << r.detail << "\n";
      return kExitUndetermined;
  }
  return kExitInput;
}

/// A comparison side: a membership predicate plus its terminal list,
/// loaded from a .g or .fa file.
struct Side {
  floyd::MembershipFn member;
  std::vector<std::string> terminals;
};

Side load_side(const std::string& path) {
  auto ends_with = [&](const std::string& suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  Side s;
  if (ends_with(".g")) {
    auto g = std::make_shared<floyd::Grammar>(floyd::parse_grammar(read_file(path)));
    s.terminals = g->terminals;
    s.member = [g](const std::vector<std::string>& w) {
      return floyd::cf_membership(*g, w);
    };
  } else if (ends_with(".fa")) {
    auto r = std::make_shared<floyd::AutomatonRunner>(
        floyd::parse_automaton(read_file(path)));
    s.terminals = r->automaton().alphabet.terminals();
    s.member = [r](const std::vector<std::string>& w) { return r->accepts(w); };
  } else {
    throw std::runtime_error(path + ": expected a .g or .fa file");
  }
  return s;
}

int cmd_equiv(const std::string& left, const std::string& right, std::size_t max_len) {
  Side l = load_side(left);
  Side r = load_side(right);
  std::vector<std::string> terms = l.terminals;
  for (const auto& t : r.terminals)
    if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(t);
  floyd::AgreementReport rep = floyd::language_agree(l.member, r.member, terms, max_len);
  if (rep.agree()) {
    std::cout << "checked " << rep.words_checked << " words: agree\n";
    return kExitOk;
  }
  std::cout << "checked " << rep.words_checked << " words: "
            << rep.disagreements.size() << " disagreement(s)\n"
            << rep.to_text();
  return kExitDisagree;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator-precedence toolkit: grammars, stack machines, conversions"};
  app.require_subcommand(1);

  std::string opm_path;
  auto* opm = app.add_subcommand("opm", "print the precedence matrix of a grammar");
  opm->add_option("grammar", opm_path, "grammar file (.g)")->required();

  std::string run_path, run_word;
  bool run_trace = false;
  auto* run = app.add_subcommand("run", "run a machine on a word");
  run->add_option("automaton", run_path, "machine file (.fa)")->required();
  run->add_option("word", run_word, "space-separated tokens, one shell argument")
      ->required();
  run->add_flag("--trace", run_trace, "print the accepting run");

  std::string det_path, det_out;
  std::size_t det_cap = 4096;
  auto* det = app.add_subcommand("determinize", "make a machine deterministic");
  det->add_option("automaton", det_path, "machine file (.fa)")->required();
  det->add_option("--out", det_out, "output file (default: standard output)");
  det->add_option("--cap", det_cap, "abort beyond this many result states");

  std::string g2a_path, g2a_out;
  auto* g2a = app.add_subcommand("g2a", "convert a grammar to a machine");
  g2a->add_option("grammar", g2a_path, "grammar file (.g)")->required();
  g2a->add_option("--out", g2a_out, "output file (default: standard output)");

  std::string a2g_path, a2g_out;
  auto* a2g = app.add_subcommand("a2g", "convert a machine to a grammar");
  a2g->add_option("automaton", a2g_path, "machine file (.fa)")->required();
  a2g->add_option("--out", a2g_out, "output file (default: standard output)");

  std::string om_path, om_prefix, om_loop;
  std::size_t om_budget = 0;
  auto* om = app.add_subcommand("omega", "decide acceptance of a lasso word");
  om->add_option("automaton", om_path, "machine file (.fa)")->required();
  om->add_option("--prefix", om_prefix, "prefix tokens (default empty)");
  om->add_option("--loop", om_loop, "repeated tokens (required, nonempty)");
  om->add_option("--budget", om_budget,
                 "structural simulation budget in tokens (0 = automatic)");

  std::string eq_left, eq_right;
  std::size_t eq_len = 6;
  auto* eq = app.add_subcommand("equiv", "compare two languages on short words");
  eq->add_option("left", eq_left, "grammar (.g) or machine (.fa) file")->required();
  eq->add_option("right", eq_right, "grammar (.g) or machine (.fa) file")->required();
  eq->add_option("--max-len", eq_len, "maximum word length to check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the error message
    return code == 0 ? kExitOk : kExitInput;
  }

  if (opm->parsed()) return run_guarded([&] { return cmd_opm(opm_path); });
  if (run->parsed())
    return run_guarded([&] { return cmd_run(run_path, run_word, run_trace); });
  if (det->parsed())
    return run_guarded([&] { return cmd_determinize(det_path, det_out, det_cap); });
  if (g2a->parsed()) return run_guarded([&] { return cmd_g2a(g2a_path, g2a_out); });
  if (a2g->parsed()) return run_guarded([&] { return cmd_a2g(a2g_path, a2g_out); });
  if (om->parsed())
    return run_guarded([&] { return cmd_omega(om_path, om_prefix, om_loop, om_budget); });
  if (eq->parsed())
    return run_guarded([&] { return cmd_equiv(eq_left, eq_right, eq_len); });
  return kExitInput;
}
