// Context-free grammars in operator form: text format, terminal-set
// fixpoints, precedence-matrix extraction, shape validation, normalization,
// and a brute-force membership oracle over leftmost derivations.
#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "floyd/prec.hpp"

namespace floyd {

struct Rule {
  std::string lhs;
  std::vector<std::string> rhs;  // empty = epsilon

  bool operator==(const Rule& o) const { return lhs == o.lhs && rhs == o.rhs; }
};

/// An operator-form CFG. Symbol lists keep first-occurrence order from the
/// source text (or construction order); rules keep textual order, with
/// alternatives expanded left to right.
struct Grammar {
  std::string axiom;
  std::vector<std::string> nonterminals;
  std::vector<std::string> terminals;
  std::vector<Rule> rules;

  bool is_nonterminal(const std::string& t) const {
    return std::find(nonterminals.begin(), nonterminals.end(), t) != nonterminals.end();
  }
  bool is_terminal(const std::string& t) const {
    return std::find(terminals.begin(), terminals.end(), t) != terminals.end();
  }
  std::vector<std::size_t> rules_of(const std::string& nt) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rules.size(); ++i)
      if (rules[i].lhs == nt) out.push_back(i);
    return out;
  }
  /// Rule rendered as `A -> x y z` (epsilon as `_`), for diagnostics.
  std::string rule_text(std::size_t i) const {
    std::string s = rules[i].lhs + " ->";
    if (rules[i].rhs.empty()) return s + " _";
    for (const auto& t : rules[i].rhs) s += " " + t;
    return s;
  }

  bool operator==(const Grammar& o) const {
    return axiom == o.axiom && nonterminals == o.nonterminals &&
           terminals == o.terminals && rules == o.rules;
  }
};

class GrammarError : public std::runtime_error {
 public:
  enum class Kind { Syntax, OperatorForm, UndeclaredAxiom, NotReduced, Validation };

  GrammarError(Kind kind, int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        kind_(kind),
        line_(line) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

namespace detail {

inline bool reserved_token(const std::string& t) {
  return t == "#" || t == "->" || t == "|" || t == "_" || t == "start:";
}

}  // namespace detail

/// Checks the structural invariants of a programmatically built grammar:
/// disjoint declared symbol lists, declared axiom and rule symbols, operator
/// form (no two adjacent nonterminals in any right-hand side).
inline void validate_grammar(const Grammar& g) {
  std::set<std::string> nts(g.nonterminals.begin(), g.nonterminals.end());
  std::set<std::string> ts(g.terminals.begin(), g.terminals.end());
  if (nts.size() != g.nonterminals.size() || ts.size() != g.terminals.size())
    throw GrammarError(GrammarError::Kind::Validation, 0, "duplicate symbol declaration");
  for (const auto& t : g.terminals)
    if (nts.count(t))
      throw GrammarError(GrammarError::Kind::Validation, 0,
                         "symbol declared both terminal and nonterminal: " + t);
  if (!nts.count(g.axiom))
    throw GrammarError(GrammarError::Kind::UndeclaredAxiom, 0,
                       "axiom " + g.axiom + " is not a declared nonterminal");
  for (std::size_t i = 0; i < g.rules.size(); ++i) {
    const Rule& r = g.rules[i];
    if (!nts.count(r.lhs))
      throw GrammarError(GrammarError::Kind::Validation, 0,
                         "rule left-hand side is not a nonterminal: " + r.lhs);
    bool prev_nt = false;
    for (const auto& s : r.rhs) {
      bool is_nt = nts.count(s) > 0;
      if (!is_nt && !ts.count(s))
        throw GrammarError(GrammarError::Kind::Validation, 0, "undeclared symbol: " + s);
      if (is_nt && prev_nt)
        throw GrammarError(GrammarError::Kind::OperatorForm, 0,
                           "adjacent nonterminals in " + g.rule_text(i));
      prev_nt = is_nt;
    }
  }
}

/// Parses the grammar text format:
///   // comment
///   start: <axiom>
///   <NT> -> <alt> | <alt> | ...
/// `_` alone denotes the empty alternative. A token is a nonterminal iff it
/// appears as some left-hand side. Reserved tokens: `#`, `->`, `|`, `_`,
/// `start:`. Errors carry 1-based line numbers.
inline Grammar parse_grammar(const std::string& text) {
  struct Line {
    int number;
    std::vector<std::string> tokens;
  };
  std::vector<Line> lines;
  {
    std::istringstream is(text);
    std::string raw;
    int number = 0;
    while (std::getline(is, raw)) {
      ++number;
      auto toks = detail::split_tokens(detail::strip_comment(raw));
      if (!toks.empty()) lines.push_back({number, std::move(toks)});
    }
  }
  if (lines.empty())
    throw GrammarError(GrammarError::Kind::Syntax, 0, "empty grammar text");

  const Line& head = lines.front();
  if (head.tokens.size() != 2 || head.tokens[0] != "start:")
    throw GrammarError(GrammarError::Kind::Syntax, head.number,
                       "expected `start: <nonterminal>` as the first line");
  if (detail::reserved_token(head.tokens[1]))
    throw GrammarError(GrammarError::Kind::Syntax, head.number,
                       "reserved token cannot be the axiom: " + head.tokens[1]);

  std::vector<std::string> occurrence_order{head.tokens[1]};
  std::set<std::string> seen{head.tokens[1]};
  auto note = [&](const std::string& t) {
    if (seen.insert(t).second) occurrence_order.push_back(t);
  };

  struct RawRule {
    int line;
    std::string lhs;
    std::vector<std::string> rhs;
  };
  std::vector<RawRule> raw_rules;
  std::set<std::string> lhs_set;

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& ln = lines[li];
    if (ln.tokens.size() < 2 || ln.tokens[1] != "->")
      throw GrammarError(GrammarError::Kind::Syntax, ln.number,
                         "expected `<nonterminal> -> ...`");
    const std::string& lhs = ln.tokens[0];
    if (detail::reserved_token(lhs))
      throw GrammarError(GrammarError::Kind::Syntax, ln.number,
                         "reserved token cannot be a rule head: " + lhs);
    note(lhs);
    lhs_set.insert(lhs);

    std::vector<std::vector<std::string>> alts{{}};
    bool saw_any = false;
    for (std::size_t k = 2; k < ln.tokens.size(); ++k) {
      const std::string& t = ln.tokens[k];
      if (t == "|") {
        if (alts.back().empty() && !saw_any)
          throw GrammarError(GrammarError::Kind::Syntax, ln.number, "empty alternative");
        alts.emplace_back();
        saw_any = false;
        continue;
      }
      if (t == "_") {
        if (!alts.back().empty())
          throw GrammarError(GrammarError::Kind::Syntax, ln.number,
                             "`_` cannot be mixed with other symbols");
        saw_any = true;  // an explicit epsilon alternative
        continue;
      }
      if (detail::reserved_token(t))
        throw GrammarError(GrammarError::Kind::Syntax, ln.number,
                           "reserved token in a right-hand side: " + t);
      if (saw_any && alts.back().empty())
        throw GrammarError(GrammarError::Kind::Syntax, ln.number,
                           "`_` cannot be mixed with other symbols");
      alts.back().push_back(t);
      saw_any = true;
    }
    if (!saw_any)
      throw GrammarError(GrammarError::Kind::Syntax, ln.number, "empty alternative");
    for (auto& alt : alts) {
      for (const auto& t : alt) note(t);
      raw_rules.push_back({ln.number, lhs, std::move(alt)});
    }
  }

  Grammar g;
  g.axiom = head.tokens[1];
  for (const auto& t : occurrence_order)
    (lhs_set.count(t) ? g.nonterminals : g.terminals).push_back(t);
  if (!lhs_set.count(g.axiom))
    throw GrammarError(GrammarError::Kind::UndeclaredAxiom, head.number,
                       "axiom " + g.axiom + " has no rule");
  for (auto& rr : raw_rules) g.rules.push_back({rr.lhs, std::move(rr.rhs)});

  for (std::size_t i = 0; i < g.rules.size(); ++i) {
    bool prev_nt = false;
    for (const auto& s : g.rules[i].rhs) {
      bool is_nt = lhs_set.count(s) > 0;
      if (is_nt && prev_nt)
        throw GrammarError(GrammarError::Kind::OperatorForm, raw_rules[i].line,
                           "adjacent nonterminals in " + g.rule_text(i));
      prev_nt = is_nt;
    }
  }
  return g;
}

/// Writes the grammar back in the text format, one line per run of
/// consecutive rules sharing a left-hand side, preserving rule order.
inline std::string serialize_grammar(const Grammar& g) {
  std::string out = "start: " + g.axiom + "\n";
  std::size_t i = 0;
  while (i < g.rules.size()) {
    std::size_t j = i;
    out += g.rules[i].lhs + " ->";
    while (j < g.rules.size() && g.rules[j].lhs == g.rules[i].lhs) {
      if (j > i) out += " |";
      if (g.rules[j].rhs.empty())
        out += " _";
      else
        for (const auto& t : g.rules[j].rhs) out += " " + t;
      ++j;
    }
    out += "\n";
    i = j;
  }
  return out;
}

/// Leftmost/rightmost terminal sets of every nonterminal, as least fixpoints:
/// a is in left(A) iff A derives a sentential form starting with a or with a
/// single nonterminal followed by a (symmetrically for right).
struct TerminalSets {
  std::map<std::string, std::set<std::string>> left, right;
};

inline TerminalSets terminal_sets(const Grammar& g) {
  TerminalSets s;
  for (const auto& nt : g.nonterminals) {
    s.left[nt];
    s.right[nt];
  }
  bool changed = true;
  while (changed) {
    changed = false;
    auto add = [&](std::set<std::string>& dst, const std::string& t) {
      if (dst.insert(t).second) changed = true;
    };
    auto merge = [&](std::set<std::string>& dst, const std::set<std::string>& src) {
      for (const auto& t : src) add(dst, t);
    };
    for (const auto& r : g.rules) {
      if (r.rhs.empty()) continue;
      const std::string& front = r.rhs.front();
      if (g.is_terminal(front)) {
        add(s.left[r.lhs], front);
      } else {
        merge(s.left[r.lhs], s.left[front]);
        if (r.rhs.size() >= 2 && g.is_terminal(r.rhs[1])) add(s.left[r.lhs], r.rhs[1]);
      }
      const std::string& back = r.rhs.back();
      if (g.is_terminal(back)) {
        add(s.right[r.lhs], back);
      } else {
        merge(s.right[r.lhs], s.right[back]);
        if (r.rhs.size() >= 2 && g.is_terminal(r.rhs[r.rhs.size() - 2]))
          add(s.right[r.lhs], r.rhs[r.rhs.size() - 2]);
      }
    }
  }
  return s;
}

/// Extracts the precedence matrix of an operator grammar:
///   a = b  for each rule factor `a b` or `a B b`;
///   a > b  for each factor `D b` with a in right(D);
///   a < b  for each factor `a D` with b in left(D);
/// plus the delimiter extension  # < left(axiom),  right(axiom) > #,  # = #.
/// All conflicting pairs are collected and thrown as one ConflictError with
/// witnessing rules.
inline PrecedenceAlphabet compute_opm(const Grammar& g) {
  validate_grammar(g);
  TerminalSets sets = terminal_sets(g);
  int n = static_cast<int>(g.terminals.size());
  std::map<std::string, int> tindex;
  for (int i = 0; i < n; ++i) tindex[g.terminals[i]] = i;
  auto sym = [&](const std::string& t) { return t == kDelimiter ? n : tindex.at(t); };
  auto name = [&](int i) { return i == n ? kDelimiter : g.terminals[i]; };

  std::map<std::pair<int, int>, std::vector<std::pair<PrecRel, std::string>>> cells;
  auto propose = [&](const std::string& a, PrecRel rel, const std::string& b,
                     const std::string& why) {
    auto& cands = cells[{sym(a), sym(b)}];
    for (auto& [r, _] : cands)
      if (r == rel) return;
    cands.emplace_back(rel, why);
  };

  for (std::size_t i = 0; i < g.rules.size(); ++i) {
    const auto& rhs = g.rules[i].rhs;
    std::string why = "rule " + std::to_string(i + 1) + ": " + g.rule_text(i);
    for (std::size_t j = 0; j + 1 < rhs.size(); ++j) {
      const std::string& x = rhs[j];
      const std::string& y = rhs[j + 1];
      bool xt = g.is_terminal(x), yt = g.is_terminal(y);
      if (xt && yt) propose(x, PrecRel::Equals, y, why);
      if (xt && !yt) {
        if (j + 2 < rhs.size() && g.is_terminal(rhs[j + 2]))
          propose(x, PrecRel::Equals, rhs[j + 2], why);
        for (const auto& b : sets.left.at(y)) propose(x, PrecRel::Yields, b, why);
      }
      if (!xt && yt)
        for (const auto& a : sets.right.at(x)) propose(a, PrecRel::Takes, y, why);
    }
  }
  for (const auto& b : sets.left.at(g.axiom))
    propose(kDelimiter, PrecRel::Yields, b, "delimiter extension");
  for (const auto& a : sets.right.at(g.axiom))
    propose(a, PrecRel::Takes, kDelimiter, "delimiter extension");
  propose(kDelimiter, PrecRel::Equals, kDelimiter, "delimiter extension");

  std::vector<PrecConflict> conflicts;
  for (const auto& [key, cands] : cells)
    if (cands.size() > 1)
      conflicts.push_back(PrecConflict{name(key.first), name(key.second), cands});
  if (!conflicts.empty()) throw ConflictError(std::move(conflicts));

  PrecedenceAlphabet alpha(g.terminals);
  for (const auto& [key, cands] : cells)
    alpha.set_relation(name(key.first), cands.front().first, name(key.second));
  return alpha;
}

/// One violation of the normal shape required by the grammar-to-automaton
/// construction. The four checks: the axiom occurs in no right-hand side;
/// no epsilon rule except axiom -> epsilon; every axiom rule is a renaming
/// or epsilon; no non-axiom renaming rule.
struct ShapeIssue {
  enum class Kind { AxiomInRhs, EpsilonRule, AxiomRuleNotRenaming, NonAxiomRenaming };
  Kind kind;
  std::size_t rule_index;
  std::string detail;
};

inline std::vector<ShapeIssue> validate_fischer_shape(const Grammar& g) {
  std::vector<ShapeIssue> issues;
  for (std::size_t i = 0; i < g.rules.size(); ++i) {
    const Rule& r = g.rules[i];
    for (const auto& s : r.rhs)
      if (s == g.axiom) {
        issues.push_back({ShapeIssue::Kind::AxiomInRhs, i,
                          "axiom occurs in " + g.rule_text(i)});
        break;
      }
    bool renaming = r.rhs.size() == 1 && g.is_nonterminal(r.rhs[0]);
    if (r.lhs == g.axiom) {
      if (!r.rhs.empty() && !renaming)
        issues.push_back({ShapeIssue::Kind::AxiomRuleNotRenaming, i,
                          "axiom rule is neither a renaming nor epsilon: " + g.rule_text(i)});
    } else {
      if (r.rhs.empty())
        issues.push_back({ShapeIssue::Kind::EpsilonRule, i,
                          "epsilon rule outside the axiom: " + g.rule_text(i)});
      if (renaming)
        issues.push_back({ShapeIssue::Kind::NonAxiomRenaming, i,
                          "non-axiom renaming rule: " + g.rule_text(i)});
    }
  }
  return issues;
}

namespace detail {

/// Nonterminals that derive some terminal string.
inline std::set<std::string> productive_nonterminals(const Grammar& g) {
  std::set<std::string> prod;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : g.rules) {
      if (prod.count(r.lhs)) continue;
      bool all = true;
      for (const auto& s : r.rhs)
        if (g.is_nonterminal(s) && !prod.count(s)) {
          all = false;
          break;
        }
      if (all) {
        prod.insert(r.lhs);
        changed = true;
      }
    }
  }
  return prod;
}

/// Nonterminals reachable from the axiom through the given rule subset.
inline std::set<std::string> reachable_nonterminals(const Grammar& g,
                                                   const std::set<std::string>& keep) {
  std::set<std::string> reach{g.axiom};
  std::deque<std::string> todo{g.axiom};
  while (!todo.empty()) {
    std::string a = todo.front();
    todo.pop_front();
    for (const auto& r : g.rules) {
      if (r.lhs != a) continue;
      bool usable = true;
      for (const auto& s : r.rhs)
        if (g.is_nonterminal(s) && !keep.count(s)) usable = false;
      if (!usable) continue;
      for (const auto& s : r.rhs)
        if (g.is_nonterminal(s) && reach.insert(s).second) todo.push_back(s);
    }
  }
  return reach;
}

}  // namespace detail

/// True iff every nonterminal is productive and reachable.
inline bool is_reduced(const Grammar& g) {
  auto prod = detail::productive_nonterminals(g);
  if (prod.size() != g.nonterminals.size()) return false;
  auto reach = detail::reachable_nonterminals(g, prod);
  return reach.size() == g.nonterminals.size();
}

/// Drops nonproductive nonterminals (and rules using them), then unreachable
/// ones. The axiom is always kept, possibly with no rules left.
inline Grammar trim(const Grammar& g) {
  auto prod = detail::productive_nonterminals(g);
  auto reach = detail::reachable_nonterminals(g, prod);
  std::set<std::string> keep;
  for (const auto& nt : g.nonterminals)
    if ((prod.count(nt) && reach.count(nt)) || nt == g.axiom) keep.insert(nt);

  Grammar out;
  out.axiom = g.axiom;
  for (const auto& nt : g.nonterminals)
    if (keep.count(nt)) out.nonterminals.push_back(nt);
  out.terminals = g.terminals;
  for (const auto& r : g.rules) {
    if (!keep.count(r.lhs) || !prod.count(r.lhs)) continue;
    bool usable = true;
    for (const auto& s : r.rhs)
      if (g.is_nonterminal(s) && (!keep.count(s) || !prod.count(s))) usable = false;
    if (usable) out.rules.push_back(r);
  }
  return out;
}

/// Rewrites a reduced grammar into the shape validate_fischer_shape accepts,
/// preserving the language:
///   (1) fresh axiom S' with S' -> S when the axiom occurs in a right-hand
///       side or has a rule that is neither a renaming nor epsilon;
///   (2) epsilon elimination, keeping only a possible axiom epsilon rule;
///   (3) inlining of non-axiom renaming rules to their closure;
/// followed by a trim of symbols orphaned by the inlining.
inline Grammar normalize(const Grammar& g) {
  validate_grammar(g);
  if (!is_reduced(g))
    throw GrammarError(GrammarError::Kind::NotReduced, 0,
                       "normalize requires a reduced grammar "
                       "(every nonterminal productive and reachable)");

  Grammar work = g;

  // (1) Fresh axiom when needed.
  bool axiom_in_rhs = false;
  bool axiom_rule_bad = false;
  for (const auto& r : work.rules) {
    for (const auto& s : r.rhs) axiom_in_rhs = axiom_in_rhs || s == work.axiom;
    if (r.lhs == work.axiom) {
      bool renaming = r.rhs.size() == 1 && work.is_nonterminal(r.rhs[0]);
      if (!r.rhs.empty() && !renaming) axiom_rule_bad = true;
    }
  }
  if (axiom_in_rhs || axiom_rule_bad) {
    std::string fresh = work.axiom + "!";
    while (work.is_nonterminal(fresh) || work.is_terminal(fresh)) fresh += "!";
    work.nonterminals.insert(work.nonterminals.begin(), fresh);
    work.rules.insert(work.rules.begin(), Rule{fresh, {work.axiom}});
    work.axiom = fresh;
  }

  // (2) Epsilon elimination. Nullable nonterminals, then every variant of
  // every rule with nullable occurrences dropped; epsilon survives only as an
  // axiom rule.
  {
    std::set<std::string> nullable;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : work.rules) {
        if (nullable.count(r.lhs)) continue;
        bool all = true;
        for (const auto& s : r.rhs)
          if (!work.is_nonterminal(s) || !nullable.count(s)) all = false;
        if (all) {
          nullable.insert(r.lhs);
          changed = true;
        }
      }
    }
    std::vector<Rule> out;
    auto push_unique = [&](Rule r) {
      if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(std::move(r));
    };
    for (const auto& r : work.rules) {
      std::vector<std::size_t> droppable;
      for (std::size_t j = 0; j < r.rhs.size(); ++j)
        if (work.is_nonterminal(r.rhs[j]) && nullable.count(r.rhs[j]))
          droppable.push_back(j);
      for (std::size_t mask = 0; mask < (std::size_t{1} << droppable.size()); ++mask) {
        Rule v{r.lhs, {}};
        std::size_t di = 0;
        for (std::size_t j = 0; j < r.rhs.size(); ++j) {
          bool drop = di < droppable.size() && droppable[di] == j &&
                      ((mask >> di) & 1) != 0;
          if (di < droppable.size() && droppable[di] == j) ++di;
          if (!drop) v.rhs.push_back(r.rhs[j]);
        }
        if (v.rhs.empty() && v.lhs != work.axiom) continue;
        push_unique(std::move(v));
      }
    }
    work.rules = std::move(out);
  }

  // (3) Inline non-axiom renaming rules to their closure.
  {
    auto renaming = [&](const Rule& r) {
      return r.rhs.size() == 1 && work.is_nonterminal(r.rhs[0]);
    };
    std::vector<Rule> out;
    for (const auto& r : work.rules) {
      if (r.lhs != work.axiom && renaming(r)) {
        // Replace by the non-renaming rules of everything reachable through
        // renaming steps from the target.
        std::vector<std::string> chain{r.rhs[0]};
        std::set<std::string> seen{r.rhs[0]};
        for (std::size_t k = 0; k < chain.size(); ++k)
          for (const auto& r2 : work.rules)
            if (r2.lhs == chain[k] && renaming(r2) && seen.insert(r2.rhs[0]).second)
              chain.push_back(r2.rhs[0]);
        for (const auto& b : chain)
          for (const auto& r2 : work.rules)
            if (r2.lhs == b && !renaming(r2)) {
              Rule v{r.lhs, r2.rhs};
              if (std::find(out.begin(), out.end(), v) == out.end())
                out.push_back(std::move(v));
            }
      } else if (std::find(out.begin(), out.end(), r) == out.end()) {
        out.push_back(r);
      }
    }
    work.rules = std::move(out);
  }

  return trim(work);
}

/// Brute-force membership: breadth-first search over leftmost derivations,
/// pruned by terminal-prefix agreement and by a minimal-yield table. Intended
/// for short words (the derivation frontier is bounded by the word length in
/// operator grammars).
inline bool cf_membership(const Grammar& g, const std::vector<std::string>& word) {
  validate_grammar(g);
  int nn = static_cast<int>(g.nonterminals.size());
  int nt = static_cast<int>(g.terminals.size());
  std::map<std::string, int> id;  // nonterminals then terminals
  for (int i = 0; i < nn; ++i) id[g.nonterminals[i]] = i;
  for (int i = 0; i < nt; ++i) id[g.terminals[i]] = nn + i;

  std::vector<int> w;
  for (const auto& t : word) {
    auto it = id.find(t);
    if (it == id.end() || it->second < nn) return false;  // not a terminal here
    w.push_back(it->second);
  }

  // Minimal terminal yield per nonterminal (least fixpoint; kInf = none).
  const long kInf = 1L << 40;
  std::vector<long> min_yield(nn, kInf);
  std::vector<std::vector<std::vector<int>>> rules_by_nt(nn);
  for (const auto& r : g.rules) {
    std::vector<int> rhs;
    for (const auto& s : r.rhs) rhs.push_back(id.at(s));
    rules_by_nt[id.at(r.lhs)].push_back(std::move(rhs));
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < nn; ++a)
      for (const auto& rhs : rules_by_nt[a]) {
        long total = 0;
        for (int s : rhs) total += s < nn ? min_yield[s] : 1;
        if (total < min_yield[a]) {
          min_yield[a] = total;
          changed = true;
        }
      }
  }

  const long limit = static_cast<long>(w.size());
  auto viable = [&](const std::vector<int>& form) {
    long total = 0;
    for (int s : form) total += s < nn ? min_yield[s] : 1;
    if (total > limit) return false;
    for (std::size_t j = 0; j < form.size() && form[j] >= nn; ++j)
      if (j >= w.size() || form[j] != w[j]) return false;
    return true;
  };

  std::deque<std::vector<int>> queue;
  std::set<std::vector<int>> visited;
  std::vector<int> start{id.at(g.axiom)};
  if (!viable(start)) return false;
  queue.push_back(start);
  visited.insert(start);
  while (!queue.empty()) {
    std::vector<int> form = std::move(queue.front());
    queue.pop_front();
    std::size_t k = 0;
    while (k < form.size() && form[k] >= nn) ++k;
    if (k == form.size()) {
      if (form == w) return true;
      continue;
    }
    for (const auto& rhs : rules_by_nt[form[k]]) {
      std::vector<int> next;
      next.reserve(form.size() + rhs.size());
      next.insert(next.end(), form.begin(), form.begin() + k);
      next.insert(next.end(), rhs.begin(), rhs.end());
      next.insert(next.end(), form.begin() + k + 1, form.end());
      if (viable(next) && visited.insert(next).second) queue.push_back(std::move(next));
    }
  }
  return false;
}

}  // namespace floyd
