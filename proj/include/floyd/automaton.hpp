// Stack machines driven by a precedence matrix: the model, a nondeterministic
// runner with full traces, determinism checks, and the text format.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "floyd/prec.hpp"

namespace floyd {

struct PushEdge {
  std::string from;
  std::string terminal;
  std::string to;

  bool operator==(const PushEdge& o) const {
    return from == o.from && terminal == o.terminal && to == o.to;
  }
};

/// `to` is a possible result of flushing when the popped group was entered
/// from state `top` and the entry left below carries state `context`.
struct FlushEdge {
  std::string top;
  std::string context;
  std::string to;

  bool operator==(const FlushEdge& o) const {
    return top == o.top && context == o.context && to == o.to;
  }
};

/// A precedence-driven stack machine. The matrix decides the move kind from
/// (top stack symbol, lookahead); states only constrain which push/flush
/// results are available.
struct FloydAutomaton {
  PrecedenceAlphabet alphabet;
  std::vector<std::string> states;
  std::vector<std::string> initial;
  std::vector<std::string> finals;
  std::vector<PushEdge> pushes;
  std::vector<FlushEdge> flushes;

  bool operator==(const FloydAutomaton& o) const {
    return alphabet == o.alphabet && states == o.states && initial == o.initial &&
           finals == o.finals && pushes == o.pushes && flushes == o.flushes;
  }
};

class AutomatonError : public std::runtime_error {
 public:
  AutomatonError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Structural invariants of a programmatically built machine: unique declared
/// states, initial/final/edge states declared, edge terminals in the alphabet.
inline void validate_automaton(const FloydAutomaton& a) {
  std::set<std::string> st(a.states.begin(), a.states.end());
  if (st.size() != a.states.size())
    throw AutomatonError(0, "duplicate state declaration");
  auto need_state = [&](const std::string& q, const char* where) {
    if (!st.count(q))
      throw AutomatonError(0, std::string("undeclared state in ") + where + ": " + q);
  };
  for (const auto& q : a.initial) need_state(q, "initial");
  for (const auto& q : a.finals) need_state(q, "final");
  for (const auto& e : a.pushes) {
    need_state(e.from, "push");
    need_state(e.to, "push");
    if (!a.alphabet.has_terminal(e.terminal))
      throw AutomatonError(0, "push on unknown terminal: " + e.terminal);
  }
  for (const auto& e : a.flushes) {
    need_state(e.top, "flush");
    need_state(e.context, "flush");
    need_state(e.to, "flush");
  }
}

/// True iff there is exactly one initial state and every push/flush image has
/// at most one element.
inline bool is_deterministic(const FloydAutomaton& a) {
  if (a.initial.size() != 1) return false;
  std::map<std::pair<std::string, std::string>, std::set<std::string>> push_img, flush_img;
  for (const auto& e : a.pushes) push_img[{e.from, e.terminal}].insert(e.to);
  for (const auto& e : a.flushes) flush_img[{e.top, e.context}].insert(e.to);
  for (const auto& [k, img] : push_img)
    if (img.size() > 1) return false;
  for (const auto& [k, img] : flush_img)
    if (img.size() > 1) return false;
  return true;
}

enum class MoveKind { Start, Mark, Push, Flush };

inline const char* move_label(MoveKind k) {
  switch (k) {
    case MoveKind::Start: return "start";
    case MoveKind::Mark: return "mark";
    case MoveKind::Push: return "push";
    case MoveKind::Flush: return "flush";
  }
  return "?";
}

/// One stack cell: a symbol, its mark (set when the cell opened a new group
/// on a Yields move), and the machine state recorded when the cell was last
/// written.
struct StackEntry {
  std::string symbol;
  bool marked;
  std::string state;

  bool operator==(const StackEntry& o) const {
    return symbol == o.symbol && marked == o.marked && state == o.state;
  }
};

/// Stack plus number of consumed input tokens.
struct Configuration {
  std::vector<StackEntry> stack;
  std::size_t position = 0;

  bool operator==(const Configuration& o) const {
    return stack == o.stack && position == o.position;
  }
};

struct TraceStep {
  MoveKind move;  // Start for the first step, then the move that produced it
  Configuration config;
};

/// An accepting run: the start configuration followed by one configuration
/// per move. depth is the maximum number of marked cells ever on the stack.
struct Trace {
  std::vector<TraceStep> steps;
  int depth = 0;

  std::vector<MoveKind> moves() const {  // excludes the Start step
    std::vector<MoveKind> out;
    for (std::size_t i = 1; i < steps.size(); ++i) out.push_back(steps[i].move);
    return out;
  }
};

/// `start [#:q0] [a':q1] | b c #` — move label padded to five columns, the
/// stack (marked symbols carry a prime), and the unread suffix ending in #.
inline std::string format_configuration(MoveKind move, const Configuration& c,
                                        const std::vector<std::string>& word) {
  std::string s = move_label(move);
  s.resize(5, ' ');
  s += ' ';
  for (std::size_t i = 0; i < c.stack.size(); ++i) {
    if (i > 0) s += ' ';
    s += '[' + c.stack[i].symbol + (c.stack[i].marked ? "'" : "") + ':' +
         c.stack[i].state + ']';
  }
  s += " | ";
  for (std::size_t i = c.position; i < word.size(); ++i) s += word[i] + ' ';
  s += kDelimiter;
  return s;
}

inline std::string format_trace(const Trace& t, const std::vector<std::string>& word) {
  std::string out;
  for (const auto& step : t.steps)
    out += format_configuration(step.move, step.config, word) + "\n";
  return out;
}

class NoAcceptingRunError : public std::runtime_error {
 public:
  explicit NoAcceptingRunError(std::size_t longest_prefix)
      : std::runtime_error("no accepting run; longest consumed prefix: " +
                           std::to_string(longest_prefix) + " token(s)"),
        longest_prefix_(longest_prefix) {}
  std::size_t longest_prefix() const { return longest_prefix_; }

 private:
  std::size_t longest_prefix_;
};

/// Move kinds of the state-free run determined by matrix and word alone.
/// Every stateful branch follows this sequence for as long as it survives.
struct StructuralRun {
  std::vector<MoveKind> moves;
  bool completed = false;  // reached stack [#] with the whole word consumed
};

inline StructuralRun structural_run(const PrecedenceAlphabet& alpha,
                                    const std::vector<std::string>& word) {
  StructuralRun out;
  int hash = alpha.symbol_index(kDelimiter);
  std::vector<int> w;
  for (const auto& t : word) w.push_back(alpha.symbol_index(t));
  struct Cell {
    int symbol;
    bool marked;
  };
  std::vector<Cell> stack{{hash, false}};
  std::size_t pos = 0;
  while (true) {
    if (pos == w.size() && stack.size() == 1) {
      out.completed = true;
      return out;
    }
    int look = pos < w.size() ? w[pos] : hash;
    auto rel = alpha.relation_by_index(stack.back().symbol, look);
    if (!rel) return out;
    if (*rel == PrecRel::Takes) {
      std::size_t i = stack.size();
      while (i > 1 && !stack[i - 1].marked) --i;
      if (i == 1) return out;  // nothing to flush
      stack.resize(i - 1);
      out.moves.push_back(MoveKind::Flush);
    } else {
      if (pos == w.size()) return out;  // cannot shift past the end
      stack.push_back({look, *rel == PrecRel::Yields});
      ++pos;
      out.moves.push_back(*rel == PrecRel::Yields ? MoveKind::Mark : MoveKind::Push);
    }
  }
}

/// Interpreter for one machine. Compiles the edge lists into indexed tables
/// once, then answers acceptance queries, produces accepting traces, and
/// enumerates branch shapes.
class AutomatonRunner {
 public:
  explicit AutomatonRunner(const FloydAutomaton& a) : a_(a) {
    validate_automaton(a_);
    int m = static_cast<int>(a_.states.size());
    int n = a_.alphabet.symbol_count();  // terminals + #
    for (int i = 0; i < m; ++i) state_index_[a_.states[i]] = i;
    push_.assign(static_cast<std::size_t>(m) * n, {});
    flush_.assign(static_cast<std::size_t>(m) * m, {});
    for (const auto& e : a_.pushes)
      push_[static_cast<std::size_t>(state_index_.at(e.from)) * n +
            a_.alphabet.symbol_index(e.terminal)]
          .push_back(state_index_.at(e.to));
    for (const auto& e : a_.flushes)
      flush_[static_cast<std::size_t>(state_index_.at(e.top)) * m +
             state_index_.at(e.context)]
          .push_back(state_index_.at(e.to));
    for (const auto& q : a_.finals) final_.insert(state_index_.at(q));
    for (const auto& q : a_.initial) initial_.push_back(state_index_.at(q));
  }

  const FloydAutomaton& automaton() const { return a_; }

  /// True iff some run consumes the whole word and ends on the bare bottom
  /// cell in a final state. Tokens outside the alphabet reject (no error).
  bool accepts(const std::vector<std::string>& word) const {
    std::vector<int> w;
    if (!encode(word, w)) return false;
    std::set<std::vector<int>> visited;
    for (int q0 : initial_) {
      std::vector<Cell> stack{{hash_index(), false, q0}};
      if (search_accept(stack, 0, w, visited)) return true;
    }
    return false;
  }

  /// First accepting run in declaration order (initial states, then push/flush
  /// edge order). Throws NoAcceptingRunError when none exists; tokens outside
  /// the alphabet throw UnknownTokenError.
  Trace trace(const std::vector<std::string>& word) const {
    std::vector<int> w;
    for (const auto& t : word) w.push_back(a_.alphabet.symbol_index(t));
    std::size_t longest = 0;
    std::set<std::vector<int>> dead;
    Trace out;
    std::vector<Cell> stack{{hash_index(), false, -1}};
    for (int q0 : initial_) {
      stack[0].state = q0;
      out.steps.clear();
      out.steps.push_back({MoveKind::Start, decode(stack, 0)});
      if (search_trace(stack, 0, w, dead, longest, out)) {
        out.depth = 0;
        for (const auto& s : out.steps) {
          int d = 0;
          for (const auto& e : s.config.stack) d += e.marked ? 1 : 0;
          out.depth = std::max(out.depth, d);
        }
        return out;
      }
    }
    throw NoAcceptingRunError(longest);
  }

  /// Move-kind sequences of every maximal branch (accepting, rejecting, or
  /// stuck), depth-first in declaration order, at most `cap` branches.
  std::vector<std::vector<MoveKind>> branch_moves(const std::vector<std::string>& word,
                                                  std::size_t cap = 10000) const {
    std::vector<std::vector<MoveKind>> out;
    std::vector<int> w;
    if (!encode(word, w)) return out;
    std::vector<MoveKind> path;
    for (int q0 : initial_) {
      if (out.size() >= cap) break;
      std::vector<Cell> stack{{hash_index(), false, q0}};
      branch_walk(stack, 0, w, path, out, cap);
    }
    return out;
  }

 private:
  struct Cell {
    int symbol;
    bool marked;
    int state;
  };

  int hash_index() const { return static_cast<int>(a_.alphabet.terminals().size()); }

  bool encode(const std::vector<std::string>& word, std::vector<int>& w) const {
    for (const auto& t : word) {
      if (!a_.alphabet.has_terminal(t)) return false;
      w.push_back(a_.alphabet.symbol_index(t));
    }
    return true;
  }

  Configuration decode(const std::vector<Cell>& stack, std::size_t pos) const {
    Configuration c;
    c.position = pos;
    for (const auto& cell : stack)
      c.stack.push_back(
          {a_.alphabet.symbol_name(cell.symbol), cell.marked, a_.states[cell.state]});
    return c;
  }

  std::vector<int> key(const std::vector<Cell>& stack, std::size_t pos) const {
    std::vector<int> k{static_cast<int>(pos)};
    for (const auto& c : stack) {
      k.push_back(c.symbol * 2 + (c.marked ? 1 : 0));
      k.push_back(c.state);
    }
    return k;
  }

  /// Successor kinds from a configuration. Exactly one of the flags is set
  /// unless the configuration is final or stuck.
  struct Step {
    bool halt = false;     // end of input on the bare bottom cell
    bool stuck = true;     // no relation, or nothing to pop, or end of input
    MoveKind kind = MoveKind::Start;
    int look = -1;                 // symbol pushed (Mark/Push)
    std::size_t flush_from = 0;    // index of the topmost marked cell (Flush)
    std::vector<int> targets;      // candidate result states
  };

  Step classify(const std::vector<Cell>& stack, std::size_t pos,
                const std::vector<int>& w) const {
    Step s;
    if (pos == w.size() && stack.size() == 1) {
      s.halt = true;
      s.stuck = false;
      return s;
    }
    int look = pos < w.size() ? w[pos] : hash_index();
    auto rel = a_.alphabet.relation_by_index(stack.back().symbol, look);
    if (!rel) return s;
    int n = a_.alphabet.symbol_count();
    int m = static_cast<int>(a_.states.size());
    if (*rel == PrecRel::Takes) {
      std::size_t i = stack.size();
      while (i > 1 && !stack[i - 1].marked) --i;
      if (i == 1) return s;
      s.kind = MoveKind::Flush;
      s.flush_from = i - 1;
      s.targets = flush_[static_cast<std::size_t>(stack.back().state) * m +
                         stack[i - 2].state];
    } else {
      if (pos == w.size()) return s;  // the delimiter is never shifted
      s.kind = *rel == PrecRel::Yields ? MoveKind::Mark : MoveKind::Push;
      s.look = look;
      s.targets = push_[static_cast<std::size_t>(stack.back().state) * n + look];
    }
    s.stuck = s.targets.empty();
    return s;
  }

  static void apply(std::vector<Cell>& stack, std::size_t& pos, const Step& s, int target) {
    if (s.kind == MoveKind::Flush) {
      stack.resize(s.flush_from);
      stack.back().state = target;
    } else {
      stack.push_back({s.look, s.kind == MoveKind::Mark, target});
      ++pos;
    }
  }

  bool search_accept(std::vector<Cell>& stack, std::size_t pos,
                     const std::vector<int>& w, std::set<std::vector<int>>& visited) const {
    if (!visited.insert(key(stack, pos)).second) return false;
    Step s = classify(stack, pos, w);
    if (s.halt) return final_.count(stack[0].state) > 0;
    if (s.stuck) return false;
    for (int t : s.targets) {
      std::vector<Cell> next = stack;
      std::size_t npos = pos;
      apply(next, npos, s, t);
      if (search_accept(next, npos, w, visited)) return true;
    }
    return false;
  }

  bool search_trace(std::vector<Cell>& stack, std::size_t pos, const std::vector<int>& w,
                    std::set<std::vector<int>>& dead, std::size_t& longest,
                    Trace& out) const {
    longest = std::max(longest, pos);
    if (dead.count(key(stack, pos))) return false;
    Step s = classify(stack, pos, w);
    if (s.halt) {
      if (final_.count(stack[0].state)) return true;
    } else if (!s.stuck) {
      for (int t : s.targets) {
        std::vector<Cell> next = stack;
        std::size_t npos = pos;
        apply(next, npos, s, t);
        out.steps.push_back({s.kind, decode(next, npos)});
        if (search_trace(next, npos, w, dead, longest, out)) return true;
        out.steps.pop_back();
      }
    }
    dead.insert(key(stack, pos));
    return false;
  }

  void branch_walk(std::vector<Cell>& stack, std::size_t pos, const std::vector<int>& w,
                   std::vector<MoveKind>& path, std::vector<std::vector<MoveKind>>& out,
                   std::size_t cap) const {
    if (out.size() >= cap) return;
    Step s = classify(stack, pos, w);
    if (s.halt || s.stuck) {
      out.push_back(path);
      return;
    }
    for (int t : s.targets) {
      if (out.size() >= cap) return;
      std::vector<Cell> next = stack;
      std::size_t npos = pos;
      apply(next, npos, s, t);
      path.push_back(s.kind);
      branch_walk(next, npos, w, path, out, cap);
      path.pop_back();
    }
  }

  FloydAutomaton a_;
  std::map<std::string, int> state_index_;
  std::vector<std::vector<int>> push_;   // state * symbol_count + symbol
  std::vector<std::vector<int>> flush_;  // top * state_count + context
  std::set<int> final_;
  std::vector<int> initial_;
};

/// Convenience wrappers compiling a runner per call.
inline bool accepts(const FloydAutomaton& a, const std::vector<std::string>& word) {
  return AutomatonRunner(a).accepts(word);
}
inline Trace trace(const FloydAutomaton& a, const std::vector<std::string>& word) {
  return AutomatonRunner(a).trace(word);
}

/// Parses the machine text format:
///   states: q0 q1
///   initial: q0
///   final: q0
///   matrix:
///   a < b
///   push:
///   q0 a q1
///   flush:
///   q1 q0 q0
/// `//` comments are stripped. Sections may come in any order; the token
/// lists of states/initial/final may continue on following lines. Terminals
/// are collected in first-occurrence order over matrix entries (delimiter
/// excluded) and then push lines. Conflicting matrix lines raise one
/// ConflictError citing every offending pair.
inline FloydAutomaton parse_automaton(const std::string& text) {
  enum class Section { None, States, Initial, Final, Matrix, Push, Flush };
  struct Item {
    int line;
    std::vector<std::string> tokens;
  };
  std::map<Section, std::vector<Item>> items;
  Section cur = Section::None;
  {
    std::istringstream is(text);
    std::string raw;
    int number = 0;
    while (std::getline(is, raw)) {
      ++number;
      auto toks = detail::split_tokens(detail::strip_comment(raw));
      if (toks.empty()) continue;
      std::size_t k = 0;
      if (toks[0] == "states:") cur = Section::States, k = 1;
      else if (toks[0] == "initial:") cur = Section::Initial, k = 1;
      else if (toks[0] == "final:") cur = Section::Final, k = 1;
      else if (toks[0] == "matrix:") cur = Section::Matrix, k = 1;
      else if (toks[0] == "push:") cur = Section::Push, k = 1;
      else if (toks[0] == "flush:") cur = Section::Flush, k = 1;
      if (cur == Section::None)
        throw AutomatonError(number, "expected a section header such as `states:`");
      if (k < toks.size())
        items[cur].push_back({number, {toks.begin() + static_cast<long>(k), toks.end()}});
    }
  }

  auto flat = [&](Section s) {
    std::vector<std::string> out;
    for (const auto& it : items[s])
      for (const auto& t : it.tokens) out.push_back(t);
    return out;
  };

  auto dedupe = [](std::vector<std::string> xs) {
    std::vector<std::string> out;
    for (auto& x : xs)
      if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(std::move(x));
    return out;
  };

  FloydAutomaton a;
  a.states = flat(Section::States);
  a.initial = dedupe(flat(Section::Initial));
  a.finals = dedupe(flat(Section::Final));
  for (const auto& q : a.states)
    if (q == kDelimiter)
      throw AutomatonError(0, "the delimiter # cannot be a state name");

  // Collect terminals in first-occurrence order, then fill the matrix with
  // exhaustive conflict reporting.
  std::vector<std::string> terminals;
  std::set<std::string> seen;
  auto note = [&](const std::string& t) {
    if (t != kDelimiter && seen.insert(t).second) terminals.push_back(t);
  };
  struct MatrixLine {
    int line;
    std::string left, right;
    PrecRel rel;
  };
  std::vector<MatrixLine> mlines;
  for (const auto& it : items[Section::Matrix]) {
    if (it.tokens.size() != 3)
      throw AutomatonError(it.line, "expected `<symbol> <relation> <symbol>`");
    auto rel = prec_rel_from_token(it.tokens[1]);
    if (!rel)
      throw AutomatonError(it.line, "unknown relation token: " + it.tokens[1]);
    note(it.tokens[0]);
    note(it.tokens[2]);
    mlines.push_back({it.line, it.tokens[0], it.tokens[2], *rel});
  }
  for (const auto& it : items[Section::Push]) {
    if (it.tokens.size() != 3)
      throw AutomatonError(it.line, "expected `<state> <terminal> <state>`");
    if (it.tokens[1] == kDelimiter)
      throw AutomatonError(it.line, "the delimiter # cannot be pushed");
    note(it.tokens[1]);
    a.pushes.push_back({it.tokens[0], it.tokens[1], it.tokens[2]});
  }
  for (const auto& it : items[Section::Flush]) {
    if (it.tokens.size() != 3)
      throw AutomatonError(it.line, "expected `<state> <state> <state>`");
    a.flushes.push_back({it.tokens[0], it.tokens[1], it.tokens[2]});
  }

  PrecedenceAlphabet alpha(terminals);
  {
    std::map<std::pair<int, int>, std::vector<std::pair<PrecRel, std::string>>> cells;
    for (const auto& ml : mlines) {
      auto& cands = cells[{alpha.symbol_index(ml.left), alpha.symbol_index(ml.right)}];
      bool dup = false;
      for (const auto& [r, _] : cands) dup = dup || r == ml.rel;
      if (!dup) cands.emplace_back(ml.rel, "line " + std::to_string(ml.line));
    }
    std::vector<PrecConflict> conflicts;
    for (const auto& [k, cands] : cells)
      if (cands.size() > 1)
        conflicts.push_back(PrecConflict{alpha.symbol_name(k.first),
                                         alpha.symbol_name(k.second), cands});
    if (!conflicts.empty()) throw ConflictError(std::move(conflicts));
    for (const auto& [k, cands] : cells)
      alpha.set_relation(alpha.symbol_name(k.first), cands.front().first,
                         alpha.symbol_name(k.second));
  }
  a.alphabet = std::move(alpha);
  validate_automaton(a);
  return a;
}

/// Writes the machine back in the text format in canonical section order.
/// parse_automaton(serialize_automaton(a)) reproduces a machine parsed from
/// text; programmatically built machines round-trip when their terminal
/// declaration order matches first occurrence in the matrix.
inline std::string serialize_automaton(const FloydAutomaton& a) {
  std::ostringstream os;
  auto list = [&](const char* head, const std::vector<std::string>& xs) {
    os << head;
    for (const auto& x : xs) os << ' ' << x;
    os << '\n';
  };
  list("states:", a.states);
  list("initial:", a.initial);
  list("final:", a.finals);
  os << "matrix:\n" << format_matrix(a.alphabet);
  os << "push:\n";
  for (const auto& e : a.pushes) os << e.from << ' ' << e.terminal << ' ' << e.to << '\n';
  os << "flush:\n";
  for (const auto& e : a.flushes)
    os << e.top << ' ' << e.context << ' ' << e.to << '\n';
  return os.str();
}

}  // namespace floyd
