// Precedence relations and conflict-free precedence matrices over a terminal
// alphabet extended with the delimiter token "#".
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace floyd {

/// Reserved delimiter token: stack bottom and input terminator.
inline const std::string kDelimiter = "#";

namespace detail {

/// Whitespace tokenization shared by the text formats.
inline std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream is(line);
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

/// Drops everything from the first `//` on.
inline std::string strip_comment(const std::string& line) {
  auto pos = line.find("//");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace detail

/// The three precedence relations between adjacent terminals.
/// Yields is written `<`, Equals `=`, Takes `>` in the text formats.
enum class PrecRel { Yields, Equals, Takes };

inline char prec_rel_char(PrecRel r) {
  switch (r) {
    case PrecRel::Yields: return '<';
    case PrecRel::Equals: return '=';
    case PrecRel::Takes: return '>';
  }
  return '?';
}

inline std::optional<PrecRel> prec_rel_from_token(const std::string& tok) {
  if (tok == "<") return PrecRel::Yields;
  if (tok == "=") return PrecRel::Equals;
  if (tok == ">") return PrecRel::Takes;
  return std::nullopt;
}

/// One matrix cell: left rel right.
struct PrecEntry {
  std::string left;
  PrecRel rel;
  std::string right;

  bool operator==(const PrecEntry& o) const {
    return left == o.left && rel == o.rel && right == o.right;
  }
};

/// A cell that was assigned more than one distinct relation, with a short
/// note per relation saying which rule or convention induced it.
struct PrecConflict {
  std::string left;
  std::string right;
  std::vector<std::pair<PrecRel, std::string>> candidates;
};

class UnknownTokenError : public std::runtime_error {
 public:
  explicit UnknownTokenError(const std::string& token)
      : std::runtime_error("unknown token: " + token), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

class ConflictError : public std::runtime_error {
 public:
  explicit ConflictError(std::vector<PrecConflict> conflicts)
      : std::runtime_error(describe(conflicts)), conflicts_(std::move(conflicts)) {}
  const std::vector<PrecConflict>& conflicts() const { return conflicts_; }

 private:
  static std::string describe(const std::vector<PrecConflict>& cs) {
    std::ostringstream os;
    os << "precedence conflicts on " << cs.size() << " pair(s):";
    for (const auto& c : cs) {
      os << "\n  (" << c.left << ", " << c.right << "):";
      for (const auto& [rel, why] : c.candidates)
        os << " '" << prec_rel_char(rel) << "' [" << why << "]";
    }
    return os.str();
  }

  std::vector<PrecConflict> conflicts_;
};

/// A conflict-free precedence matrix over a fixed terminal list plus "#".
/// Terminals keep their declaration order; at most one relation is stored per
/// ordered symbol pair, and cells may be empty.
class PrecedenceAlphabet {
 public:
  PrecedenceAlphabet() : PrecedenceAlphabet(std::vector<std::string>{}) {}

  explicit PrecedenceAlphabet(std::vector<std::string> terminals)
      : terminals_(std::move(terminals)) {
    for (std::size_t i = 0; i < terminals_.size(); ++i) {
      if (terminals_[i] == kDelimiter)
        throw std::invalid_argument("the delimiter # cannot be declared as a terminal");
      if (!index_.emplace(terminals_[i], static_cast<int>(i)).second)
        throw std::invalid_argument("duplicate terminal: " + terminals_[i]);
    }
    cells_.assign((terminals_.size() + 1) * (terminals_.size() + 1), std::nullopt);
  }

  const std::vector<std::string>& terminals() const { return terminals_; }

  bool has_terminal(const std::string& t) const { return index_.count(t) > 0; }

  /// True for declared terminals and for "#".
  bool is_symbol(const std::string& t) const {
    return t == kDelimiter || has_terminal(t);
  }

  /// Index of a terminal in declaration order; the delimiter gets the last
  /// index. Throws UnknownTokenError for anything else.
  int symbol_index(const std::string& t) const {
    if (t == kDelimiter) return static_cast<int>(terminals_.size());
    auto it = index_.find(t);
    if (it == index_.end()) throw UnknownTokenError(t);
    return it->second;
  }

  /// Number of symbols including the delimiter.
  int symbol_count() const { return static_cast<int>(terminals_.size()) + 1; }

  const std::string& symbol_name(int idx) const {
    if (idx == static_cast<int>(terminals_.size())) return kDelimiter;
    return terminals_.at(idx);
  }

  std::optional<PrecRel> relation(const std::string& a, const std::string& b) const {
    return relation_by_index(symbol_index(a), symbol_index(b));
  }

  std::optional<PrecRel> relation_by_index(int a, int b) const {
    return cells_.at(static_cast<std::size_t>(a) * symbol_count() + b);
  }

  /// Sets a single cell. Setting the same relation twice is idempotent;
  /// setting a different one throws ConflictError for that pair.
  void set_relation(const std::string& a, PrecRel rel, const std::string& b) {
    int ia = symbol_index(a), ib = symbol_index(b);
    auto& cell = cells_[static_cast<std::size_t>(ia) * symbol_count() + ib];
    if (cell && *cell != rel) {
      throw ConflictError({PrecConflict{
          a, b, {{*cell, "already set"}, {rel, "new entry"}}}});
    }
    cell = rel;
  }

  /// All filled cells in row-major order (terminal declaration order, then #).
  std::vector<PrecEntry> entries() const {
    std::vector<PrecEntry> out;
    int n = symbol_count();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (auto r = relation_by_index(i, j))
          out.push_back({symbol_name(i), *r, symbol_name(j)});
    return out;
  }

  std::size_t entry_count() const {
    std::size_t k = 0;
    for (const auto& c : cells_)
      if (c) ++k;
    return k;
  }

  bool operator==(const PrecedenceAlphabet& o) const {
    return terminals_ == o.terminals_ && cells_ == o.cells_;
  }

 private:
  std::vector<std::string> terminals_;
  std::map<std::string, int> index_;
  std::vector<std::optional<PrecRel>> cells_;
};

/// Builds an alphabet from an entry list. Undeclared tokens raise
/// UnknownTokenError; pairs assigned distinct relations are collected
/// exhaustively and raised together as one ConflictError. Duplicate entries
/// with the same relation are idempotent. An empty entry list is valid.
inline PrecedenceAlphabet build_alphabet(std::vector<std::string> terminals,
                                         const std::vector<PrecEntry>& entries) {
  PrecedenceAlphabet alpha(std::move(terminals));
  // Accumulate first, so every conflicting pair is reported, not just the first.
  std::map<std::pair<int, int>, std::vector<std::pair<PrecRel, std::string>>> cells;
  for (const auto& e : entries) {
    int ia = alpha.symbol_index(e.left), ib = alpha.symbol_index(e.right);
    auto& cands = cells[{ia, ib}];
    bool dup = false;
    for (const auto& [rel, _] : cands) dup = dup || rel == e.rel;
    if (!dup) cands.emplace_back(e.rel, "entry list");
  }
  std::vector<PrecConflict> conflicts;
  for (const auto& [key, cands] : cells) {
    if (cands.size() > 1)
      conflicts.push_back(PrecConflict{alpha.symbol_name(key.first),
                                       alpha.symbol_name(key.second), cands});
  }
  if (!conflicts.empty()) throw ConflictError(std::move(conflicts));
  for (const auto& [key, cands] : cells)
    alpha.set_relation(alpha.symbol_name(key.first), cands.front().first,
                       alpha.symbol_name(key.second));
  return alpha;
}

/// Result of the Equals-cycle analysis over the terminal-only Equals graph
/// (the delimiter is excluded). When acyclic, longest_chain is the maximum
/// number of nodes on any Equals path (1 for a nonempty alphabet with no
/// Equals edges, 0 for an empty terminal list). When cyclic, `cycle` holds a
/// witness t1 = t2 = ... = tk = t1 (the closing repetition is implied).
struct EqCycleCheck {
  bool ok = true;
  int longest_chain = 0;
  std::vector<std::string> cycle;
};

inline EqCycleCheck eq_cycle_check(const PrecedenceAlphabet& alpha) {
  int n = static_cast<int>(alpha.terminals().size());
  std::vector<std::vector<int>> succ(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (alpha.relation_by_index(i, j) == PrecRel::Equals) succ[i].push_back(j);

  // Iterative coloring DFS: detect a back edge and reconstruct the cycle.
  std::vector<int> color(n, 0);  // 0 white, 1 on stack, 2 done
  std::vector<int> parent(n, -1);
  for (int root = 0; root < n; ++root) {
    if (color[root] != 0) continue;
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < succ[v].size()) {
        int w = succ[v][next++];
        if (color[w] == 1) {
          EqCycleCheck res;
          res.ok = false;
          std::vector<std::string> cyc{alpha.terminals()[w]};
          for (int u = v; u != w; u = parent[u]) cyc.push_back(alpha.terminals()[u]);
          std::reverse(cyc.begin() + 1, cyc.end());
          res.cycle = std::move(cyc);
          return res;
        }
        if (color[w] == 0) {
          color[w] = 1;
          parent[w] = v;
          stack.emplace_back(w, 0);
        }
      } else {
        color[v] = 2;
        stack.pop_back();
      }
    }
  }

  // Acyclic: longest path by node count, via memoized depth.
  EqCycleCheck res;
  res.ok = true;
  std::vector<int> depth(n, 0);
  std::vector<int> order;  // reverse-finish order gives a topological order
  std::fill(color.begin(), color.end(), 0);
  for (int root = 0; root < n; ++root) {
    if (color[root] != 0) continue;
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < succ[v].size()) {
        int w = succ[v][next++];
        if (color[w] == 0) {
          color[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  for (int v : order) {  // successors of v always finish before v
    depth[v] = 1;
    for (int w : succ[v]) depth[v] = std::max(depth[v], depth[w] + 1);
  }
  for (int v = 0; v < n; ++v) res.longest_chain = std::max(res.longest_chain, depth[v]);
  return res;
}

class EqCycleError : public std::runtime_error {
 public:
  explicit EqCycleError(const std::vector<std::string>& cycle)
      : std::runtime_error(describe(cycle)), cycle_(cycle) {}
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  static std::string describe(const std::vector<std::string>& cycle) {
    std::string s = "Equals-cycle in precedence matrix:";
    for (const auto& t : cycle) s += " " + t + " =";
    s += " " + (cycle.empty() ? std::string("?") : cycle.front());
    return s;
  }
  std::vector<std::string> cycle_;
};

/// Throws EqCycleError unless the alphabet's Equals graph is acyclic.
/// Returns the longest-chain length c on success.
inline int require_eq_acyclic(const PrecedenceAlphabet& alpha) {
  EqCycleCheck chk = eq_cycle_check(alpha);
  if (!chk.ok) throw EqCycleError(chk.cycle);
  return chk.longest_chain;
}

/// Renders the filled cells in the `<left> <rel> <right>` line format,
/// row-major in declaration order with the delimiter last.
inline std::string format_matrix(const PrecedenceAlphabet& alpha) {
  std::string out;
  for (const auto& e : alpha.entries()) {
    out += e.left;
    out += ' ';
    out += prec_rel_char(e.rel);
    out += ' ';
    out += e.right;
    out += '\n';
  }
  return out;
}

}  // namespace floyd
