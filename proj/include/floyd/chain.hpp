// Chains between two border symbols: the nesting structure a precedence
// matrix imposes on a word, and a structural parser recovering it.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "floyd/prec.hpp"

namespace floyd {

/// Parse tree of a chain between two borders. A tree with borders (a0, b),
/// spine a1..an and children x0..xn represents the word x0 a1 x1 ... an xn,
/// where a0 yields a1, consecutive spine symbols are in Equals, an takes b,
/// and each child xi is either empty or itself a chain between (ai, ai+1).
struct ChainTree {
  std::string left_border;
  std::string right_border;
  std::vector<std::string> spine;                          // nonempty
  std::vector<std::shared_ptr<const ChainTree>> children;  // size spine.size()+1, null = empty

  /// The word spanned by the tree: x0 a1 x1 a2 ... an xn.
  std::vector<std::string> frontier() const {
    std::vector<std::string> out;
    append_frontier(out);
    return out;
  }

  void append_frontier(std::vector<std::string>& out) const {
    for (std::size_t i = 0; i < spine.size(); ++i) {
      if (children[i]) children[i]->append_frontier(out);
      out.push_back(spine[i]);
    }
    if (children.back()) children.back()->append_frontier(out);
  }

  bool operator==(const ChainTree& o) const {
    if (left_border != o.left_border || right_border != o.right_border ||
        spine != o.spine || children.size() != o.children.size())
      return false;
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (static_cast<bool>(children[i]) != static_cast<bool>(o.children[i])) return false;
      if (children[i] && !(*children[i] == *o.children[i])) return false;
    }
    return true;
  }

  /// Compact single-line rendering, e.g. `#[ a a[ b rb ]ra ra ]#`.
  std::string to_string() const {
    std::string s = left_border + "[";
    for (std::size_t i = 0; i < spine.size(); ++i) {
      if (children[i]) s += " " + children[i]->to_string();
      s += " " + spine[i];
    }
    if (children.back()) s += " " + children.back()->to_string();
    s += " ]" + right_border;
    return s;
  }
};

/// Outcome of parse_chain. On failure, `position` is 1-based into the word
/// (0 = the border pair itself, word-length + 1 = while closing at the right
/// border) and `reason` says which relation was missing or why the word does
/// not reduce to a single chain.
struct ChainParse {
  std::optional<ChainTree> tree;
  std::size_t position = 0;
  std::string reason;

  bool ok() const { return tree.has_value(); }
};

/// Decides whether `word` is a chain between borders a0 and b over `alpha`,
/// and builds the tree if so. Runs the structural (state-free) shift/reduce
/// discipline: Yields marks, Equals pushes, Takes reduces the topmost marked
/// group into a child tree. Borders may be terminals or the delimiter.
inline ChainParse parse_chain(const PrecedenceAlphabet& alpha, const std::string& a0,
                              const std::vector<std::string>& word, const std::string& b) {
  ChainParse fail;
  auto fail_at = [&](std::size_t pos, std::string reason) {
    ChainParse r;
    r.position = pos;
    r.reason = std::move(reason);
    return r;
  };

  if (!alpha.is_symbol(a0)) throw UnknownTokenError(a0);
  if (!alpha.is_symbol(b)) throw UnknownTokenError(b);
  for (const auto& t : word)
    if (!alpha.has_terminal(t)) throw UnknownTokenError(t);

  if (!alpha.relation(a0, b))
    return fail_at(0, "no relation between the borders " + a0 + " and " + b);
  if (word.empty()) return fail_at(0, "the empty word is not a chain");

  struct Entry {
    std::string symbol;
    bool marked;
    std::shared_ptr<const ChainTree> left;  // completed chain immediately to the left
  };
  std::vector<Entry> stack{{a0, false, nullptr}};
  std::shared_ptr<const ChainTree> pending;  // completed chain since the last shift
  std::size_t pos = 0;                       // tokens consumed

  while (true) {
    const std::string& look = pos < word.size() ? word[pos] : b;
    std::size_t report_pos = pos + 1;  // 1-based; word.size()+1 once at the border
    auto rel = alpha.relation(stack.back().symbol, look);
    if (!rel)
      return fail_at(report_pos, "no relation between " + stack.back().symbol +
                                     " and " + look);
    if (*rel == PrecRel::Takes) {
      // Reduce the topmost marked group into a chain.
      std::size_t i = stack.size();
      while (i > 1 && !stack[i - 1].marked) --i;
      if (i == 1)
        return fail_at(report_pos, "reduction with no marked symbol on the stack");
      ChainTree t;
      t.spine.reserve(stack.size() - i + 1);
      for (std::size_t k = i - 1; k < stack.size(); ++k) {
        t.spine.push_back(stack[k].symbol);
        t.children.push_back(stack[k].left);
      }
      t.children.push_back(pending);
      t.left_border = stack[i - 2].symbol;
      t.right_border = look;
      stack.resize(i - 1);
      pending = std::make_shared<const ChainTree>(std::move(t));
      if (stack.size() == 1 && pos == word.size()) {
        ChainParse okr;
        okr.tree = *pending;
        return okr;
      }
      continue;  // the lookahead is not consumed by a reduction
    }
    // Yields marks, Equals pushes unmarked; both shift the lookahead.
    if (pos == word.size())
      return fail_at(report_pos,
                     "word does not reduce to a single chain before the right border");
    stack.push_back({look, *rel == PrecRel::Yields, pending});
    pending = nullptr;
    ++pos;
  }
}

}  // namespace floyd
