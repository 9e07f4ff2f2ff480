// Brute-force cross-checking: exhaustive short-word enumeration, agreement
// reports between two membership predicates, and seeded random machines for
// differential testing.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "floyd/automaton.hpp"

namespace floyd {

/// All words up to max_len, shortest first, ties in lexicographic order of
/// terminal declaration indices; the empty word comes first.
inline std::vector<std::vector<std::string>> enumerate_words(
    const std::vector<std::string>& terminals, std::size_t max_len) {
  std::vector<std::vector<std::string>> out{{}};
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t level_end = out.size();
    if (terminals.empty()) break;
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (const auto& t : terminals) {
        auto w = out[i];
        w.push_back(t);
        out.push_back(std::move(w));
      }
    level_begin = level_end;
  }
  return out;
}

inline std::string format_word(const std::vector<std::string>& w) {
  if (w.empty()) return "_";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) s += ' ';
    s += w[i];
  }
  return s;
}

struct Disagreement {
  std::vector<std::string> word;
  bool left;
  bool right;
};

struct AgreementReport {
  std::size_t words_checked = 0;
  std::vector<Disagreement> disagreements;

  bool agree() const { return disagreements.empty(); }

  std::string to_text() const {
    std::string s;
    for (const auto& d : disagreements)
      s += format_word(d.word) + " left=" + (d.left ? "true" : "false") +
           " right=" + (d.right ? "true" : "false") + "\n";
    return s;
  }
};

using MembershipFn = std::function<bool(const std::vector<std::string>&)>;

/// Runs both predicates over every word up to max_len and records where they
/// differ.
inline AgreementReport language_agree(const MembershipFn& left, const MembershipFn& right,
                                      const std::vector<std::string>& terminals,
                                      std::size_t max_len) {
  AgreementReport rep;
  for (const auto& w : enumerate_words(terminals, max_len)) {
    bool l = left(w), r = right(w);
    ++rep.words_checked;
    if (l != r) rep.disagreements.push_back({w, l, r});
  }
  return rep;
}

/// Seeded random machine over the given terminals: a random conflict-free
/// matrix without Equals cycles (always containing # = #), one to max_states
/// states, a nonempty initial set, and sparse random push/flush images.
/// Sparse sprinkling alone almost always yields an empty language, so the
/// generator also threads a couple of structurally completable words through
/// the machine, adding the missing edges along one run and making its end
/// state final; most machines therefore accept something nontrivial.
/// Densities are kept low on purpose: the subset construction closes flush
/// successors over all ordered pairs of discovered states, and dense images
/// make that closure balloon far past what sweep-style tests can afford.
/// Identical seeds give identical machines across platforms, so the
/// generator avoids distribution adapters and uses plain modulo draws.
inline FloydAutomaton random_automaton(std::uint64_t seed, std::size_t max_states,
                                       const std::vector<std::string>& terminals) {
  std::mt19937_64 gen(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(gen() % n); };

  FloydAutomaton a;
  std::size_t ns = 1 + pick(max_states);
  for (std::size_t i = 0; i < ns; ++i) a.states.push_back("q" + std::to_string(i));

  const int nsym = static_cast<int>(terminals.size()) + 1;
  const int hash = nsym - 1;
  const PrecRel rels[3] = {PrecRel::Yields, PrecRel::Equals, PrecRel::Takes};
  for (int attempt = 0;; ++attempt) {
    PrecedenceAlphabet alpha(terminals);
    for (int i = 0; i < nsym; ++i)
      for (int j = 0; j < nsym; ++j) {
        if (i == hash && j == hash) continue;
        std::optional<PrecRel> rel;
        if (i == hash) {
          // Entry cells: Yields is the only relation that lets a word start,
          // so favor it; Equals here shifts a never-poppable cell (kept as a
          // rare dead-path case) and Takes would flush under the bottom.
          std::size_t c = pick(8);
          rel = c < 2 ? std::nullopt
                      : c < 7 ? std::make_optional(PrecRel::Yields)
                              : std::make_optional(PrecRel::Equals);
        } else if (j == hash) {
          // Exit cells: Takes is the only relation that lets a word finish.
          std::size_t c = pick(8);
          rel = c < 2 ? std::nullopt
                      : c < 7 ? std::make_optional(PrecRel::Takes)
                              : std::make_optional(PrecRel::Yields);
        } else {
          std::size_t c = pick(4);  // 0 empty, else one of the three relations
          if (c > 0) rel = rels[c - 1];
        }
        if (rel) alpha.set_relation(alpha.symbol_name(i), *rel, alpha.symbol_name(j));
      }
    // Delimiter convention: the empty input is always a well-formed pair.
    alpha.set_relation(kDelimiter, PrecRel::Equals, kDelimiter);
    if (eq_cycle_check(alpha).ok) {
      a.alphabet = std::move(alpha);
      break;
    }
    if (attempt >= 31) {
      // Give up on resampling: strip the terminal Equals cells entirely.
      PrecedenceAlphabet bare(terminals);
      for (const auto& e : alpha.entries())
        if (e.rel != PrecRel::Equals || e.left == kDelimiter || e.right == kDelimiter)
          bare.set_relation(e.left, e.rel, e.right);
      bare.set_relation(kDelimiter, PrecRel::Equals, kDelimiter);
      a.alphabet = std::move(bare);
      break;
    }
  }

  for (const auto& q : a.states)
    if (pick(2) == 0) a.initial.push_back(q);
  if (a.initial.empty()) a.initial.push_back(a.states[pick(ns)]);
  for (const auto& q : a.states)
    if (pick(2) == 0) a.finals.push_back(q);

  std::set<std::pair<std::string, std::string>> push_slots;   // (from, terminal)
  std::set<std::pair<std::string, std::string>> flush_slots;  // (top, context)
  auto add_push = [&](const std::string& q, const std::string& t, const std::string& to) {
    if (std::find(a.pushes.begin(), a.pushes.end(), PushEdge{q, t, to}) == a.pushes.end())
      a.pushes.push_back({q, t, to});
    push_slots.insert({q, t});
  };
  auto add_flush = [&](const std::string& r, const std::string& c, const std::string& to) {
    if (std::find(a.flushes.begin(), a.flushes.end(), FlushEdge{r, c, to}) ==
        a.flushes.end())
      a.flushes.push_back({r, c, to});
    flush_slots.insert({r, c});
  };

  // Background sprinkle: mostly empty slots, single targets, a rare second
  // target so image-level nondeterminism still occurs.
  for (const auto& q : a.states)
    for (const auto& t : terminals) {
      std::size_t roll = pick(16);  // 0..10 none, 11..14 one draw, 15 two draws
      std::size_t k = roll < 11 ? 0 : roll == 15 ? 2 : 1;
      for (std::size_t x = 0; x < k; ++x) add_push(q, t, a.states[pick(ns)]);
    }
  for (const auto& top : a.states)
    for (const auto& ctx : a.states) {
      std::size_t roll = pick(16);  // 0..12 none, 13..14 one draw, 15 two draws
      std::size_t k = roll < 13 ? 0 : roll == 15 ? 2 : 1;
      for (std::size_t x = 0; x < k; ++x) add_flush(top, ctx, a.states[pick(ns)]);
    }

  // Thread up to two structurally completable words through the machine:
  // follow existing edges where a slot is already filled, invent targets for
  // empty slots, and make the final bottom state accepting. The walk mirrors
  // the runner's semantics (halt check first, Yields marks, Equals pushes,
  // Takes flushes down to the topmost marked entry).
  auto first_push_target = [&](const std::string& q, const std::string& t)
      -> const std::string* {
    for (const auto& e : a.pushes)
      if (e.from == q && e.terminal == t) return &e.to;
    return nullptr;
  };
  auto first_flush_target = [&](const std::string& r, const std::string& c)
      -> const std::string* {
    for (const auto& e : a.flushes)
      if (e.top == r && e.context == c) return &e.to;
    return nullptr;
  };
  auto thread_word = [&](const std::vector<std::string>& w) {
    struct Cell {
      std::string symbol;
      bool marked;
      std::string state;
    };
    std::vector<Cell> stack{{kDelimiter, false, a.initial[pick(a.initial.size())]}};
    std::size_t pos = 0;
    for (std::size_t guard = 0; guard < 4 * w.size() + 4; ++guard) {
      if (pos == w.size() && stack.size() == 1) {
        if (std::find(a.finals.begin(), a.finals.end(), stack[0].state) ==
            a.finals.end())
          a.finals.push_back(stack[0].state);
        return;
      }
      const std::string look = pos < w.size() ? w[pos] : kDelimiter;
      auto rel = a.alphabet.relation(stack.back().symbol, look);
      if (!rel) return;  // structurally dead; keep whatever edges were added
      if (*rel == PrecRel::Takes) {
        std::size_t i = stack.size();
        while (i > 1 && !stack[i - 1].marked) --i;
        if (i == 1) return;
        const std::string top = stack.back().state;
        const std::string ctx = stack[i - 2].state;
        const std::string* to = first_flush_target(top, ctx);
        std::string target = to ? *to : a.states[pick(ns)];
        if (!to) add_flush(top, ctx, target);
        stack.resize(i - 1);
        stack.back().state = target;
      } else {
        if (pos == w.size()) return;
        const std::string from = stack.back().state;
        const std::string* to = first_push_target(from, look);
        std::string target = to ? *to : a.states[pick(ns)];
        if (!to) add_push(from, look, target);
        stack.push_back({look, *rel == PrecRel::Yields, target});
        ++pos;
      }
    }
  };
  std::vector<std::vector<std::string>> completable;
  for (const auto& w : enumerate_words(terminals, 4))
    if (!w.empty() && structural_run(a.alphabet, w).completed)
      completable.push_back(w);
  if (!completable.empty()) thread_word(completable[pick(completable.size())]);
  return a;
}

}  // namespace floyd
