// Translations between operator grammars and precedence-driven stack
// machines, in both directions, preserving the language.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "floyd/automaton.hpp"
#include "floyd/grammar.hpp"

namespace floyd {

namespace detail {

/// Rule-indexed view of a grammar: every rule becomes its own "variant"
/// nonterminal named base + 1-based ordinal among that base's rules.
struct RuleIndex {
  const Grammar* g;
  std::vector<std::string> names;                     // per global rule index
  std::map<std::string, std::vector<int>> variants;   // base -> rule indices

  explicit RuleIndex(const Grammar& gr) : g(&gr) {
    std::map<std::string, int> counter;
    for (std::size_t i = 0; i < gr.rules.size(); ++i) {
      int ord = ++counter[gr.rules[i].lhs];
      names.push_back(gr.rules[i].lhs + std::to_string(ord));
      variants[gr.rules[i].lhs].push_back(static_cast<int>(i));
    }
    std::set<std::string> uniq(names.begin(), names.end());
    if (uniq.size() != names.size())
      throw GrammarError(GrammarError::Kind::Validation, 0,
                         "rule variant names collide; rename nonterminals whose "
                         "names end in digits");
  }
};

}  // namespace detail

/// Builds a machine accepting exactly the grammar's language. The grammar
/// must pass validate_fischer_shape and have a conflict-free matrix. States
/// are pairs (context rule variant, completed rule variant or none), named
/// like `(S1,_)` and `(T2,T2)`; runs track which rule is being read and which
/// subtree was just finished.
inline FloydAutomaton grammar_to_automaton(const Grammar& g) {
  validate_grammar(g);
  {
    auto issues = validate_fischer_shape(g);
    if (!issues.empty()) {
      std::string msg = "grammar is not in the shape this construction needs:";
      for (const auto& i : issues) msg += "\n  " + i.detail;
      throw GrammarError(GrammarError::Kind::Validation, 0, msg);
    }
  }
  PrecedenceAlphabet alpha = compute_opm(g);
  detail::RuleIndex rx(g);
  const int R = static_cast<int>(g.rules.size());

  // starts_with[B]: rules whose body begins with nonterminal B.
  // after_terminal[B]: rules whose body contains a terminal followed by B.
  std::map<std::string, std::vector<int>> starts_with, after_terminal;
  for (int i = 0; i < R; ++i) {
    const auto& rhs = g.rules[i].rhs;
    if (!rhs.empty() && g.is_nonterminal(rhs.front()))
      starts_with[rhs.front()].push_back(i);
    for (std::size_t k = 1; k < rhs.size(); ++k)
      if (g.is_nonterminal(rhs[k]) && g.is_terminal(rhs[k - 1]))
        after_terminal[rhs[k]].push_back(i);
  }

  // Spine closure of a rule: itself, plus every rule whose body begins with
  // the head of anything already in the closure, transitively. These are the
  // rules that may sit above X with no terminal read between their starts.
  auto spine_closure = [&](int x) {
    std::vector<int> out{x};
    std::set<int> seen{x};
    for (std::size_t k = 0; k < out.size(); ++k)
      for (int d : starts_with[g.rules[out[k]].lhs])
        if (seen.insert(d).second) out.push_back(d);
    return out;
  };

  // Contexts that can be on the stack cell below when the first terminal of
  // rule x is read: rules of the axiom in the closure (the cell is the stack
  // bottom), and rules holding a terminal directly before a closure head (the
  // cell is that terminal).
  auto outer_contexts = [&](int x) {
    std::set<int> ys;
    for (int c : spine_closure(x)) {
      if (g.rules[c].lhs == g.axiom) ys.insert(c);
      for (int y : after_terminal[g.rules[c].lhs]) ys.insert(y);
    }
    return ys;
  };

  // States are (context rule, completed rule or -1).
  std::set<std::pair<int, int>> state_set;
  auto state_name = [&](int ctx, int done) {
    return "(" + rx.names[ctx] + "," + (done < 0 ? "_" : rx.names[done]) + ")";
  };
  std::set<std::tuple<int, int, int, int, int>> push_edges;  // ctx,done,term,tctx,tdone
  std::set<std::tuple<int, int, int, int, int, int>> flush_edges;
  auto add_push = [&](int ctx, int done, const std::string& t, int tctx, int tdone) {
    state_set.insert({ctx, done});
    state_set.insert({tctx, tdone});
    push_edges.insert({ctx, done, alpha.symbol_index(t), tctx, tdone});
  };
  auto add_flush = [&](int tc, int td, int cc, int cd, int rc, int rd) {
    state_set.insert({tc, td});
    state_set.insert({cc, cd});
    state_set.insert({rc, rd});
    flush_edges.insert({tc, td, cc, cd, rc, rd});
  };

  for (int x = 0; x < R; ++x) {
    const auto& rhs = g.rules[x].rhs;
    int first_term = -1;
    for (std::size_t j = 0; j < rhs.size(); ++j)
      if (g.is_terminal(rhs[j])) {
        first_term = static_cast<int>(j);
        break;
      }
    if (first_term < 0) continue;  // renamings and epsilon read no input

    for (std::size_t j = 0; j < rhs.size(); ++j) {
      if (!g.is_terminal(rhs[j])) continue;
      std::vector<int> zhats{-1};
      if (j > 0 && g.is_nonterminal(rhs[j - 1]))
        zhats = rx.variants.at(rhs[j - 1]);
      int tdone = j + 1 == rhs.size() ? x : -1;
      std::vector<int> contexts;
      if (static_cast<int>(j) != first_term) {
        contexts = {x};
      } else {
        auto ys = outer_contexts(x);
        contexts.assign(ys.begin(), ys.end());
      }
      for (int y : contexts)
        for (int z : zhats) add_push(y, z, rhs[j], x, tdone);
    }

    // Flushing rule x: the top cell holds (x, last completed), the cell below
    // holds (outer context, subtree completed before x's first terminal).
    std::vector<int> ells =
        g.is_nonterminal(rhs.back()) ? rx.variants.at(rhs.back()) : std::vector<int>{x};
    std::vector<int> ftildes = g.is_nonterminal(rhs.front())
                                   ? rx.variants.at(rhs.front())
                                   : std::vector<int>{-1};
    auto ys = outer_contexts(x);
    for (int l : ells)
      for (int y : ys)
        for (int f : ftildes) add_flush(x, l, y, f, y, x);
  }

  // Runs start on any axiom rule with nothing completed; they accept when an
  // axiom renaming saw its target finish, or on an axiom epsilon rule.
  std::vector<std::pair<int, int>> initial, finals;
  for (int i : rx.variants.at(g.axiom)) {
    initial.emplace_back(i, -1);
    state_set.insert({i, -1});
    const auto& rhs = g.rules[i].rhs;
    if (rhs.empty()) {
      finals.emplace_back(i, -1);
    } else if (rhs.size() == 1 && g.is_nonterminal(rhs[0])) {
      for (int j : rx.variants.at(rhs[0])) {
        finals.emplace_back(i, j);
        state_set.insert({i, j});
      }
    }
  }
  std::sort(finals.begin(), finals.end());

  FloydAutomaton out;
  out.alphabet = std::move(alpha);
  for (const auto& [c, d] : state_set) out.states.push_back(state_name(c, d));
  for (const auto& [c, d] : initial) out.initial.push_back(state_name(c, d));
  for (const auto& [c, d] : finals) out.finals.push_back(state_name(c, d));
  for (const auto& [c, d, t, tc, td] : push_edges)
    out.pushes.push_back(
        {state_name(c, d), out.alphabet.symbol_name(t), state_name(tc, td)});
  for (const auto& [tc, td, cc, cd, rc, rd] : flush_edges)
    out.flushes.push_back(
        {state_name(tc, td), state_name(cc, cd), state_name(rc, rd)});
  validate_automaton(out);
  return out;
}

/// Builds a grammar for a machine's language. Nonterminals are quadruples
/// [a,q,p,b]: the words read between a cell holding symbol a in state q and
/// the flush that rewrites that cell to state p with lookahead b. Bodies
/// follow the Equals-runs of the matrix, so every body has at most 2c+1
/// symbols where c is the longest Equals run. The result is trimmed.
inline Grammar automaton_to_grammar(const FloydAutomaton& a) {
  validate_automaton(a);
  require_eq_acyclic(a.alphabet);
  const int m = static_cast<int>(a.states.size());
  const int nsym = a.alphabet.symbol_count();
  const int nterm = nsym - 1;
  const int hash = nterm;

  std::map<std::string, int> sidx;
  for (int i = 0; i < m; ++i) sidx[a.states[i]] = i;
  std::vector<std::vector<int>> push(static_cast<std::size_t>(m) * nsym);
  std::vector<std::vector<int>> flush(static_cast<std::size_t>(m) * m);
  for (const auto& e : a.pushes)
    push[static_cast<std::size_t>(sidx.at(e.from)) * nsym +
         a.alphabet.symbol_index(e.terminal)]
        .push_back(sidx.at(e.to));
  for (const auto& e : a.flushes)
    flush[static_cast<std::size_t>(sidx.at(e.top)) * m + sidx.at(e.context)]
        .push_back(sidx.at(e.to));

  // All maximal-free Equals spines over terminals (acyclic, so finite).
  std::vector<std::vector<int>> spines;
  {
    std::vector<std::vector<int>> eq(nterm);
    for (int i = 0; i < nterm; ++i)
      for (int j = 0; j < nterm; ++j)
        if (a.alphabet.relation_by_index(i, j) == PrecRel::Equals) eq[i].push_back(j);
    std::vector<int> cur;
    auto grow = [&](auto&& self, int t) -> void {
      cur.push_back(t);
      spines.push_back(cur);
      for (int u : eq[t]) self(self, u);
      cur.pop_back();
    };
    for (int t = 0; t < nterm; ++t) grow(grow, t);
  }

  // Quads are interned on demand; rules are produced by saturation: a body
  // slot can hold an already-realized quad, fresh rules realize new quads.
  using Quad = std::tuple<int, int, int, int>;  // a, q, p, b
  std::set<Quad> realized;
  struct QuadRule {
    Quad lhs;
    std::vector<std::pair<bool, int>> body;  // (is_quad, terminal or quad id)
  };
  std::vector<Quad> quad_list;
  std::map<Quad, int> quad_id;
  auto intern_quad = [&](const Quad& q) {
    auto it = quad_id.find(q);
    if (it != quad_id.end()) return it->second;
    quad_list.push_back(q);
    quad_id.emplace(q, static_cast<int>(quad_list.size()) - 1);
    return static_cast<int>(quad_list.size()) - 1;
  };
  std::set<std::pair<int, std::vector<std::pair<bool, int>>>> rule_set;

  // children[a][t]: realized quads with borders (symbol a, symbol t), grouped
  // for slot lookup, refreshed each round.
  bool grew = true;
  while (grew) {
    grew = false;
    std::map<std::pair<int, int>, std::vector<Quad>> by_border;
    for (const auto& q : realized)
      by_border[{std::get<0>(q), std::get<3>(q)}].push_back(q);

    for (const auto& spine : spines) {
      int k = static_cast<int>(spine.size());
      for (int a0 = 0; a0 < nsym; ++a0) {
        if (a.alphabet.relation_by_index(a0, spine.front()) != PrecRel::Yields)
          continue;
        for (int a1 = 0; a1 < nsym; ++a1) {
          if (a.alphabet.relation_by_index(spine.back(), a1) != PrecRel::Takes)
            continue;
          if (!a.alphabet.relation_by_index(a0, a1)) continue;

          // Chain of slot choices: state after slot i, plus body so far.
          struct Partial {
            int q0;                                     // left state of the quad
            int after;                                  // state after slot i
            std::vector<std::pair<bool, int>> body;
          };
          std::vector<Partial> fronts;
          for (int q0 = 0; q0 < m; ++q0) fronts.push_back({q0, q0, {}});
          auto slot_it = by_border.find({a0, spine.front()});
          if (slot_it != by_border.end())
            for (const auto& ch : slot_it->second)
              fronts.push_back({std::get<1>(ch),
                                std::get<2>(ch),
                                {{true, intern_quad(ch)}}});

          for (int i = 0; i < k; ++i) {
            int t = spine[i];
            int right = i + 1 < k ? spine[i + 1] : a1;
            std::vector<Partial> next;
            for (const auto& f : fronts) {
              for (int qi : push[static_cast<std::size_t>(f.after) * nsym + t]) {
                Partial base = f;
                base.body.emplace_back(false, t);
                Partial eps = base;
                eps.after = qi;
                next.push_back(std::move(eps));
                auto it2 = by_border.find({t, right});
                if (it2 == by_border.end()) continue;
                for (const auto& ch : it2->second) {
                  if (std::get<1>(ch) != qi) continue;
                  Partial with = base;
                  with.after = std::get<2>(ch);
                  with.body.emplace_back(true, intern_quad(ch));
                  next.push_back(std::move(with));
                }
              }
            }
            fronts = std::move(next);
          }

          for (const auto& f : fronts)
            for (int qf : flush[static_cast<std::size_t>(f.after) * m + f.q0]) {
              Quad lhs{a0, f.q0, qf, a1};
              int id = intern_quad(lhs);
              if (rule_set.insert({id, f.body}).second) {
                realized.insert(lhs);
                grew = true;
              }
            }
        }
      }
    }
  }

  // Assemble: fresh axiom, one renaming per realized (#, initial, final, #)
  // quad, an epsilon rule when some initial state is final, then trim.
  Grammar g;
  std::string axiom = "S!";
  {
    std::set<std::string> taken(a.alphabet.terminals().begin(),
                                a.alphabet.terminals().end());
    while (taken.count(axiom)) axiom += "!";
  }
  g.axiom = axiom;
  g.nonterminals.push_back(axiom);
  g.terminals = a.alphabet.terminals();

  auto quad_name = [&](const Quad& q) {
    return "[" + a.alphabet.symbol_name(std::get<0>(q)) + "," +
           a.states[std::get<1>(q)] + "," + a.states[std::get<2>(q)] + "," +
           a.alphabet.symbol_name(std::get<3>(q)) + "]";
  };

  std::vector<Quad> ordered(realized.begin(), realized.end());
  for (const auto& q : ordered) g.nonterminals.push_back(quad_name(q));

  std::set<int> init, fin;
  for (const auto& q : a.initial) init.insert(sidx.at(q));
  for (const auto& q : a.finals) fin.insert(sidx.at(q));
  for (const auto& q : ordered) {
    if (std::get<0>(q) == hash && std::get<3>(q) == hash && init.count(std::get<1>(q)) &&
        fin.count(std::get<2>(q)))
      g.rules.push_back({axiom, {quad_name(q)}});
  }
  for (int q0 : init)
    if (fin.count(q0)) {
      g.rules.push_back({axiom, {}});
      break;
    }

  std::vector<std::pair<int, std::vector<std::pair<bool, int>>>> rules_sorted(
      rule_set.begin(), rule_set.end());
  for (const auto& [id, body] : rules_sorted) {
    Rule r{quad_name(quad_list[id]), {}};
    for (const auto& [is_quad, v] : body)
      r.rhs.push_back(is_quad ? quad_name(quad_list[v]) : a.alphabet.symbol_name(v));
    g.rules.push_back(std::move(r));
  }
  validate_grammar(g);
  return trim(g);
}

}  // namespace floyd
