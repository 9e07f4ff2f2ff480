// Subset construction for precedence-driven stack machines. Result states
// pair the symbol under the matrix lookup with a set of (state, tag) pairs;
// the tag remembers the state that was on top when the current group opened,
// so a single flush image can be computed per state pair.
#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "floyd/automaton.hpp"

namespace floyd {

class DeterminizeLimitError : public std::runtime_error {
 public:
  explicit DeterminizeLimitError(std::size_t cap)
      : std::runtime_error("determinization exceeded the state cap of " +
                           std::to_string(cap)),
        cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

struct DeterminizeResult {
  FloydAutomaton automaton;
  /// Result state name -> its symbol component (a terminal or "#").
  std::map<std::string, std::string> state_symbol;
  /// Result state name -> the (state, tag) pairs, tag "_" meaning none.
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> state_pairs;
};

/// Builds a deterministic machine over the same matrix accepting the same
/// words. Push successors are explored from the initial state; flush
/// successors are closed over all ordered pairs of discovered states until a
/// fixpoint. Pair sets that come out empty produce no edge. Throws
/// DeterminizeLimitError when more than `state_cap` states appear.
inline DeterminizeResult determinize(const FloydAutomaton& a,
                                     std::size_t state_cap = 4096) {
  validate_automaton(a);
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
  std::set<int> fin;
  for (const auto& q : a.finals) fin.insert(sidx.at(q));

  // A result state: symbol index plus sorted unique (state, tag) pairs,
  // tag -1 = none.
  using Pairs = std::vector<std::pair<int, int>>;
  std::vector<std::pair<int, Pairs>> states;
  std::map<std::pair<int, Pairs>, int> intern;
  auto name_of = [&](const std::pair<int, Pairs>& s) {
    std::string out = "{" + a.alphabet.symbol_name(s.first);
    for (const auto& [q, p] : s.second) {
      out += "|" + a.states[q] + ":";
      out += p < 0 ? "_" : a.states[p];
    }
    return out + "}";
  };
  auto add = [&](int sym, Pairs k) {
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    auto key = std::make_pair(sym, std::move(k));
    auto it = intern.find(key);
    if (it != intern.end()) return it->second;
    if (states.size() >= state_cap) throw DeterminizeLimitError(state_cap);
    states.push_back(key);
    intern.emplace(std::move(key), static_cast<int>(states.size()) - 1);
    return static_cast<int>(states.size()) - 1;
  };

  Pairs k0;
  for (const auto& q : a.initial) k0.emplace_back(sidx.at(q), -1);
  add(hash, std::move(k0));

  std::vector<std::tuple<int, int, int>> det_push;   // from, terminal, to
  std::vector<std::tuple<int, int, int>> det_flush;  // top, context, to

  // Pair bookkeeping: states with index < flush_swept have been crossed with
  // every other state from earlier sweeps, so each sweep only visits pairs
  // involving at least one newer state. Every ordered pair of discovered
  // states is still visited exactly once, with constant-size bookkeeping.
  std::size_t push_done = 0;
  std::size_t flush_swept = 0;
  while (push_done < states.size() || flush_swept < states.size()) {
    while (push_done < states.size()) {
      const auto [sym, K] = states[push_done];
      for (int t = 0; t < nterm; ++t) {
        auto rel = a.alphabet.relation_by_index(sym, t);
        if (rel != PrecRel::Yields && rel != PrecRel::Equals) continue;
        Pairs K2;
        for (const auto& [q, p] : K)
          for (int h : push[static_cast<std::size_t>(q) * nsym + t])
            K2.emplace_back(h, rel == PrecRel::Yields ? q : p);
        if (K2.empty()) continue;
        det_push.emplace_back(static_cast<int>(push_done), t, add(t, std::move(K2)));
      }
      ++push_done;
    }
    std::size_t sz = states.size();
    for (std::size_t i = 0; i < sz; ++i)
      for (std::size_t j = i < flush_swept ? flush_swept : 0; j < sz; ++j) {
        const auto& K1 = states[i].second;
        const auto& K2 = states[j].second;
        Pairs K3;
        for (const auto& [r, q] : K1) {
          if (q < 0) continue;
          for (const auto& [q2, p] : K2) {
            if (q2 != q) continue;
            for (int h : flush[static_cast<std::size_t>(r) * m + q])
              K3.emplace_back(h, p);
          }
        }
        if (K3.empty()) continue;
        det_flush.emplace_back(static_cast<int>(i), static_cast<int>(j),
                               add(states[j].first, std::move(K3)));
      }
    flush_swept = sz;
  }

  DeterminizeResult res;
  res.automaton.alphabet = a.alphabet;
  std::vector<std::string> names;
  for (const auto& s : states) names.push_back(name_of(s));
  res.automaton.states = names;
  res.automaton.initial = {names[0]};
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].first != hash) continue;
    for (const auto& [q, p] : states[i].second)
      if (p < 0 && fin.count(q)) {
        res.automaton.finals.push_back(names[i]);
        break;
      }
  }
  for (const auto& [f, t, to] : det_push)
    res.automaton.pushes.push_back({names[f], a.alphabet.symbol_name(t), names[to]});
  for (const auto& [f, c, to] : det_flush)
    res.automaton.flushes.push_back({names[f], names[c], names[to]});
  for (std::size_t i = 0; i < states.size(); ++i) {
    res.state_symbol[names[i]] = a.alphabet.symbol_name(states[i].first);
    auto& ps = res.state_pairs[names[i]];
    for (const auto& [q, p] : states[i].second)
      ps.emplace_back(a.states[q], p < 0 ? "_" : a.states[p]);
  }
  return res;
}

}  // namespace floyd
