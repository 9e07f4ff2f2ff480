#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "floyd/determinize.hpp"
#include "floyd/oracle.hpp"
#include "test_util.hpp"

using namespace floyd;
using testutil::toks;

namespace {

FloydAutomaton dyck() {
  return parse_automaton(testutil::read_file(testutil::sample("dyck.fa")));
}

/// The matched-call machine with an extra competing flush target, so the
/// subset construction has real work to do.
FloydAutomaton noisy_dyck() {
  FloydAutomaton a = dyck();
  a.states.push_back("q2");
  a.flushes.push_back({"q1", "q1", "q2"});
  a.pushes.push_back({"q2", "ra", "q1"});
  a.pushes.push_back({"q2", "b", "q2"});
  return a;
}

MembershipFn member(const FloydAutomaton& a) {
  auto runner = std::make_shared<AutomatonRunner>(a);
  return [runner](const std::vector<std::string>& w) { return runner->accepts(w); };
}

}  // namespace

TEST_CASE("subset construction output is deterministic and language-equal") {
  FloydAutomaton a = dyck();
  DeterminizeResult d = determinize(a);
  REQUIRE(is_deterministic(d.automaton));
  REQUIRE(d.automaton.alphabet == a.alphabet);
  REQUIRE(d.automaton.initial == std::vector<std::string>{"{#|q0:_}"});

  auto rep = language_agree(member(a), member(d.automaton), a.alphabet.terminals(), 5);
  REQUIRE(rep.words_checked == 1365);
  REQUIRE(rep.agree());
}

TEST_CASE("a genuinely nondeterministic machine determinizes correctly") {
  FloydAutomaton a = noisy_dyck();
  REQUIRE_FALSE(is_deterministic(a));
  DeterminizeResult d = determinize(a);
  REQUIRE(is_deterministic(d.automaton));
  auto rep = language_agree(member(a), member(d.automaton), a.alphabet.terminals(), 5);
  REQUIRE(rep.agree());
}

TEST_CASE("state names expose their symbol and pair components") {
  DeterminizeResult d = determinize(dyck());
  for (const auto& q : d.automaton.states) {
    REQUIRE(q.front() == '{');
    REQUIRE(q.back() == '}');
    const std::string& sym = d.state_symbol.at(q);
    REQUIRE(q.rfind("{" + sym + "|", 0) == 0);
    REQUIRE_FALSE(d.state_pairs.at(q).empty());  // empty sets are dropped
  }
  REQUIRE(d.state_pairs.at("{#|q0:_}") ==
          std::vector<std::pair<std::string, std::string>>{{"q0", "_"}});
}

TEST_CASE("pushed states carry the shifted terminal, flushed states the context symbol") {
  for (const FloydAutomaton& a : {dyck(), noisy_dyck()}) {
    DeterminizeResult d = determinize(a);
    for (const auto& e : d.automaton.pushes)
      REQUIRE(d.state_symbol.at(e.to) == e.terminal);
    for (const auto& e : d.automaton.flushes)
      REQUIRE(d.state_symbol.at(e.to) == d.state_symbol.at(e.context));
  }
}

TEST_CASE("the empty-language machine keeps its initial state only as needed") {
  FloydAutomaton a = dyck();
  a.finals.clear();
  DeterminizeResult d = determinize(a);
  REQUIRE(d.automaton.finals.empty());
  auto rep = language_agree(member(a), member(d.automaton), a.alphabet.terminals(), 4);
  REQUIRE(rep.agree());
}

TEST_CASE("the state cap aborts exploding constructions") {
  try {
    determinize(dyck(), 1);
    FAIL("expected DeterminizeLimitError");
  } catch (const DeterminizeLimitError& e) {
    REQUIRE(e.cap() == 1);
  }
  REQUIRE_NOTHROW(determinize(dyck(), 4096));
}

TEST_CASE("determinizing seeded random machines preserves the language") {
  const std::vector<std::string> terms = {"x", "y"};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    FloydAutomaton a = random_automaton(seed, 3, terms);
    DeterminizeResult d = determinize(a);
    REQUIRE(is_deterministic(d.automaton));
    auto rep = language_agree(member(a), member(d.automaton), terms, 5);
    INFO("seed " << seed << ":\n" << rep.to_text());
    REQUIRE(rep.agree());
  }
}
