#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <string>
#include <vector>

#include "floyd/automaton.hpp"
#include "test_util.hpp"

using namespace floyd;
using testutil::toks;

namespace {
FloydAutomaton dyck() {
  return parse_automaton(testutil::read_file(testutil::sample("dyck.fa")));
}
}  // namespace

TEST_CASE("parsing the matched-call machine") {
  FloydAutomaton a = dyck();
  REQUIRE(a.states == toks("q0 q1"));
  REQUIRE(a.initial == toks("q0"));
  REQUIRE(a.finals == toks("q0"));
  REQUIRE(a.alphabet.terminals() == toks("a ra b rb"));
  REQUIRE(a.alphabet.entry_count() == 19);
  REQUIRE(a.alphabet.relation("a", "ra") == PrecRel::Equals);
  REQUIRE(a.alphabet.relation("ra", "rb") == PrecRel::Takes);
  REQUIRE(a.alphabet.relation("#", "#") == PrecRel::Equals);
  REQUIRE_FALSE(a.alphabet.relation("a", "#").has_value());
  REQUIRE(a.pushes.size() == 6);
  REQUIRE(a.pushes[0] == PushEdge{"q0", "a", "q1"});
  REQUIRE(a.flushes.size() == 2);
  REQUIRE(a.flushes[0] == FlushEdge{"q1", "q1", "q1"});
  REQUIRE(a.flushes[1] == FlushEdge{"q1", "q0", "q0"});
  REQUIRE(is_deterministic(a));
}

TEST_CASE("serialization is a fixpoint at the text level") {
  std::string text = testutil::read_file(testutil::sample("dyck.fa"));
  std::string once = serialize_automaton(parse_automaton(text));
  std::string twice = serialize_automaton(parse_automaton(once));
  REQUIRE(once == twice);
  REQUIRE(parse_automaton(once) == parse_automaton(text));
}

TEST_CASE("machine text errors carry line numbers") {
  SECTION("tokens before any section") {
    try {
      parse_automaton("q0 q1\n");
      FAIL("expected AutomatonError");
    } catch (const AutomatonError& e) {
      REQUIRE(e.line() == 1);
    }
  }
  SECTION("wrong arity in matrix") {
    try {
      parse_automaton("states: q0\ninitial: q0\nfinal: q0\nmatrix:\na <\n");
      FAIL("expected AutomatonError");
    } catch (const AutomatonError& e) {
      REQUIRE(e.line() == 5);
    }
  }
  SECTION("unknown relation token") {
    REQUIRE_THROWS_AS(
        parse_automaton("states: q0\ninitial: q0\nfinal: q0\nmatrix:\na ? a\n"),
        AutomatonError);
  }
  SECTION("undeclared state") {
    REQUIRE_THROWS_AS(parse_automaton("states: q0\ninitial: q9\nfinal: q0\n"),
                      AutomatonError);
    REQUIRE_THROWS_AS(
        parse_automaton("states: q0\ninitial: q0\nfinal: q0\npush:\nq0 a q9\n"),
        AutomatonError);
  }
  SECTION("the delimiter cannot be a state or be pushed") {
    REQUIRE_THROWS_AS(parse_automaton("states: q0 #\ninitial: q0\nfinal: q0\n"),
                      AutomatonError);
    REQUIRE_THROWS_AS(
        parse_automaton("states: q0\ninitial: q0\nfinal: q0\npush:\nq0 # q0\n"),
        AutomatonError);
  }
  SECTION("conflicting matrix lines cite both sources") {
    try {
      parse_automaton(
          "states: q0\ninitial: q0\nfinal: q0\nmatrix:\na < b\na > b\n");
      FAIL("expected ConflictError");
    } catch (const ConflictError& e) {
      REQUIRE(e.conflicts().size() == 1);
      REQUIRE(e.conflicts()[0].left == "a");
      REQUIRE(e.conflicts()[0].right == "b");
      REQUIRE(e.conflicts()[0].candidates.size() == 2);
      REQUIRE(e.conflicts()[0].candidates[0].second == "line 5");
      REQUIRE(e.conflicts()[0].candidates[1].second == "line 6");
    }
  }
  SECTION("duplicate agreeing lines are fine") {
    REQUIRE_NOTHROW(
        parse_automaton("states: q0\ninitial: q0\nfinal: q0\nmatrix:\na < b\na < b\n"));
  }
}

TEST_CASE("acceptance on matched-call words") {
  AutomatonRunner r(dyck());
  REQUIRE(r.accepts({}));
  REQUIRE(r.accepts(toks("a ra")));
  REQUIRE(r.accepts(toks("b rb")));
  REQUIRE(r.accepts(toks("a b rb ra")));
  REQUIRE(r.accepts(toks("a ra b rb")));    // two groups in sequence
  REQUIRE(r.accepts(toks("a b a ra rb ra a ra")));
  REQUIRE_FALSE(r.accepts(toks("a")));      // unmatched call
  REQUIRE_FALSE(r.accepts(toks("ra")));     // bare return: # has no cell for ra
  REQUIRE_FALSE(r.accepts(toks("a rb")));   // mismatched return
  REQUIRE_FALSE(r.accepts(toks("a ra ra")));
  REQUIRE_FALSE(r.accepts(toks("zz")));     // unknown tokens reject quietly
}

TEST_CASE("the trace of the nested word matches the golden file") {
  AutomatonRunner r(dyck());
  auto word = toks("a b a ra rb ra a ra");
  Trace t = r.trace(word);
  REQUIRE(t.steps.size() == 13);
  REQUIRE(t.depth == 3);
  std::vector<MoveKind> want{MoveKind::Mark, MoveKind::Mark,  MoveKind::Mark,
                             MoveKind::Push, MoveKind::Flush, MoveKind::Push,
                             MoveKind::Flush, MoveKind::Push, MoveKind::Mark,
                             MoveKind::Push, MoveKind::Flush, MoveKind::Flush};
  REQUIRE(t.moves() == want);
  REQUIRE(format_trace(t, word) == testutil::read_file(testutil::golden("dyck_trace.txt")));
}

TEST_CASE("formatting one configuration") {
  Configuration c;
  c.stack = {{"#", false, "q0"}, {"a", true, "q1"}};
  c.position = 1;
  REQUIRE(format_configuration(MoveKind::Mark, c, toks("a ra")) ==
          "mark  [#:q0] [a':q1] | ra #");
  REQUIRE(format_configuration(MoveKind::Flush, c, toks("a")) ==
          "flush [#:q0] [a':q1] | #");
}

TEST_CASE("failed traces report the longest consumed prefix") {
  AutomatonRunner r(dyck());
  try {
    r.trace(toks("a ra ra rb"));
    FAIL("expected NoAcceptingRunError");
  } catch (const NoAcceptingRunError& e) {
    // a ra shift fine; the second ra flushes the group, then # vs ra is blank.
    REQUIRE(e.longest_prefix() == 2);
  }
  REQUIRE_THROWS_AS(r.trace(toks("zz")), UnknownTokenError);
}

TEST_CASE("the structural run fixes the move kinds") {
  FloydAutomaton a = dyck();
  auto word = toks("a b a ra rb ra a ra");
  StructuralRun s = structural_run(a.alphabet, word);
  REQUIRE(s.completed);
  REQUIRE(s.moves == AutomatonRunner(a).trace(word).moves());

  StructuralRun dead = structural_run(a.alphabet, toks("a ra ra rb"));
  REQUIRE_FALSE(dead.completed);
  REQUIRE(dead.moves == std::vector<MoveKind>{MoveKind::Mark, MoveKind::Push,
                                              MoveKind::Flush});
}

TEST_CASE("every branch follows the structural move sequence") {
  FloydAutomaton a = dyck();
  // Add a second, competing flush target to create real branching.
  a.states.push_back("q2");
  a.flushes.push_back({"q1", "q1", "q2"});
  a.pushes.push_back({"q2", "ra", "q1"});
  REQUIRE_FALSE(is_deterministic(a));
  AutomatonRunner r(a);
  auto word = toks("a a ra ra");
  StructuralRun s = structural_run(a.alphabet, word);
  auto branches = r.branch_moves(word);
  REQUIRE(branches.size() >= 2);
  for (const auto& b : branches) {
    REQUIRE(b.size() <= s.moves.size());
    for (std::size_t i = 0; i < b.size(); ++i) REQUIRE(b[i] == s.moves[i]);
  }
  REQUIRE(r.accepts(word));
}

TEST_CASE("determinism check counts distinct targets") {
  FloydAutomaton a = dyck();
  REQUIRE(is_deterministic(a));
  a.pushes.push_back({"q0", "a", "q1"});  // duplicate edge, same target
  REQUIRE(is_deterministic(a));
  a.pushes.push_back({"q0", "a", "q0"});  // second target
  REQUIRE_FALSE(is_deterministic(a));
  a.pushes.pop_back();
  a.initial.push_back("q1");
  REQUIRE_FALSE(is_deterministic(a));
}

TEST_CASE("programmatic validation catches broken machines") {
  FloydAutomaton a = dyck();
  a.states.push_back("q0");
  REQUIRE_THROWS_AS(validate_automaton(a), AutomatonError);
  a = dyck();
  a.pushes.push_back({"q0", "zz", "q1"});
  REQUIRE_THROWS_AS(validate_automaton(a), AutomatonError);
}
