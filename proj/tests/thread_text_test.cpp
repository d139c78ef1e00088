#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "mwb/rng.hpp"
#include "mwb/thread_text.hpp"
#include "test_util.hpp"

using namespace mwb;

TEST_CASE("parsing the basic forms") {
  const RecSpec spec = parse_threads(
      "# a five-state walk\n"
      "X1 = init ; X2\n"
      "X2 = preload ? X3 : X5\n"
      "X3 = load:0 ; X4\n"
      "\n"
      "X4 = S\n"
      "X5 = D   # deadlock\n");
  REQUIRE(spec.equations.size() == 5);
  CHECK(spec.root_name() == "X1");

  const TermPtr& x1 = spec.equations[0].second;
  REQUIRE(x1->kind() == TermKind::post);
  CHECK(x1->action() == ActionId("init"));
  CHECK(equal_terms(x1->then_branch(), x1->else_branch()));
  CHECK(x1->then_branch()->var_name() == "X2");

  const TermPtr& x2 = spec.equations[1].second;
  CHECK(x2->action() == ActionId("preload"));
  CHECK(x2->then_branch()->var_name() == "X3");
  CHECK(x2->else_branch()->var_name() == "X5");

  const TermPtr& x3 = spec.equations[2].second;
  CHECK(x3->action() == ActionId("load", 0));

  CHECK(spec.equations[3].second->kind() == TermKind::stop);
  CHECK(spec.equations[4].second->kind() == TermKind::dead);
}

TEST_CASE("parsing nests and parentheses") {
  SUBCASE("parenthesised branches") {
    const RecSpec spec = parse_threads("X = a ? (b ; S) : D\n");
    const TermPtr& t = spec.equations[0].second;
    CHECK(t->then_branch()->action() == ActionId("b"));
    CHECK(t->else_branch()->kind() == TermKind::dead);
  }
  SUBCASE("the same term without parentheses") {
    const RecSpec spec = parse_threads("X = a ? b ; S : D\n");
    const TermPtr& t = spec.equations[0].second;
    CHECK(t->then_branch()->action() == ActionId("b"));
    CHECK(t->else_branch()->kind() == TermKind::dead);
  }
  SUBCASE("postconditional inside a then branch") {
    // The inner postconditional consumes exactly one ':'.
    const RecSpec spec = parse_threads("X = a ? b ? S : D : X\n");
    const TermPtr& t = spec.equations[0].second;
    REQUIRE(t->then_branch()->kind() == TermKind::post);
    CHECK(t->then_branch()->action() == ActionId("b"));
    CHECK(t->then_branch()->then_branch()->kind() == TermKind::stop);
    CHECK(t->then_branch()->else_branch()->kind() == TermKind::dead);
    CHECK(t->else_branch()->var_name() == "X");
  }
  SUBCASE("indexed action in a then branch") {
    // b:1 is an indexed action, not variable b followed by ':'.
    const RecSpec spec = parse_threads("X = a ? b:1 ; S : S\n");
    const TermPtr& t = spec.equations[0].second;
    CHECK(t->then_branch()->action() == ActionId("b", 1));
    CHECK(t->else_branch()->kind() == TermKind::stop);
  }
  SUBCASE("a bare name in branch position is a variable") {
    const RecSpec spec = parse_threads("X = a ? Y : S\nY = S\n");
    CHECK(spec.equations[0].second->then_branch()->var_name() == "Y");
  }
  SUBCASE("tau is an action") {
    const RecSpec spec = parse_threads("X = tau ? S : D\n");
    CHECK(spec.equations[0].second->action().is_tau());
  }
}

TEST_CASE("printing is stable and root-first") {
  RecSpec spec;
  spec.equations.emplace_back(
      "A", ThreadTerm::post(ActionId("go"), ThreadTerm::var("B"),
                            ThreadTerm::stop()));
  spec.equations.emplace_back(
      "B", ThreadTerm::prefix(ActionId("load", 3), ThreadTerm::var("A")));
  CHECK(print_threads(spec) == "A = go ? B : S\nB = load:3 ; A\n");

  // Prefix form is used exactly when the branches coincide.
  CHECK(print_term(ThreadTerm::prefix(ActionId("a"), ThreadTerm::stop())) ==
        "a ; S");
  CHECK(print_term(ThreadTerm::post(ActionId("a"), ThreadTerm::stop(),
                                    ThreadTerm::dead())) == "a ? S : D");

  // A non-first root is moved to the front.
  spec.root = "B";
  CHECK(print_threads(spec) == "B = load:3 ; A\nA = go ? B : S\n");
}

TEST_CASE("parse inverts print") {
  SUBCASE("handcrafted nests") {
    const char* sources[] = {
        "X = S\n",
        "X = D\n",
        "X = a ; X\n",
        "X = a ? b ? S : D : c ; X\n",
        "X = tau ; a:0 ? X : D\n",
        "X = a ? b ; S : c ? D : X\n",
    };
    for (const char* src : sources) {
      const RecSpec spec = parse_threads(src);
      CHECK(print_threads(spec) == src);
    }
  }
  SUBCASE("seeded random specifications") {
    SplitMix64 rng(777);
    for (int i = 0; i < 500; ++i) {
      const RecSpec spec = testutil::random_spec(rng);
      const RecSpec reparsed = parse_threads(print_threads(spec));
      CHECK(testutil::equal_specs(spec, reparsed));
      // And printing is a fixed point from then on.
      CHECK(print_threads(reparsed) == print_threads(spec));
    }
  }
}

TEST_CASE("parse errors carry 1-based positions") {
  SUBCASE("missing equals") {
    try {
      parse_threads("X a ; S\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
      CHECK(e.column() >= 3);
      CHECK(std::string(e.what()).find("parse error at 1:") !=
            std::string::npos);
    }
  }
  SUBCASE("line numbers advance") {
    try {
      parse_threads("X = S\nY = a ?\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("malformed terms") {
    CHECK_THROWS_AS(parse_threads("X = \n"), ParseError);
    CHECK_THROWS_AS(parse_threads("X = a ?\n"), ParseError);
    CHECK_THROWS_AS(parse_threads("X = a ? S\n"), ParseError);
    CHECK_THROWS_AS(parse_threads("X = (a ; S\n"), ParseError);
    CHECK_THROWS_AS(parse_threads("X = a ; S )\n"), ParseError);
    CHECK_THROWS_AS(parse_threads("X = a @ S\n"), ParseError);
    CHECK_THROWS_AS(parse_threads("X = load: ; S\n"), ParseError);
    CHECK_THROWS_AS(parse_threads("X = ; S\n"), ParseError);
    CHECK_THROWS_AS(parse_threads("= S\n"), ParseError);
  }
  SUBCASE("index overflow") {
    CHECK_THROWS_AS(parse_threads("X = load:4294967296 ; S\n"), ParseError);
  }
  SUBCASE("a bare action is not a term") {
    // An action must be followed by '?' or ';'.
    CHECK_THROWS_AS(parse_threads("X = a:1\n"), ParseError);
  }
}

TEST_CASE("specification-level errors") {
  CHECK_THROWS_AS(parse_threads("X = a ; Y\n"), SpecError);
  CHECK_THROWS_AS(parse_threads("X = S\nX = D\n"), SpecError);
  CHECK_THROWS_AS(parse_threads("tau = S\n"), SpecError);
  CHECK_THROWS_AS(parse_threads("S = S\n"), SpecError);
  // Empty input is a syntax-level failure: there is nothing to declare.
  CHECK_THROWS_WITH_AS(parse_threads(""), "parse error at 1:1: no declarations found", ParseError);
  // Unguarded chains parse; solving them is what fails.
  const RecSpec spec = parse_threads("X = Y\nY = X\n");
  CHECK_THROWS_AS(solve(spec), GuardednessViolation);
}
