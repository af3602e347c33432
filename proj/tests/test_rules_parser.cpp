#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chasebound/error.hpp"
#include "chasebound/homomorphism.hpp"
#include "oracles.hpp"

using namespace chase;
using oracle::atoms;

namespace {

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::set<std::string> names(const std::vector<Term>& ts) {
  std::set<std::string> out;
  for (const auto& t : ts) out.insert(t.name());
  return out;
}

/// vars(body) ∩ vars(head) and vars(head) \ vars(body), recomputed by hand.
void check_metadata(const Rule& r) {
  std::set<std::string> body, head;
  for (const auto& t : r.body.variables()) body.insert(t.name());
  for (const auto& t : r.head.variables()) head.insert(t.name());
  std::set<std::string> frontier, existentials;
  for (const auto& v : head) (body.contains(v) ? frontier : existentials).insert(v);
  CHECK(names(r.frontier) == frontier);
  CHECK(names(r.existentials) == existentials);
}

}  // namespace

TEST_SUITE("rules-kb") {
  TEST_CASE("rule metadata") {
    Rule sym = derive_rule_metadata("R", atoms("p(X,Y)", "R"), atoms("p(Y,Z), p(Z,Y)", "R"));
    CHECK(names(sym.frontier) == std::set<std::string>{"Y"});
    CHECK(names(sym.existentials) == std::set<std::string>{"Z"});
    check_metadata(sym);

    Rule loop = derive_rule_metadata("R2", atoms("p(X,Y)", "R2"), atoms("p(Y,Y)", "R2"));
    CHECK(names(loop.frontier) == std::set<std::string>{"Y"});
    CHECK(loop.existentials.empty());
    CHECK(loop.is_datalog());

    Rule id = derive_rule_metadata("I", atoms("p(X,Y)", "I"), atoms("p(X,Y)", "I"));
    CHECK(names(id.frontier) == std::set<std::string>{"X", "Y"});
    check_metadata(id);

    CHECK_THROWS_AS(derive_rule_metadata("E", {}, atoms("p(a)")), ValidationError);
    CHECK_THROWS_AS(derive_rule_metadata("E", atoms("p(X)", "E"), {}), ValidationError);
    CHECK_THROWS_AS(derive_rule_metadata("E", atoms("p(_:n)"), atoms("q(a)")), ValidationError);
  }

  TEST_CASE("ruleset statistics") {
    auto cross = parse_kb(read(FIXTURE_DIR "/transitivity_with_cross_join.dlp")).kb.ruleset;
    CHECK(cross.b() == 2);
    auto ex11 = parse_kb(read(FIXTURE_DIR "/equivalent_chase_non_heredity.dlp")).kb.ruleset;
    CHECK(ex11.b() == 4);
    CHECK(ex11.body_predicates() == std::set<std::string>{"s", "p", "r", "t"});
    auto single = parse_kb("[R] p(X) -> q(X,a).").kb.ruleset;
    CHECK(single.b() == 1);
    CHECK(single.rule_constants() == TermSet{Term::constant("a")});

    // Invariant under reordering.
    std::vector<Rule> reversed(ex11.rules().rbegin(), ex11.rules().rend());
    RuleSet r2(reversed);
    CHECK(r2.b() == ex11.b());
    CHECK(r2.body_predicates() == ex11.body_predicates());
    for (const auto& r : ex11.rules()) check_metadata(r);
  }

  TEST_CASE("validation diagnostics") {
    auto ex1 = parse_kb(read(FIXTURE_DIR "/human_ancestry.dlp"));
    CHECK(ex1.diagnostics.empty());
    CHECK(validate_kb(ex1.kb).empty());

    auto clash = parse_kb("p(a). p(a,b).");
    CHECK(has_errors(clash.diagnostics));

    auto reused = parse_kb("p(a,b).\n[A] p(X,Y) -> q(X).\n[B] q(X) -> r(X).");
    CHECK_FALSE(has_errors(reused.diagnostics));
    CHECK(reused.kb.ruleset[0].body_variables[0] != reused.kb.ruleset[1].body_variables[0]);

    auto dup = parse_kb("[A] p(X) -> q(X).\n[A] q(X) -> r(X).");
    CHECK(has_errors(dup.diagnostics));
  }

  TEST_CASE("renaming rules apart keeps every trigger") {
    // Same rules, once sharing variable names and once with distinct names.
    auto shared = parse_kb("p(a,b). p(b,c).\n[A] p(X,Y) -> q(X).\n[B] p(X,Y), p(Y,Z) -> r(X,Z).").kb;
    auto distinct = parse_kb("p(a,b). p(b,c).\n[A] p(X1,Y1) -> q(X1).\n[B] p(X,Y), p(Y,Z) -> r(X,Z).").kb;
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(all_homomorphisms(shared.ruleset[i].body, shared.factbase).size() ==
            all_homomorphisms(distinct.ruleset[i].body, distinct.factbase).size());
    }
  }
}

TEST_SUITE("parser") {
  TEST_CASE("the ancestry KB") {
    auto parsed = parse_kb("human(alice). human(X) -> parentOf(Y,X), human(Y).");
    REQUIRE(parsed.kb.ruleset.size() == 1);
    CHECK(parsed.kb.factbase == atoms("human(alice)"));
    const Rule& r = parsed.kb.ruleset[0];
    CHECK(names(r.frontier) == std::set<std::string>{"X"});
    CHECK(names(r.existentials) == std::set<std::string>{"Y"});
    CHECK(r.id == "R1");
  }

  TEST_CASE("empty input") {
    auto parsed = parse_kb("");
    CHECK(parsed.kb.factbase.empty());
    CHECK(parsed.kb.ruleset.empty());
    CHECK(parsed.diagnostics.empty());
    CHECK(parse_kb("% only a comment\n").kb.factbase.empty());
  }

  TEST_CASE("syntax errors carry a position") {
    try {
      parse_kb("p(a,b");
      FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == 1);
      CHECK(e.column() == 6);
      CHECK(std::string(e.what()).find('^') != std::string::npos);
    }
    CHECK_THROWS_AS(parse_kb("p(a).\nq(b) -> ."), SyntaxError);
    CHECK_THROWS_AS(parse_kb("P(a)."), SyntaxError);
    try {
      parse_kb("p(a).\n\n  q(X -> r(X).");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == 3);
    }
  }

  TEST_CASE("initial nulls and produced nulls parse") {
    AtomSet f = atoms("p(a,_:w)");
    CHECK(f.begin()->args[1].is_null());
    CHECK(f.begin()->args[1].provenance().key_kind == NullKeyKind::Initial);
    Term n = parse_term("_:R1#{X:a,Y:_:R1#{X:a,Y:a}#Z}#Z");
    CHECK(n.is_null());
    CHECK(n.to_string() == "_:R1#{X:a,Y:_:R1#{X:a,Y:a}#Z}#Z");
    Term f2 = parse_term("_:R#[Y:a]#Z");
    CHECK(f2.provenance().key_kind == NullKeyKind::Frontier);
    CHECK(f2.to_string() == "_:R#[Y:a]#Z");
  }

  TEST_CASE("serialize then parse is a fixpoint on every fixture") {
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(FIXTURE_DIR)) {
      if (entry.path().extension() != ".dlp") continue;
      ++seen;
      CAPTURE(entry.path().string());
      auto kb = parse_kb(read(entry.path())).kb;
      std::string once = serialize_kb(kb);
      auto again = parse_kb(once).kb;
      CHECK(serialize_kb(again) == once);
      CHECK(again.factbase == kb.factbase);
      REQUIRE(again.ruleset.size() == kb.ruleset.size());
      for (std::size_t i = 0; i < kb.ruleset.size(); ++i) {
        CHECK(again.ruleset[i].id == kb.ruleset[i].id);
        CHECK(again.ruleset[i].body == kb.ruleset[i].body);
        CHECK(again.ruleset[i].head == kb.ruleset[i].head);
      }
    }
    CHECK(seen >= 10);
  }

  TEST_CASE("serialize then parse on random KBs") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
      auto kb = oracle::random_kb(rng);
      std::string once = serialize_kb(kb);
      CHECK(serialize_kb(parse_kb(once).kb) == once);
    }
  }
}
