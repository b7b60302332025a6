#include <doctest.h>

#include "lambekd/fold.hpp"
#include "lambekd/grammar.hpp"
#include "lambekd/grammar_text.hpp"
#include "lambekd/oracle.hpp"

using namespace lambekd;

namespace {

GrammarExpr L(const char* t) { return GrammarExpr::lit(t); }

GrammarExpr ab_or_c() {
  return GrammarExpr::sum({{"inl", GrammarExpr::tensor(L("a"), L("b"))}, {"inr", L("c")}});
}

GrammarEnv abc_env() { return GrammarEnv(Alphabet({"a", "b", "c"})); }

GrammarEnv dyck() {
  GrammarEnv env(Alphabet({"(", ")"}));
  env.define("Dyck", GrammarExpr::sum({{"nil", GrammarExpr::eps()},
                                       {"bal", GrammarExpr::seq({L("("), GrammarExpr::ref("Dyck"), L(")"),
                                                                 GrammarExpr::ref("Dyck")})}}));
  return env;
}

GrammarEnv astar() {
  GrammarEnv env(Alphabet({"a", "b", "c"}));
  env.define("a*", GrammarExpr::sum({{"nil", GrammarExpr::eps()},
                                     {"cons", GrammarExpr::tensor(L("a"), GrammarExpr::ref("a*"))}}));
  return env;
}

ParseTree star_cons(int n) {
  ParseTree t = ParseTree::roll("a*", ParseTree::inj("nil", ParseTree::eps()));
  for (int i = 0; i < n; ++i)
    t = ParseTree::roll("a*", ParseTree::inj("cons", ParseTree::pair(ParseTree::lit("a"), t)));
  return t;
}

}  // namespace

TEST_CASE("alphabet ranks are a bijection") {
  Alphabet a({"(", ")", "+", "NUM"});
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.rank(a[i]) == i);
  CHECK_THROWS_AS(a.rank("x"), TokenOutOfAlphabet);
  CHECK_THROWS_AS(Alphabet({"a", "a"}), std::invalid_argument);
  CHECK_THROWS_AS(Alphabet(std::vector<Token>{}), std::invalid_argument);
}

TEST_CASE("yields") {
  CHECK(yield_of(ParseTree::inj("inl", ParseTree::pair(1, ParseTree::lit("a"), ParseTree::lit("b")))) ==
        Word{"a", "b"});
  CHECK(yield_of(ParseTree::eps()).empty());
  CHECK(yield_of(ParseTree::pair(0, ParseTree::eps(), ParseTree::lit("c"))) == Word{"c"});
  CHECK_THROWS_AS(yield_of(ParseTree::pair(2, ParseTree::lit("a"), ParseTree::lit("b"))), MalformedTree);
  CHECK_THROWS_AS(yield_of(ParseTree::tuple({{"x", ParseTree::lit("a")}, {"y", ParseTree::lit("b")}})),
                  MalformedTree);
  CHECK(yield_of(ParseTree::tuple({}, {"x", "y"})) == Word{"x", "y"});
  CHECK(yield_of(ParseTree::reify("p", {"a", "b"})) == Word{"a", "b"});
}

TEST_CASE("validation reports paths") {
  GrammarEnv good = dyck();
  CHECK(validate_env(good).ok());

  GrammarEnv dangling = abc_env();
  dangling.define("S", GrammarExpr::tensor(L("a"), GrammarExpr::ref("missing")));
  auto r = validate_env(dangling);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].path.find("S") != std::string::npos);

  GrammarEnv foreign = abc_env();
  foreign.define("S", L("z"));
  CHECK_FALSE(validate_env(foreign).ok());

  GrammarEnv dup = abc_env();
  dup.define("S", GrammarExpr::sum({{"x", L("a")}, {"x", L("b")}}));
  CHECK_FALSE(validate_env(dup).ok());

  GrammarEnv pred = abc_env();
  pred.define("S", GrammarExpr::reify("nope"));
  CHECK_FALSE(validate_env(pred).ok());
}

TEST_CASE("well_formed membership") {
  GrammarEnv env = abc_env();
  CHECK(well_formed(env, ab_or_c(), ParseTree::inj("inl", ParseTree::pair(1, ParseTree::lit("a"), ParseTree::lit("b")))));
  CHECK_FALSE(well_formed(env, ab_or_c(), ParseTree::inj("inr", ParseTree::lit("a"))));
  CHECK_FALSE(well_formed(env, ab_or_c(), ParseTree::inj("zzz", ParseTree::lit("c"))));
  CHECK(well_formed(dyck(), GrammarExpr::ref("Dyck"), ParseTree::roll("Dyck", ParseTree::inj("nil", ParseTree::eps()))));
  CHECK_FALSE(well_formed(dyck(), GrammarExpr::ref("Dyck"), ParseTree::inj("nil", ParseTree::eps())));
  CHECK(well_formed(env, GrammarExpr::top(), ParseTree::tuple({}, {"a", "b"})));
  CHECK_FALSE(well_formed(env, GrammarExpr::empty(), ParseTree::eps()));
}

TEST_CASE("injections are injective and disjoint") {
  ParseTree a = ParseTree::lit("a");
  ParseTree b = ParseTree::lit("b");
  CHECK(ParseTree::inj("x", a) == ParseTree::inj("x", a));
  CHECK_FALSE(ParseTree::inj("x", a) == ParseTree::inj("x", b));
  CHECK_FALSE(ParseTree::inj("x", a) == ParseTree::inj("y", a));
  CHECK(compare(ParseTree::inj("x", a), ParseTree::inj("y", a)) != 0);
}

TEST_CASE("fold satisfies the recurrence") {
  GrammarEnv env = astar();
  Algebra<int> count;
  count["a*"] = [](const Layer<int>& l) { return l.tag == "nil" ? 0 : 1 + l.body().right().result(); };
  CHECK(fold_tree(env, count, star_cons(0)) == 0);
  CHECK(fold_tree(env, count, star_cons(2)) == 2);
  CHECK_THROWS_AS(fold_tree(env, count, ParseTree::lit("a")), MalformedTree);

  // The layer passed to the algebra carries the folded children.
  Algebra<int> probe;
  std::vector<int> seen;
  probe["a*"] = [&](const Layer<int>& l) {
    int r = l.tag == "nil" ? 0 : 1 + l.body().right().result();
    seen.push_back(r);
    return r;
  };
  fold_tree(env, probe, star_cons(3));
  CHECK(seen == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("yield algebra rebuilds yields of every Dyck parse") {
  GrammarEnv env = dyck();
  ParseOracle oracle(env, GrammarExpr::ref("Dyck"));
  auto alg = yield_algebra(env);
  std::size_t trees = 0;
  for (const auto& w : words_up_to(env.alphabet(), 8))
    for (const auto& t : oracle.enumerate(w)) {
      CHECK(fold_tree(env, alg, t) == w);
      ++trees;
    }
  CHECK(trees == 1 + 1 + 2 + 5 + 14);
}

TEST_CASE("transformers") {
  GrammarEnv env = abc_env();
  Transformer id = identity_transformer(ab_or_c());
  ParseTree t = ParseTree::inj("inr", ParseTree::lit("c"));
  CHECK(apply_checked(id, t) == t);
  Transformer bad{"drop", ab_or_c(), GrammarExpr::eps(), [](const ParseTree&) { return ParseTree::eps(); }};
  try {
    apply_checked(bad, t);
    FAIL("expected YieldViolation");
  } catch (const YieldViolation& e) {
    CHECK(e.transformer() == "drop");
  }
  Transformer both = compose(id, id);
  CHECK(both.apply(t) == t);
}

TEST_CASE("grammar text round trip") {
  const char* text = R"(# the Dyck language
alphabet ( )
Dyck ::= |nil: eps
       |bal: '(' Dyck ')' Dyck
)";
  GrammarFile f = parse_grammar_text(text);
  REQUIRE(f.start);
  CHECK(*f.start == "Dyck");
  CHECK(f.env.definition("Dyck") == dyck().definition("Dyck"));
  GrammarFile again = parse_grammar_text(to_text(f.env));
  CHECK(again.env.definition("Dyck") == f.env.definition("Dyck"));

  GrammarExpr g = parse_grammar_expr("&{x: |p: 'a' |q: 'b', y: top} (|l: 'a' |r: empty)");
  CHECK(parse_grammar_expr(to_text(g)) == g);

  CHECK_THROWS_AS(parse_grammar_text("S ::= 'a'"), SyntaxError);
  CHECK_THROWS_AS(parse_grammar_text("alphabet a\nS ::= 'a' )"), SyntaxError);
  CHECK_THROWS_AS(parse_grammar_text("alphabet a\nS ::= 'a'\nS ::= 'a'"), SyntaxError);
  try {
    parse_grammar_text("alphabet a\nS ::= &{x 'a'}");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }
}
