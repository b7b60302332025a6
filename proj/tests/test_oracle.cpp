#include <doctest.h>

#include <random>
#include <set>

#include "lambekd/oracle.hpp"

using namespace lambekd;

namespace {

GrammarExpr L(const char* t) { return GrammarExpr::lit(t); }
Alphabet abc() { return Alphabet({"a", "b", "c"}); }

/// Direct transcription of the semantic equations, no memoization. Ref-free grammars only.
std::vector<ParseTree> naive(const GrammarExpr& g, const Word& w) {
  std::vector<ParseTree> out;
  if (const auto* l = g.get<expr::Lit>()) {
    if (w.size() == 1 && w[0] == l->token) out.push_back(ParseTree::lit(l->token));
  } else if (g.get<expr::Eps>()) {
    if (w.empty()) out.push_back(ParseTree::eps());
  } else if (const auto* t = g.get<expr::Tensor>()) {
    for (std::size_t k = 0; k <= w.size(); ++k) {
      Word a(w.begin(), w.begin() + static_cast<long>(k)), b(w.begin() + static_cast<long>(k), w.end());
      for (const auto& x : naive(t->left, a))
        for (const auto& y : naive(t->right, b)) out.push_back(ParseTree::pair(k, x, y));
    }
  } else if (const auto* s = g.get<expr::Sum>()) {
    for (const auto& [tag, body] : s->branches)
      for (const auto& x : naive(body, w)) out.push_back(ParseTree::inj(tag, x));
  } else if (const auto* p = g.get<expr::With>()) {
    std::vector<std::vector<Entry>> acc{{}};
    for (const auto& [tag, body] : p->branches) {
      std::vector<std::vector<Entry>> next;
      auto parts = naive(body, w);
      for (const auto& prefix : acc)
        for (const auto& x : parts) {
          auto e = prefix;
          e.emplace_back(tag, x);
          next.push_back(std::move(e));
        }
      acc = std::move(next);
    }
    for (auto& e : acc) out.push_back(ParseTree::tuple(std::move(e), w));
  }
  return out;
}

GrammarExpr random_grammar(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 2 : 6);
  const char* toks[] = {"a", "b"};
  switch (pick(rng)) {
    case 0:
    case 1:
      return GrammarExpr::lit(toks[rng() % 2]);
    case 2:
      return GrammarExpr::eps();
    case 3:
    case 4:
      return GrammarExpr::tensor(random_grammar(rng, depth - 1), random_grammar(rng, depth - 1));
    case 5: {
      std::vector<Branch> bs;
      int n = static_cast<int>(rng() % 3);
      for (int i = 0; i < n; ++i) bs.emplace_back("t" + std::to_string(i), random_grammar(rng, depth - 1));
      return GrammarExpr::sum(bs);
    }
    default: {
      std::vector<Branch> bs;
      int n = static_cast<int>(rng() % 3);
      for (int i = 0; i < n; ++i) bs.emplace_back("t" + std::to_string(i), random_grammar(rng, depth - 1));
      return GrammarExpr::with(bs);
    }
  }
}

GrammarEnv star_env() {
  GrammarEnv env(abc());
  env.define("a*", GrammarExpr::sum({{"nil", GrammarExpr::eps()},
                                     {"cons", GrammarExpr::tensor(L("a"), GrammarExpr::ref("a*"))}}));
  return env;
}

}  // namespace

TEST_CASE("concatenation under a choice parses ab once") {
  GrammarEnv env(abc());
  GrammarExpr g = GrammarExpr::sum({{"inl", GrammarExpr::tensor(L("a"), L("b"))}, {"inr", L("c")}});
  auto ts = enumerate_parses(env, g, {"a", "b"});
  REQUIRE(ts.size() == 1);
  CHECK(ts[0] == ParseTree::inj("inl", ParseTree::pair(1, ParseTree::lit("a"), ParseTree::lit("b"))));
}

TEST_CASE("basic parse counts") {
  GrammarEnv env(abc());
  GrammarExpr aa = GrammarExpr::sum({{"inl", L("a")}, {"inr", L("a")}});
  CHECK(count_parses(env, aa, {"a"}) == 2);
  CHECK(enumerate_parses(env, GrammarExpr::empty(), {}).empty());
  auto top = enumerate_parses(env, GrammarExpr::top(), {"a", "b", "c"});
  REQUIRE(top.size() == 1);
  CHECK(yield_of(top[0]) == Word{"a", "b", "c"});
  CHECK_THROWS_AS(count_parses(env, L("a"), {"z"}), TokenOutOfAlphabet);

  GrammarEnv s = star_env();
  auto ts = enumerate_parses(s, GrammarExpr::ref("a*"), {"a", "a"});
  REQUIRE(ts.size() == 1);
  auto nil = ParseTree::roll("a*", ParseTree::inj("nil", ParseTree::eps()));
  auto one = ParseTree::roll("a*", ParseTree::inj("cons", ParseTree::pair(ParseTree::lit("a"), nil)));
  CHECK(ts[0] == ParseTree::roll("a*", ParseTree::inj("cons", ParseTree::pair(ParseTree::lit("a"), one))));
}

TEST_CASE("enumeration agrees with a naive enumerator on random grammars") {
  std::mt19937 rng(12345);
  Alphabet ab({"a", "b"});
  GrammarEnv env(ab);
  for (int round = 0; round < 300; ++round) {
    GrammarExpr g = random_grammar(rng, 3);
    ParseOracle oracle(env, g);
    for (const auto& w : words_up_to(ab, 4)) {
      auto expect = naive(g, w);
      auto got = oracle.enumerate(w);
      REQUIRE(got.size() == expect.size());
      CHECK(got == expect);
      CHECK(oracle.count(w) == expect.size());
      CHECK(oracle.recognizes(w) == !expect.empty());
      for (const auto& t : got) {
        CHECK(yield_of(t) == w);
        CHECK(well_formed(env, g, t));
      }
      std::set<ParseTree> distinct(got.begin(), got.end());
      CHECK(distinct.size() == got.size());
    }
  }
}

TEST_CASE("productive empty cycles are reported") {
  GrammarEnv env(abc());
  env.define("Loop", GrammarExpr::sum({{"stop", GrammarExpr::eps()}, {"again", GrammarExpr::ref("Loop")}}));
  CHECK_THROWS_AS(count_parses(env, GrammarExpr::ref("Loop"), {}), InfiniteParseSet);
  CHECK_THROWS_AS(enumerate_parses(env, GrammarExpr::ref("Loop"), {}), InfiniteParseSet);
  // A cycle that never produces a parse is not infinite: the fixpoint stays empty.
  GrammarEnv dead(abc());
  dead.define("X", GrammarExpr::ref("X"));
  CHECK(count_parses(dead, GrammarExpr::ref("X"), {"a"}) == 0);
  // Left recursion that consumes input is fine.
  GrammarEnv left(abc());
  left.define("S", GrammarExpr::sum({{"one", L("a")}, {"more", GrammarExpr::tensor(GrammarExpr::ref("S"), L("a"))}}));
  CHECK(count_parses(left, GrammarExpr::ref("S"), {"a", "a", "a"}) == 1);
}

TEST_CASE("shortlex word order") {
  auto ws = words_up_to(Alphabet({"a", "b"}), 2);
  std::vector<Word> expect{{}, {"a"}, {"b"}, {"a", "a"}, {"a", "b"}, {"b", "a"}, {"b", "b"}};
  CHECK(ws == expect);
  CHECK(words_up_to(abc(), 6).size() == 1093);
}

TEST_CASE("checkers") {
  GrammarEnv env(abc());
  GrammarExpr aa = GrammarExpr::sum({{"inl", L("a")}, {"inr", L("a")}});
  auto r = check_unambiguous(env, aa, 1);
  CHECK_FALSE(r.pass);
  CHECK(r.counterexample == Word{"a"});
  CHECK(check_unambiguous(env, GrammarExpr::eps(), 6).pass);
  CHECK(check_unambiguous(env, GrammarExpr::top(), 6).pass);
  for (const auto& c : env.alphabet().symbols()) CHECK(check_unambiguous(env, GrammarExpr::lit(c), 6).pass);

  CHECK(check_disjoint(env, L("a"), L("b"), 6).pass);
  auto d = check_disjoint(env, L("a"), L("a"), 6);
  CHECK_FALSE(d.pass);
  CHECK(d.counterexample == Word{"a"});

  auto le = check_language_equal(env, GrammarExpr::empty(), GrammarExpr::eps(), 6);
  CHECK_FALSE(le.pass);
  CHECK(le.counterexample.empty());
  CHECK(le.checked == 1);
}

TEST_CASE("unambiguous sums have pairwise disjoint branches") {
  std::mt19937 rng(99);
  Alphabet ab({"a", "b"});
  GrammarEnv env(ab);
  int tested = 0;
  for (int round = 0; round < 200; ++round) {
    GrammarExpr x = random_grammar(rng, 2), y = random_grammar(rng, 2);
    GrammarExpr s = GrammarExpr::sum({{"x", x}, {"y", y}});
    if (!check_unambiguous(env, s, 4).pass) continue;
    ++tested;
    CHECK(check_disjoint(env, x, y, 4).pass);
  }
  CHECK(tested > 20);
}

TEST_CASE("strong equivalence checker") {
  GrammarEnv env(abc());
  GrammarExpr g = GrammarExpr::sum({{"l", L("a")}, {"r", GrammarExpr::tensor(L("b"), L("c"))}});
  Transformer id = identity_transformer(g);
  CHECK(check_strong_equiv(env, id, id, 4).pass);

  GrammarExpr h = GrammarExpr::sum({{"r", GrammarExpr::tensor(L("b"), L("c"))}, {"l", L("a")}});
  Transformer swap{"swap", g, h, [](const ParseTree& t) { return t; }};
  Transformer back{"back", h, g, [](const ParseTree& t) { return t; }};
  CHECK(check_strong_equiv(env, swap, back, 4).pass);

  Transformer forget{"forget", g, h, [](const ParseTree&) { return ParseTree::inj("l", ParseTree::lit("a")); }};
  CHECK_THROWS_AS(check_strong_equiv(env, forget, back, 4), YieldViolation);
  CHECK_THROWS_AS(check_strong_equiv(env, swap, swap, 4), ConfigError);
}

TEST_CASE("distributivity") {
  ParseTree t = ParseTree::lit("a");
  Distributed one = distribute(ParseTree::tuple({{"x", ParseTree::inj("l", t)}}));
  CHECK(one.choice == Choice{{"x", "l"}});
  CHECK(one.tuple == ParseTree::tuple({{"x", t}}));
  Distributed none = distribute(ParseTree::tuple({}, {}));
  CHECK(none.choice.empty());
  CHECK(none.tuple == ParseTree::tuple({}, {}));
  CHECK_THROWS_AS(distribute(ParseTree::tuple({{"x", t}})), ShapeMismatch);

  GrammarEnv env(abc());
  GrammarExpr astar_like = GrammarExpr::sum({{"p", L("a")}, {"q", GrammarExpr::tensor(L("a"), L("a"))}});
  GrammarExpr other = GrammarExpr::sum({{"p", GrammarExpr::top()}, {"q", GrammarExpr::eps()}});
  GrammarExpr src = GrammarExpr::with({{"x", astar_like}, {"y", other}});
  auto [f, g] = distribute_transformers(src);
  CHECK(check_strong_equiv(env, f, g, 4).pass);
  for (const auto& w : words_up_to(env.alphabet(), 4))
    CHECK(count_parses(env, src, w) == count_parses(env, distributed_grammar(src), w));
}

TEST_CASE("strings and internalization") {
  Alphabet a = abc();
  GrammarEnv env = string_grammar(a);
  GrammarExpr str = GrammarExpr::ref("String");
  for (const auto& w : words_up_to(a, 6)) CHECK(count_parses(env, str, w) == 1);
  CHECK(check_language_equal(env, str, GrammarExpr::top(), 6).pass);
  GrammarExpr chr = GrammarExpr::ref("Char");
  GrammarExpr unrolled = GrammarExpr::sum(
      {{"zero", GrammarExpr::eps()}, {"one", chr}, {"more", GrammarExpr::seq({chr, chr, str})}});
  CHECK(check_language_equal(env, str, unrolled, 6).pass);

  CHECK(internalize({}) == GrammarExpr::eps());
  GrammarExpr ab = internalize({"a", "b"});
  CHECK(count_parses(env, ab, {"a", "b"}) == 1);
  CHECK(count_parses(env, ab, {"b", "a"}) == 0);
}

TEST_CASE("reify matches its finite expansion") {
  GrammarEnv env(abc());
  for (const auto& [name, p] : builtin_predicates()) env.add_predicate(name, p);
  for (const char* p : {"palindrome", "even_length", "anbncn"}) {
    GrammarExpr expanded = reify_expansion(env, p, 5);
    CHECK(check_language_equal(env, GrammarExpr::reify(p), expanded, 5).pass);
    CHECK(check_unambiguous(env, GrammarExpr::reify(p), 5).pass);
  }
  GrammarExpr both = GrammarExpr::with({{"p", GrammarExpr::reify("palindrome")}, {"e", GrammarExpr::reify("even_length")}});
  CHECK(count_parses(env, both, {"a", "b", "b", "a"}) == 1);
  CHECK(count_parses(env, both, {"a", "b", "a"}) == 0);
}

TEST_CASE("parser extension with identities") {
  GrammarEnv env(abc());
  GrammarExpr a = L("a");
  GrammarExpr nota = GrammarExpr::sum({{"other", GrammarExpr::top()}});
  // Not disjoint on purpose at "a", so the checker must flag it when asked.
  Parser p{"lit-a", a, GrammarExpr::sum({{"empty", GrammarExpr::eps()}, {"b", L("b")}, {"c", L("c")},
                                          {"long", GrammarExpr::seq({GrammarExpr::top(), GrammarExpr::lit("a"), GrammarExpr::top()})}}),
           [](const Word& w) {
             if (w == Word{"a"}) return ParserResult{true, ParseTree::lit("a")};
             if (w.empty()) return ParserResult{false, ParseTree::inj("empty", ParseTree::eps())};
             return ParserResult{false, ParseTree::eps()};
           }};
  (void)nota;
  auto report = check_parser(env, p, 2);
  CHECK_FALSE(report.pass);  // evidence for "b" is not well-formed

  Transformer id = identity_transformer(a);
  Parser q = extend_parser(id, id, p);
  CHECK(q.accept_grammar == p.accept_grammar);
  CHECK(q.reject_grammar == p.reject_grammar);
  CHECK(q.run({"a"}).accepted);
  CHECK_FALSE(q.run({"b"}).accepted);
}
