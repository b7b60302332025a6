#include <doctest.h>

#include "lambekd/dfa.hpp"

using namespace lambekd;

namespace {

const char* kSuite[] = {"('a'* 'b') | 'c'", "'a' | 'a'", "('a' 'a')*", "'a'* 'a'*", "eps", "empty"};

Word W(std::initializer_list<const char*> ts) { return Word(ts.begin(), ts.end()); }

/// Counts state sequences that read w from s, checking each step against delta as a relation.
std::size_t count_dfa_traces(const Dfa& d, State s, const Word& w, std::size_t i = 0) {
  if (i == w.size()) return 1;
  std::size_t n = 0;
  for (State t = 0; t < d.states; ++t)
    if (d.delta[s][d.alphabet.rank(w[i])] == t) n += count_dfa_traces(d, t, w, i + 1);
  return n;
}

}  // namespace

TEST_CASE("ε-closure") {
  Nfa n = fixture_nfa();
  CHECK(eps_closure(n, {0}) == StateSet{0, 1});
  CHECK(eps_closure(n, {}).empty());
  for (unsigned mask = 0; mask < 8; ++mask) {
    StateSet xs;
    for (State s = 0; s < 3; ++s)
      if (mask >> s & 1) xs.push_back(s);
    StateSet c = eps_closure(n, xs);
    CHECK(eps_closure(n, c) == c);
    CHECK(std::includes(c.begin(), c.end(), xs.begin(), xs.end()));
    for (unsigned bigger = mask; bigger < 8; ++bigger) {
      if ((bigger & mask) != mask) continue;
      StateSet ys;
      for (State s = 0; s < 3; ++s)
        if (bigger >> s & 1) ys.push_back(s);
      StateSet cy = eps_closure(n, ys);
      CHECK(std::includes(cy.begin(), cy.end(), c.begin(), c.end()));
    }
  }
}

TEST_CASE("determinizing the fixture") {
  Nfa n = fixture_nfa();
  Dfa d = determinize(n);
  validate_dfa(d);
  CHECK((*d.subsets)[d.init] == StateSet{0, 1});
  CHECK(parse_d(d, d.init, W({"a", "b"})).accept);
  CHECK_FALSE(parse_d(d, d.init, W({"b", "a"})).accept);
  CHECK_THROWS_AS(parse_d(d, d.init, W({"z"})), TokenOutOfAlphabet);
  for (State s = 0; s < d.states; ++s) {
    DfaTrace nil = parse_d(d, s, {});
    CHECK(nil.steps.empty());
    CHECK(nil.last == s);
    CHECK(nil.accept == d.is_accepting(s));
  }

  Dfa full = determinize(n, true);
  validate_dfa(full);
  // ε-closed subsets of {0,1,2} with 0 -> 1: all masks except {0} and {0,2}.
  CHECK(full.states == 6);
  for (const auto& w : words_up_to(n.alphabet, 6))
    CHECK(parse_d(full, full.init, w).accept == parse_d(d, d.init, w).accept);
}

TEST_CASE("empty regex determinizes to a sink") {
  Dfa d = determinize(thompson(Regex::empty()));
  // Initial closure is {s}; every token leads to the empty subset.
  for (const auto& w : words_up_to(d.alphabet, 4)) CHECK_FALSE(parse_d(d, d.init, w).accept);
  CHECK(std::none_of(d.accepting.begin(), d.accepting.end(), [](bool b) { return b; }));
}

TEST_CASE("print_d after parse_d and back") {
  Dfa d = determinize(thompson(parse_regex_text("('a'* 'b') | 'c'")));
  CHECK(print_d(parse_d(d, d.init, W({"a", "b", "c", "a", "b", "c"}))) == W({"a", "b", "c", "a", "b", "c"}));
  DfaTrace one{{{"a", d.init}}, d.step(d.init, "a"), d.is_accepting(d.step(d.init, "a"))};
  CHECK(print_d(one) == W({"a"}));
  CHECK(print_d(DfaTrace{{}, 0, false}).empty());
}

TEST_CASE("determinization preserves languages, traces stay unique") {
  for (const char* text : kSuite) {
    Regex r = parse_regex_text(text);
    Nfa n = thompson(r);
    Dfa d = determinize(n);
    validate_dfa(d);
    for (const auto& w : words_up_to(n.alphabet, 5)) {
      CHECK(parse_d(d, d.init, w).accept == !enumerate_traces(n, n.init, w).empty());
      if (d.states <= 6)
        for (State s = 0; s < d.states; ++s) CHECK(count_dfa_traces(d, s, w) == 1);
    }
  }
}

TEST_CASE("trace translations") {
  Nfa n = fixture_nfa();
  Dfa d = determinize(n);
  auto k = enumerate_traces(n, 0, W({"a", "b"}));
  REQUIRE(k.size() == 1);
  DfaTrace dk = n_to_d(n, d, k[0], d.init);
  CHECK(dk == parse_d(d, d.init, W({"a", "b"})));
  // From the subset {0,1} the least witness skips the ε-step and starts at 1;
  // from the initial NFA state the only witness is k itself.
  NfaWitness back = d_to_n(n, d, dk);
  CHECK(back.start == 1);
  CHECK(back.trace == NfaTrace{1, {{false, 0}, {false, 1}}});
  CHECK(d_to_n_from_init(n, d, dk) == k[0]);

  // nil at an accepting subset.
  State x2 = d.step(d.init, "c");
  CHECK((*d.subsets)[x2] == StateSet{2});
  NfaWitness stop = d_to_n(n, d, DfaTrace{{}, x2, true});
  CHECK(stop.start == 2);
  CHECK(stop.trace.steps.empty());
  CHECK(n_to_d(n, d, NfaTrace{2, {}}, x2) == DfaTrace{{}, x2, true});

  CHECK_THROWS_AS(n_to_d(n, d, k[0], x2), MembershipViolation);
  CHECK_THROWS_AS(d_to_n(n, d, parse_d(d, d.init, W({"a"}))), MalformedTrace);
}

TEST_CASE("translations round-trip over the suite") {
  for (const char* text : kSuite) {
    Regex r = parse_regex_text(text);
    Nfa n = thompson(r);
    Dfa d = determinize(n);
    for (const auto& w : words_up_to(n.alphabet, 5)) {
      for (State s = 0; s < n.states; ++s)
        for (const auto& tr : enumerate_traces(n, s, w))
          for (State x = 0; x < d.states; ++x) {
            if (!std::binary_search((*d.subsets)[x].begin(), (*d.subsets)[x].end(), s)) continue;
            DfaTrace dt = n_to_d(n, d, tr, x);
            CHECK(dt.accept);
            CHECK(print_d(dt) == w);
          }
      for (State x = 0; x < d.states; ++x) {
        DfaTrace dt = parse_d(d, x, w);
        if (!dt.accept) continue;
        NfaWitness nw = d_to_n(n, d, dt);
        CHECK(trace_valid(n, nw.trace));
        CHECK(nw.trace.start == nw.start);
        CHECK(trace_yield(n, nw.trace) == w);
        CHECK(n_to_d(n, d, nw.trace, x) == dt);
      }
      DfaTrace from_init = parse_d(d, d.init, w);
      if (from_init.accept) {
        NfaTrace tr = d_to_n_from_init(n, d, from_init);
        CHECK(tr.start == n.init);
        CHECK(trace_valid(n, tr));
        CHECK(trace_yield(n, tr) == w);
      }
    }
  }
}

TEST_CASE("trace grammar: retraction and unambiguity") {
  Dfa d = determinize(thompson(parse_regex_text("('a'* 'b') | 'c'")));
  GrammarEnv env = dfa_trace_grammar(d);
  CHECK(validate_env(env).ok());
  for (State s = 0; s < d.states; ++s) {
    GrammarExpr any = dfa_any_trace(s);
    CHECK(check_unambiguous(env, any, 6).pass);
    CHECK(check_disjoint(env, GrammarExpr::ref(dfa_trace_nonterminal(s, true)),
                         GrammarExpr::ref(dfa_trace_nonterminal(s, false)), 6)
              .pass);
    ParseOracle oracle(env, any);
    for (const auto& w : words_up_to(d.alphabet, 5)) {
      auto trees = oracle.enumerate(w);
      REQUIRE(trees.size() == 1);
      const auto* inj = trees[0].get<parse::Inj>();
      DfaTrace t = tree_to_dfa_trace(d, inj->body);
      CHECK(t == parse_d(d, s, w));
      CHECK(dfa_trace_to_tree(d, t) == inj->body);
      CHECK(parse_d(d, s, print_d(t)) == t);
    }
  }
}

TEST_CASE("regex pipeline parser") {
  Regex r = parse_regex_text("('a'* 'b') | 'c'");
  RegexPipeline p = regex_pipeline(r, default_alphabet(r));
  CHECK(check_parser(p.env, p.parser, 5).pass);
  CHECK(check_parser(p.env, dfa_parser(p.dfa), 5).pass);
  CHECK(check_strong_equiv(p.env, p.to_regex, p.from_regex, 5).pass);
  ParserResult yes = p.parser.run(W({"a", "a", "b"}));
  CHECK(yes.accepted);
  CHECK(well_formed(p.env, p.regex_start, yes.tree));
  CHECK_FALSE(p.parser.run(W({"b", "a"})).accepted);
}
