// Acceptance gate: nine properties, each run exactly at its stated bound.
// Prints one PASS/FAIL line per property; exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lambekd/cli.hpp"
#include "lambekd/dfa.hpp"
#include "lambekd/dyck.hpp"
#include "lambekd/expr.hpp"
#include "lambekd/oracle.hpp"
#include "lambekd/regex.hpp"
#include "reference.hpp"

using namespace lambekd;

namespace {

const char* kSuite[] = {"('a'* 'b') | 'c'", "'a' | 'a'", "('a' 'a')*", "'a'* 'a'*", "eps", "empty"};

const Alphabet& abc() {
  static const Alphabet a({"a", "b", "c"});
  return a;
}

/// Collects failed expectations; the first few are kept for the report.
class Ctx {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 3) failures_.push_back(what);
    failed_ = failed_ || !ok;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  bool failed() const { return failed_; }
  std::size_t checks() const { return checks_; }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::string& notes() const { return notes_; }

 private:
  bool failed_ = false;
  std::size_t checks_ = 0;
  std::vector<std::string> failures_;
  std::string notes_;
};

std::string show(const Word& w) { return "\"" + to_string(w) + "\""; }

void expect_report(Ctx& c, const EquivReport& r, const std::string& what) {
  c.expect(r.pass, what + " (counterexample " + show(r.counterexample) + ": " + r.detail + ")");
}

// ------------------------------------------------------------------ 1

void worked_examples(Ctx& c) {
  auto lit = [](const char* t) { return ParseTree::lit(t); };
  Word ab{"a", "b"};

  RegexGrammar g1 = regex_to_grammar(parse_regex_text("('a' 'b') | 'c'"), abc());
  auto ab_or_c = enumerate_parses(g1.env, g1.start, ab);
  ParseTree want1 = ParseTree::inj("inl", ParseTree::pair(1, lit("a"), lit("b")));
  c.expect(ab_or_c.size() == 1 && ab_or_c[0] == want1, "('a' 'b') | 'c' on ab gives exactly inl(a, b)");

  RegexGrammar g2 = regex_to_grammar(parse_regex_text("('a'* 'b') | 'c'"), abc());
  auto star_ab_or_c = enumerate_parses(g2.env, g2.start, ab);
  ParseTree nil = ParseTree::roll("Star0", ParseTree::inj("nil", ParseTree::eps()));
  ParseTree cons_a = ParseTree::roll("Star0", ParseTree::inj("cons", ParseTree::pair(1, lit("a"), nil)));
  ParseTree want2 = ParseTree::inj("inl", ParseTree::pair(1, cons_a, lit("b")));
  c.expect(star_ab_or_c.size() == 1 && star_ab_or_c[0] == want2, "('a'* 'b') | 'c' on ab gives exactly inl(cons a nil, b)");
  c.expect(count_parses(g1.env, g1.start, ab) == 1 && count_parses(g2.env, g2.start, ab) == 1, "parse counts are 1");

  // 0 --ε--> 1 --a--> 1 --b--> 2 (stop)
  NfaTrace eps_a_b{0, {{true, 0}, {false, 0}, {false, 1}}};
  auto traces = enumerate_traces(fixture_nfa(), 0, ab);
  c.expect(traces.size() == 1 && traces[0] == eps_a_b, "fixture NFA on ab from state 0 has exactly the trace eps, a, b");
}

// ------------------------------------------------------------------ 2

void thompson_equivalence(Ctx& c) {
  for (const char* text : kSuite) {
    Regex r = parse_regex_text(text);
    RegexGrammar g = regex_to_grammar(r, abc());
    Nfa n = thompson(r, abc());
    ParseOracle oracle(g.env, g.start);
    for (const auto& w : words_up_to(abc(), 5)) {
      auto parses = oracle.enumerate(w);
      auto traces = enumerate_traces(n, n.init, w);
      std::string at = std::string(text) + " at " + show(w);
      c.expect(parses.size() == traces.size(), "parse count = trace count for " + at);
      c.expect(parses.size() == reference::regex_count(r, w), "parse count matches the regex equations for " + at);
      for (const auto& t : parses)
        c.expect(trace_to_regex_parse(r, regex_parse_to_trace(r, t)) == t, "parse -> trace -> parse for " + at);
      for (const auto& tr : traces)
        c.expect(regex_parse_to_trace(r, trace_to_regex_parse(r, tr)) == tr, "trace -> parse -> trace for " + at);
    }
  }
}

// ------------------------------------------------------------------ 3

/// State sequences reading w from s, each step checked against delta as a relation.
std::size_t count_dfa_runs(const Dfa& d, State s, const Word& w, std::size_t i = 0) {
  if (i == w.size()) return 1;
  std::size_t n = 0;
  for (State t = 0; t < d.states; ++t)
    if (d.delta[s][d.alphabet.rank(w[i])] == t) n += count_dfa_runs(d, t, w, i + 1);
  return n;
}

void determinization(Ctx& c) {
  std::vector<std::pair<std::string, Nfa>> machines{{"fixture", fixture_nfa()}};
  for (const char* text : kSuite) machines.emplace_back(text, thompson(parse_regex_text(text), abc()));
  std::size_t small = 0;
  for (const auto& [name, n] : machines) {
    Dfa d = determinize(n);
    for (const auto& w : words_up_to(abc(), 6))
      c.expect(parse_d(d, d.init, w).accept == reference::nfa_accepts(n, w), "language agreement for " + name + " at " + show(w));
    if (d.states <= 6) {
      ++small;
      for (State s = 0; s < d.states; ++s)
        for (const auto& w : words_up_to(abc(), 6)) c.expect(count_dfa_runs(d, s, w) == 1, "one DFA trace for " + name);
    }
    for (const auto& w : words_up_to(abc(), 5)) {
      for (const auto& tr : enumerate_traces(n, n.init, w)) {
        DfaTrace dt = n_to_d(n, d, tr, d.init);
        c.expect(dt.accept && print_d(dt) == w && dfa_trace_valid(d, dt), "n_to_d preserves yield for " + name);
      }
      for (State x = 0; x < d.states; ++x) {
        DfaTrace dt = parse_d(d, x, w);
        if (!dt.accept) continue;
        NfaWitness back = d_to_n(n, d, dt);
        c.expect(trace_valid(n, back.trace) && trace_yield(n, back.trace) == w, "d_to_n preserves yield for " + name);
        c.expect(n_to_d(n, d, back.trace, x) == dt, "n_to_d . d_to_n = id for " + name + " at " + show(w));
        if (x == d.init) {
          NfaTrace from_init = d_to_n_from_init(n, d, dt);
          c.expect(from_init.start == n.init && n_to_d(n, d, from_init, d.init) == dt,
                   "n_to_d . d_to_n_from_init = id for " + name);
        }
      }
    }
  }
  c.note(std::to_string(small) + " of " + std::to_string(machines.size()) + " machines within 6 states");
  c.expect(small > 0, "some machine is small enough for the exhaustive trace search");
}

// ------------------------------------------------------------------ 4

void retraction(Ctx& c) {
  std::vector<Nfa> machines{fixture_nfa()};
  for (const char* text : kSuite) machines.push_back(thompson(parse_regex_text(text), abc()));
  for (const auto& n : machines) {
    Dfa d = determinize(n);
    for (State s = 0; s < d.states; ++s) {
      for (const auto& w : words_up_to(abc(), 8)) {
        // A trace built step by step from delta, independently of parse_d.
        DfaTrace t{{}, s, false};
        for (const auto& ch : w) {
          t.steps.push_back({ch, t.last});
          t.last = d.delta[t.last][d.alphabet.rank(ch)];
        }
        t.accept = d.accepting[t.last];
        c.expect(parse_d(d, t.start(), print_d(t)) == t, "parse_d . print_d = id");
        c.expect(print_d(parse_d(d, s, w)) == w, "print_d . parse_d = id");
      }
      expect_report(c, check_unambiguous(dfa_trace_grammar(d), dfa_any_trace(s), 8),
                    "sum of accepting and rejecting traces is unambiguous");
    }
  }
}

// ------------------------------------------------------------------ 5

void dyck(Ctx& c) {
  GrammarEnv env = dyck_env();
  auto start = GrammarExpr::ref("Dyck");
  ParseOracle oracle(env, start);
  for (const auto& w : words_up_to(env.alphabet(), 12)) {
    const bool member = reference::balanced(w);
    c.expect(oracle.recognizes(w) == member, "grammar membership at " + show(w));
    c.expect(parse_dyck(w).accepted() == member, "automaton membership at " + show(w));
  }
  std::size_t parses = 0, traces = 0;
  for (const auto& w : words_up_to(env.alphabet(), 10)) {
    for (const auto& t : oracle.enumerate(w)) {
      DyckTree d = parse_to_dyck(t);
      c.expect(trace_to_dyck(dyck_to_trace(d)) == d, "trace_to_dyck . dyck_to_trace = id at " + show(w));
      ++parses;
    }
    CounterTrace run = run_counter(w);
    if (run.accept) {
      c.expect(dyck_to_trace(trace_to_dyck(run)) == run, "dyck_to_trace . trace_to_dyck = id at " + show(w));
      ++traces;
    }
  }
  c.expect(parses == traces, "as many accepting traces as parses");
  expect_report(c, check_unambiguous(env, start, 10), "Dyck unambiguous at 10");
}

// ------------------------------------------------------------------ 6

void expressions(Ctx& c) {
  GrammarEnv env = exp_env();
  auto start = GrammarExpr::ref("Exp");
  ParseOracle oracle(env, start);
  for (const auto& w : words_up_to(env.alphabet(), 7)) {
    const bool member = reference::Descent(w).accepts();
    c.expect(oracle.recognizes(w) == member, "grammar membership at " + show(w));
    c.expect(parse_exp(w).tree.has_value() == member, "automaton membership at " + show(w));
    for (const auto& t : oracle.enumerate(w)) {
      ExpTree e = parse_to_exp(t);
      c.expect(machine_to_exp(exp_to_machine(e)) == e, "machine_to_exp . exp_to_machine = id at " + show(w));
    }
  }
  const AtomTree num = AtomTree::num();
  ExpResult r = parse_exp({"NUM", "+", "NUM", "+", "NUM"});
  c.expect(r.tree && *r.tree == ExpTree::add(num, ExpTree::add(num, ExpTree::done(num))), "NUM+NUM+NUM nests right");
  expect_report(c, check_unambiguous(env, start, 7), "Exp unambiguous at 7");
}

// ------------------------------------------------------------------ 7

void linearity(Ctx& c) {
  struct Case {
    GrammarEnv env;
    Transformer f;
    std::size_t bound;
  };
  std::vector<Case> cases;
  {
    GrammarEnv env = dyck_env();
    cases.push_back({env, identity_transformer(GrammarExpr::ref("Dyck")), 10});
    GrammarEnv ce = counter_grammar(10);
    ce.merge(env);
    cases.push_back({ce, counter_to_dyck_transformer(), 10});
    cases.push_back({ce, dyck_to_counter_transformer(), 10});
    cases.push_back({ce, compose(counter_to_dyck_transformer(), dyck_to_counter_transformer()), 10});
  }
  {
    GrammarEnv ee = lookahead_grammar(7);
    ee.merge(exp_env());
    cases.push_back({ee, machine_to_exp_transformer(), 7});
    cases.push_back({ee, exp_to_machine_transformer(), 7});
  }
  for (const char* text : kSuite) {
    RegexPipeline p = regex_pipeline(parse_regex_text(text), abc());
    cases.push_back({p.env, p.to_regex, 5});
    cases.push_back({p.env, p.from_regex, 5});
  }
  {
    GrammarEnv env(abc());
    auto lit = GrammarExpr::lit;
    GrammarExpr src = GrammarExpr::with(
        {{"x", GrammarExpr::sum({{"p", lit("a")}, {"q", GrammarExpr::tensor(lit("a"), GrammarExpr::top())}})},
         {"y", GrammarExpr::sum({{"r", GrammarExpr::top()}, {"s", GrammarExpr::eps()}})}});
    auto [there, back] = distribute_transformers(src);
    cases.push_back({env, there, 5});
    cases.push_back({env, back, 5});
  }
  for (const auto& k : cases) {
    try {
      EquivReport r = check_transformer(k.env, k.f, k.bound);
      expect_report(c, r, "transformer '" + k.f.name + "'");
    } catch (const YieldViolation& e) {
      c.expect(false, "transformer '" + e.transformer() + "' broke yield preservation");
    }
  }
  c.note(std::to_string(cases.size()) + " transformers");
}

// ------------------------------------------------------------------ 8

void structural_laws(Ctx& c) {
  GrammarEnv env(abc());
  auto lit = GrammarExpr::lit;
  auto str = string_grammar(abc());
  GrammarEnv se = env;
  se.merge(str);
  GrammarExpr src = GrammarExpr::with(
      {{"x", GrammarExpr::sum({{"p", lit("a")}, {"q", GrammarExpr::tensor(lit("a"), GrammarExpr::ref("String"))}})},
       {"y", GrammarExpr::sum({{"r", GrammarExpr::ref("String")}, {"s", GrammarExpr::eps()}, {"t", lit("a")}})}});
  GrammarExpr dist = distributed_grammar(src);
  auto [there, back] = distribute_transformers(src);
  for (const auto& w : words_up_to(abc(), 5)) {
    for (const auto& t : enumerate_parses(se, src, w)) {
      Distributed d = distribute(t);
      c.expect(undistribute(d.choice, d.tuple) == t, "undistribute . distribute = id at " + show(w));
    }
    for (const auto& u : enumerate_parses(se, dist, w))
      c.expect(there.apply(back.apply(u)) == u, "distribute . undistribute = id at " + show(w));
  }

  // Tags: Inj(x, t1) = Inj(y, t2) exactly when x = y and t1 = t2.
  std::vector<ParseTree> sample;
  for (const auto& w : words_up_to(abc(), 3))
    for (const auto& t : enumerate_parses(se, GrammarExpr::ref("String"), w)) sample.push_back(t);
  sample.push_back(ParseTree::tuple({}, {}));
  for (const char* x : {"inl", "inr", "nil"})
    for (const char* y : {"inl", "inr", "nil"})
      for (const auto& t1 : sample)
        for (const auto& t2 : sample) {
          const bool same = ParseTree::inj(x, t1) == ParseTree::inj(y, t2);
          c.expect(same == (std::string(x) == y && t1 == t2), "injections are disjoint and injective");
        }

  expect_report(c, check_unambiguous(str, GrammarExpr::ref("String"), 8), "String unambiguous at 8");
  expect_report(c, check_language_equal(str, GrammarExpr::ref("String"), GrammarExpr::top(), 8),
                "String language-equal to top at 8");

  auto words = words_up_to(abc(), 5);
  for (const auto& w : words) {
    ParseOracle o(env, internalize(w));
    for (const auto& v : words) c.expect(o.count(v) == (v == w ? 1u : 0u), "internalized " + show(w) + " at " + show(v));
  }
}

// ------------------------------------------------------------------ 9

void cli_end_to_end(Ctx& c) {
  std::size_t runs = 0;
  for (const char* text : kSuite) {
    Regex r = parse_regex_text(text);
    for (const auto& w : words_up_to(abc(), 6)) {
      std::string input;
      for (const auto& t : w) input += t;
      std::ostringstream out, err;
      const int code = run_cli({"parse-regex", text, input}, out, err);
      const int want = reference::regex_count(r, w) > 0 ? 0 : 1;
      c.expect(code == want, std::string("parse-regex ") + text + " on " + show(w) + " exited " + std::to_string(code));
      ++runs;
    }
  }
  c.note(std::to_string(runs) + " invocations");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Ctx&)>>> criteria{
      {"worked-example fidelity", worked_examples},
      {"Thompson strong equivalence", thompson_equivalence},
      {"determinization", determinization},
      {"DFA parser retraction", retraction},
      {"Dyck counter automaton", dyck},
      {"expression lookahead automaton", expressions},
      {"yield preservation of every transformer", linearity},
      {"distributivity, injections, strings and singletons", structural_laws},
      {"regex pipeline from the command line", cli_end_to_end},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Ctx c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %zu %s: %zu checks%s%s, %.2fs\n", c.failed() ? "FAIL" : "PASS", i + 1, criteria[i].first,
                c.checks(), c.notes().empty() ? "" : ", ", c.notes().c_str(), secs);
    for (const auto& f : c.failures()) std::printf("     %s\n", f.c_str());
    failed += c.failed();
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
