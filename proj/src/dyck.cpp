#include "lambekd/dyck.hpp"

#include <functional>

#include "lambekd/fold.hpp"

namespace lambekd {

GrammarEnv dyck_env() {
  GrammarEnv env(Alphabet({"(", ")"}));
  GrammarExpr dyck = GrammarExpr::ref("Dyck");
  env.define("Dyck", GrammarExpr::sum({{"nil", GrammarExpr::eps()},
                                       {"bal", GrammarExpr::seq({GrammarExpr::lit("("), dyck, GrammarExpr::lit(")"), dyck})}}));
  return env;
}

struct DyckTree::Node {
  DyckTree inner;
  DyckTree rest;
};

DyckTree DyckTree::bal(DyckTree inner, DyckTree rest) {
  return DyckTree(std::make_shared<const Node>(Node{std::move(inner), std::move(rest)}));
}

const DyckTree& DyckTree::inner() const {
  if (!node_) throw ShapeMismatch("nil has no children");
  return node_->inner;
}

const DyckTree& DyckTree::rest() const {
  if (!node_) throw ShapeMismatch("nil has no children");
  return node_->rest;
}

bool operator==(const DyckTree& a, const DyckTree& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return a.node_->inner == b.node_->inner && a.node_->rest == b.node_->rest;
}

namespace {

template <class R>
R fold_dyck(const DyckTree& t, const R& nil, const std::function<R(R, R)>& bal) {
  if (t.is_nil()) return nil;
  return bal(fold_dyck(t.inner(), nil, bal), fold_dyck(t.rest(), nil, bal));
}

}  // namespace

Word dyck_yield(const DyckTree& t) {
  return fold_dyck<Word>(t, {}, [](Word inner, Word rest) {
    Word w{"("};
    w.insert(w.end(), inner.begin(), inner.end());
    w.push_back(")");
    w.insert(w.end(), rest.begin(), rest.end());
    return w;
  });
}

ParseTree dyck_to_parse(const DyckTree& t) {
  return fold_dyck<ParseTree>(t, ParseTree::roll("Dyck", ParseTree::inj("nil", ParseTree::eps())),
                              [](ParseTree inner, ParseTree rest) {
                                ParseTree body = ParseTree::pair(
                                    ParseTree::lit("("),
                                    ParseTree::pair(inner, ParseTree::pair(ParseTree::lit(")"), rest)));
                                return ParseTree::roll("Dyck", ParseTree::inj("bal", body));
                              });
}

DyckTree parse_to_dyck(const ParseTree& t) {
  static const GrammarEnv env = dyck_env();
  Algebra<DyckTree> alg;
  // bal's layer: ( '(' , ( inner , ( ')' , rest ) ) )
  alg["Dyck"] = [](const Layer<DyckTree>& l) {
    if (l.tag == "nil") return DyckTree::nil();
    const auto& tail = l.body().right();
    return DyckTree::bal(tail.left().result(), tail.right().right().result());
  };
  return fold_tree(env, alg, t);
}

// ---------------------------------------------------------------- machine

std::optional<std::size_t> CounterTrace::rejected_at() const {
  if (accept) return std::nullopt;
  if (failed)
    for (std::size_t i = 0; i < steps.size(); ++i)
      if (steps[i].move == CounterMove::ToFail) return i;
  return steps.size();
}

Word counter_yield(const CounterTrace& t) {
  Word w;
  for (const auto& s : t.steps) w.push_back(s.token);
  return w;
}

bool counter_trace_valid(const CounterTrace& t) {
  std::size_t n = 0;
  bool failed = false;
  for (const auto& s : t.steps) {
    if (failed) {
      if (s.move != CounterMove::FailLoop || s.counter != 0 || (s.token != "(" && s.token != ")")) return false;
      continue;
    }
    if (s.counter != n) return false;
    switch (s.move) {
      case CounterMove::Open:
        if (s.token != "(") return false;
        ++n;
        break;
      case CounterMove::Close:
        if (s.token != ")" || n == 0) return false;
        --n;
        break;
      case CounterMove::ToFail:
        if (s.token != ")" || n != 0) return false;
        failed = true;
        break;
      case CounterMove::FailLoop:
        return false;
    }
  }
  return t.failed == failed && t.final_counter == (failed ? 0 : n) && t.accept == (!failed && n == 0);
}

CounterTrace run_counter(const Word& w) {
  static const Alphabet alphabet({"(", ")"});
  alphabet.ranks(w);
  CounterTrace t;
  std::size_t n = 0;
  for (const auto& c : w) {
    if (t.failed) t.steps.push_back({CounterMove::FailLoop, 0, c});
    else if (c == "(") t.steps.push_back({CounterMove::Open, n++, c});
    else if (n > 0) t.steps.push_back({CounterMove::Close, n--, c});
    else {
      t.steps.push_back({CounterMove::ToFail, 0, c});
      t.failed = true;
    }
  }
  t.final_counter = t.failed ? 0 : n;
  t.accept = !t.failed && n == 0;
  return t;
}

CounterTrace dyck_to_trace(const DyckTree& t) {
  using Fragment = std::function<void(std::size_t, std::vector<CounterStep>&)>;
  Fragment whole = fold_dyck<Fragment>(
      t, [](std::size_t, std::vector<CounterStep>&) {},
      [](Fragment inner, Fragment rest) -> Fragment {
        return [inner, rest](std::size_t n, std::vector<CounterStep>& out) {
          out.push_back({CounterMove::Open, n, "("});
          inner(n + 1, out);
          out.push_back({CounterMove::Close, n + 1, ")"});
          rest(n, out);
        };
      });
  CounterTrace tr;
  whole(0, tr.steps);
  tr.accept = true;
  return tr;
}

namespace {

class TraceReader {
 public:
  explicit TraceReader(const CounterTrace& t) : t_(t) {}

  DyckTree run() {
    DyckTree d = seq(0);
    if (pos_ != t_.steps.size()) throw MalformedTrace("unmatched ')' in counter trace");
    return d;
  }

 private:
  DyckTree seq(std::size_t n) {
    if (pos_ >= t_.steps.size() || t_.steps[pos_].move != CounterMove::Open) return DyckTree::nil();
    ++pos_;
    DyckTree inner = seq(n + 1);
    if (pos_ >= t_.steps.size() || t_.steps[pos_].move != CounterMove::Close)
      throw MalformedTrace("counter trace ends inside a bracket");
    ++pos_;
    DyckTree rest = seq(n);
    return DyckTree::bal(std::move(inner), std::move(rest));
  }

  const CounterTrace& t_;
  std::size_t pos_ = 0;
};

}  // namespace

DyckTree trace_to_dyck(const CounterTrace& tr) {
  if (!tr.accept || !counter_trace_valid(tr)) throw MalformedTrace("trace_to_dyck expects an accepting counter trace");
  return TraceReader(tr).run();
}

DyckResult parse_dyck(const Word& w) {
  DyckResult r{run_counter(w), std::nullopt};
  if (r.trace.accept) r.tree = trace_to_dyck(r.trace);
  return r;
}

// ---------------------------------------------------------- trace grammar

std::string counter_nonterminal(std::size_t n, bool accept) {
  return "M_" + std::to_string(n) + (accept ? "_true" : "_false");
}

namespace {

const char* kFail = "M_fail_false";

}  // namespace

GrammarEnv counter_grammar(std::size_t bound) {
  GrammarEnv env(Alphabet({"(", ")"}));
  auto lit = GrammarExpr::lit;
  for (std::size_t n = 0; n <= bound; ++n)
    for (bool b : {true, false}) {
      std::vector<Branch> br;
      if (n == 0 && b) br.emplace_back("stop", GrammarExpr::eps());
      if (n > 0 && !b) br.emplace_back("exhausted", GrammarExpr::eps());
      if (n < bound) br.emplace_back("open", GrammarExpr::tensor(lit("("), GrammarExpr::ref(counter_nonterminal(n + 1, b))));
      if (n > 0) br.emplace_back("close", GrammarExpr::tensor(lit(")"), GrammarExpr::ref(counter_nonterminal(n - 1, b))));
      if (n == 0 && !b) br.emplace_back("toFail", GrammarExpr::tensor(lit(")"), GrammarExpr::ref(kFail)));
      env.define(counter_nonterminal(n, b), GrammarExpr::sum(std::move(br)));
    }
  env.define(kFail, GrammarExpr::sum({{"exhausted", GrammarExpr::eps()},
                                      {"loopOpen", GrammarExpr::tensor(lit("("), GrammarExpr::ref(kFail))},
                                      {"loopClose", GrammarExpr::tensor(lit(")"), GrammarExpr::ref(kFail))}}));
  return env;
}

ParseTree counter_trace_to_tree(const CounterTrace& t) {
  if (!counter_trace_valid(t)) throw MalformedTrace("invalid counter trace");
  const bool b = t.accept;
  std::string last = t.failed ? kFail : counter_nonterminal(t.final_counter, b);
  ParseTree acc = ParseTree::roll(last, ParseTree::inj(t.accept ? "stop" : "exhausted", ParseTree::eps()));
  for (auto it = t.steps.rbegin(); it != t.steps.rend(); ++it) {
    auto wrap = [&](const std::string& nt, const char* tag) {
      acc = ParseTree::roll(nt, ParseTree::inj(tag, ParseTree::pair(ParseTree::lit(it->token), acc)));
    };
    switch (it->move) {
      case CounterMove::Open:
        wrap(counter_nonterminal(it->counter, b), "open");
        break;
      case CounterMove::Close:
        wrap(counter_nonterminal(it->counter, b), "close");
        break;
      case CounterMove::ToFail:
        wrap(counter_nonterminal(0, false), "toFail");
        break;
      case CounterMove::FailLoop:
        wrap(kFail, it->token == "(" ? "loopOpen" : "loopClose");
        break;
    }
  }
  return acc;
}

CounterTrace tree_to_counter_trace(const ParseTree& t) {
  CounterTrace out;
  const auto* root = t.get<parse::Roll>();
  if (!root) throw MalformedTree("not a counter trace parse");
  Word w;
  ParseTree cur = t;
  while (true) {
    const auto* roll = cur.get<parse::Roll>();
    const auto* inj = roll ? roll->body.get<parse::Inj>() : nullptr;
    if (!inj) throw MalformedTree("not a counter trace parse");
    if (inj->tag == "stop" || inj->tag == "exhausted") break;
    const auto* pair = inj->body.get<parse::Pair>();
    const auto* leaf = pair ? pair->left.get<parse::LitLeaf>() : nullptr;
    if (!leaf) throw MalformedTree("counter trace step without a token");
    w.push_back(leaf->token);
    cur = pair->right;
  }
  try {
    out = run_counter(w);
  } catch (const TokenOutOfAlphabet&) {
    throw MalformedTree("counter trace reads a foreign token");
  }
  // The machine is deterministic, so the tree is valid iff it encodes the run on its yield.
  if (!(counter_trace_to_tree(out) == t)) throw MalformedTree("tree does not encode a counter machine run");
  return out;
}

Transformer counter_to_dyck_transformer() {
  return Transformer{"trace_to_dyck", GrammarExpr::ref(counter_nonterminal(0, true)), GrammarExpr::ref("Dyck"),
                     [](const ParseTree& t) { return dyck_to_parse(trace_to_dyck(tree_to_counter_trace(t))); }};
}

Transformer dyck_to_counter_transformer() {
  return Transformer{"dyck_to_trace", GrammarExpr::ref("Dyck"), GrammarExpr::ref(counter_nonterminal(0, true)),
                     [](const ParseTree& t) { return counter_trace_to_tree(dyck_to_trace(parse_to_dyck(t))); }};
}

Parser counter_parser() {
  return Parser{"run_counter", GrammarExpr::ref(counter_nonterminal(0, true)),
                GrammarExpr::ref(counter_nonterminal(0, false)), [](const Word& w) {
                  CounterTrace t = run_counter(w);
                  return ParserResult{t.accept, counter_trace_to_tree(t)};
                }};
}

Parser dyck_parser() { return extend_parser(counter_to_dyck_transformer(), dyck_to_counter_transformer(), counter_parser()); }

}  // namespace lambekd
