#include "lambekd/expr.hpp"

#include <charconv>
#include <variant>

#include "lambekd/fold.hpp"

namespace lambekd {

Alphabet exp_alphabet() { return Alphabet({"(", ")", "+", "NUM"}); }

GrammarEnv exp_env() {
  GrammarEnv env(exp_alphabet());
  auto lit = GrammarExpr::lit;
  GrammarExpr exp = GrammarExpr::ref("Exp");
  GrammarExpr atom = GrammarExpr::ref("Atom");
  env.define("Exp", GrammarExpr::sum({{"done", atom}, {"add", GrammarExpr::seq({atom, lit("+"), exp})}}));
  env.define("Atom", GrammarExpr::sum({{"num", lit("NUM")}, {"parens", GrammarExpr::seq({lit("("), exp, lit(")")})}}));
  return env;
}

// ------------------------------------------------------------------ trees

struct ExpTree::Node {
  AtomTree atom;
  std::optional<ExpTree> rest;
};

struct AtomTree::Node {
  ExpTree inner;
};

ExpTree ExpTree::done(AtomTree atom) { return ExpTree(std::make_shared<const Node>(Node{std::move(atom), std::nullopt})); }
ExpTree ExpTree::add(AtomTree atom, ExpTree rest) {
  return ExpTree(std::make_shared<const Node>(Node{std::move(atom), std::move(rest)}));
}
bool ExpTree::is_add() const noexcept { return node_->rest.has_value(); }
const AtomTree& ExpTree::atom() const { return node_->atom; }
const ExpTree& ExpTree::rest() const {
  if (!node_->rest) throw ShapeMismatch("done has no rest");
  return *node_->rest;
}
bool operator==(const ExpTree& a, const ExpTree& b) {
  return a.node_ == b.node_ || (a.node_->atom == b.node_->atom && a.node_->rest == b.node_->rest);
}

AtomTree AtomTree::num() { return AtomTree(nullptr); }
AtomTree AtomTree::parens(ExpTree inner) { return AtomTree(std::make_shared<const Node>(Node{std::move(inner)})); }
const ExpTree& AtomTree::inner() const {
  if (!node_) throw ShapeMismatch("num has no inner expression");
  return node_->inner;
}
bool operator==(const AtomTree& a, const AtomTree& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return a.node_->inner == b.node_->inner;
}

namespace {

void append_atom(const AtomTree& a, Word& w);

void append_exp(const ExpTree& e, Word& w) {
  append_atom(e.atom(), w);
  if (e.is_add()) {
    w.push_back("+");
    append_exp(e.rest(), w);
  }
}

void append_atom(const AtomTree& a, Word& w) {
  if (a.is_num()) {
    w.push_back("NUM");
    return;
  }
  w.push_back("(");
  append_exp(a.inner(), w);
  w.push_back(")");
}

ParseTree atom_to_parse(const AtomTree& a) {
  if (a.is_num()) return ParseTree::roll("Atom", ParseTree::inj("num", ParseTree::lit("NUM")));
  return ParseTree::roll(
      "Atom", ParseTree::inj("parens", ParseTree::pair(ParseTree::lit("("),
                                                      ParseTree::pair(exp_to_parse(a.inner()), ParseTree::lit(")")))));
}

}  // namespace

Word exp_yield(const ExpTree& t) {
  Word w;
  append_exp(t, w);
  return w;
}

ParseTree exp_to_parse(const ExpTree& t) {
  ParseTree atom = atom_to_parse(t.atom());
  if (!t.is_add()) return ParseTree::roll("Exp", ParseTree::inj("done", atom));
  return ParseTree::roll(
      "Exp", ParseTree::inj("add", ParseTree::pair(atom, ParseTree::pair(ParseTree::lit("+"), exp_to_parse(t.rest())))));
}

ExpTree parse_to_exp(const ParseTree& t) {
  static const GrammarEnv env = exp_env();
  using Node = std::variant<ExpTree, AtomTree>;
  Algebra<Node> alg;
  alg["Exp"] = [](const Layer<Node>& l) -> Node {
    if (l.tag == "done") return ExpTree::done(std::get<AtomTree>(l.body().result()));
    const auto& p = l.body();  // ( atom , ( '+' , exp ) )
    return ExpTree::add(std::get<AtomTree>(p.left().result()), std::get<ExpTree>(p.right().right().result()));
  };
  alg["Atom"] = [](const Layer<Node>& l) -> Node {
    if (l.tag == "num") return AtomTree::num();
    return AtomTree::parens(std::get<ExpTree>(l.body().right().left().result()));  // ( '(' , ( exp , ')' ) )
  };
  const auto* roll = t.get<parse::Roll>();
  if (!roll || roll->nonterminal != "Exp") throw MalformedTree("expected an Exp parse");
  return std::get<ExpTree>(fold_tree(env, alg, t));
}

// ---------------------------------------------------------------- machine

const char* move_name(LookaheadMove m) {
  switch (m) {
    case LookaheadMove::OLeft: return "O.left";
    case LookaheadMove::ONum: return "O.num";
    case LookaheadMove::OUnexpected: return "O.unexpected";
    case LookaheadMove::DLookAheadRP: return "D.lookAheadRP";
    case LookaheadMove::DLookAheadNot: return "D.lookAheadNot";
    case LookaheadMove::CCloseGood: return "C.closeGood";
    case LookaheadMove::CCloseBad: return "C.closeBad";
    case LookaheadMove::CUnexpected: return "C.unexpected";
    case LookaheadMove::ADoneGood: return "A.doneGood";
    case LookaheadMove::ADoneBad: return "A.doneBad";
    case LookaheadMove::AAdd: return "A.add";
    case LookaheadMove::AUnexpected: return "A.unexpected";
  }
  return "?";
}

namespace {

/// Token consumed by a move that reads exactly one token, else nullptr.
const char* consumed(LookaheadMove m) {
  switch (m) {
    case LookaheadMove::OLeft: return "(";
    case LookaheadMove::ONum: return "NUM";
    case LookaheadMove::CCloseGood: return ")";
    case LookaheadMove::AAdd: return "+";
    default: return nullptr;
  }
}

bool swallows_rest(LookaheadMove m) {
  return m == LookaheadMove::OUnexpected || m == LookaheadMove::CCloseBad || m == LookaheadMove::CUnexpected ||
         m == LookaheadMove::AUnexpected;
}

bool terminal(LookaheadMove m) {
  return swallows_rest(m) || m == LookaheadMove::ADoneGood || m == LookaheadMove::ADoneBad;
}

char state_of(LookaheadMove m) {
  switch (m) {
    case LookaheadMove::OLeft:
    case LookaheadMove::ONum:
    case LookaheadMove::OUnexpected: return 'O';
    case LookaheadMove::DLookAheadRP:
    case LookaheadMove::DLookAheadNot: return 'D';
    case LookaheadMove::CCloseGood:
    case LookaheadMove::CCloseBad:
    case LookaheadMove::CUnexpected: return 'C';
    default: return 'A';
  }
}

bool not_starts_with_lp(const Word& s) { return s.empty() || s[0] == ")" || s[0] == "+"; }
bool not_starts_with_rp(const Word& s) { return s.empty() || s[0] != ")"; }

}  // namespace

Word lookahead_yield(const LookaheadTrace& t) {
  Word w;
  for (const auto& s : t.steps) {
    if (const char* c = consumed(s.move)) w.push_back(c);
    else if (swallows_rest(s.move)) w.insert(w.end(), s.rest.begin(), s.rest.end());
  }
  return w;
}

std::optional<std::size_t> LookaheadTrace::rejected_at() const {
  if (accept) return std::nullopt;
  std::size_t i = 0;
  for (const auto& s : steps) {
    if (terminal(s.move)) return i;
    if (consumed(s.move)) ++i;
  }
  return i;
}

bool lookahead_trace_valid(const LookaheadTrace& t) {
  const Word w = lookahead_yield(t);
  char st = 'O';
  std::size_t n = 0, i = 0;
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    const auto& s = t.steps[k];
    if (state_of(s.move) != st || s.counter != n) return false;
    if (terminal(s.move) != (k + 1 == t.steps.size())) return false;
    const Word suffix(w.begin() + static_cast<std::ptrdiff_t>(i), w.end());
    const bool takes_peek = st == 'D';
    if (!takes_peek && s.peek) return false;
    if (!swallows_rest(s.move) && !s.rest.empty()) return false;
    if (swallows_rest(s.move) && s.rest != suffix) return false;
    switch (s.move) {
      case LookaheadMove::OLeft:
        ++n;
        break;
      case LookaheadMove::ONum:
        st = 'D';
        break;
      case LookaheadMove::OUnexpected:
        if (!not_starts_with_lp(suffix)) return false;
        break;
      case LookaheadMove::DLookAheadRP:
      case LookaheadMove::DLookAheadNot: {
        std::optional<Token> next = suffix.empty() ? std::nullopt : std::optional<Token>(suffix[0]);
        if (s.peek != next) return false;
        const bool rp = next && *next == ")";
        if (rp != (s.move == LookaheadMove::DLookAheadRP)) return false;
        st = rp ? 'C' : 'A';
        break;
      }
      case LookaheadMove::CCloseGood:
        if (n == 0) return false;
        --n;
        st = 'D';
        break;
      case LookaheadMove::CCloseBad:
        if (n != 0 || suffix.empty() || suffix[0] != ")") return false;
        break;
      case LookaheadMove::CUnexpected:
        if (!not_starts_with_rp(suffix)) return false;
        break;
      case LookaheadMove::ADoneGood:
        if (n != 0 || !suffix.empty()) return false;
        break;
      case LookaheadMove::ADoneBad:
        if (n == 0 || !suffix.empty()) return false;
        break;
      case LookaheadMove::AAdd:
        st = 'O';
        break;
      case LookaheadMove::AUnexpected:
        if (suffix.empty() || suffix[0] == "+") return false;
        break;
    }
    if (const char* c = consumed(s.move)) {
      if (i >= w.size() || w[i] != c) return false;
      ++i;
    }
  }
  if (t.steps.empty()) return false;
  return t.accept == (t.steps.back().move == LookaheadMove::ADoneGood);
}

LookaheadTrace run_lookahead(const Word& w) {
  static const Alphabet alphabet = exp_alphabet();
  alphabet.ranks(w);
  LookaheadTrace t;
  char st = 'O';
  std::size_t n = 0, i = 0;
  auto rest = [&] { return Word(w.begin() + static_cast<std::ptrdiff_t>(i), w.end()); };
  auto at = [&](const char* tok) { return i < w.size() && w[i] == tok; };
  while (true) {
    switch (st) {
      case 'O':
        if (at("(")) {
          t.steps.push_back({LookaheadMove::OLeft, n++, std::nullopt, {}});
          ++i;
        } else if (at("NUM")) {
          t.steps.push_back({LookaheadMove::ONum, n, std::nullopt, {}});
          ++i;
          st = 'D';
        } else {
          t.steps.push_back({LookaheadMove::OUnexpected, n, std::nullopt, rest()});
          return t;
        }
        break;
      case 'D': {
        std::optional<Token> peek = i < w.size() ? std::optional<Token>(w[i]) : std::nullopt;
        const bool rp = at(")");
        t.steps.push_back({rp ? LookaheadMove::DLookAheadRP : LookaheadMove::DLookAheadNot, n, peek, {}});
        st = rp ? 'C' : 'A';
        break;
      }
      case 'C':
        if (at(")") && n > 0) {
          t.steps.push_back({LookaheadMove::CCloseGood, n--, std::nullopt, {}});
          ++i;
          st = 'D';
        } else {
          t.steps.push_back({at(")") ? LookaheadMove::CCloseBad : LookaheadMove::CUnexpected, n, std::nullopt, rest()});
          return t;
        }
        break;
      default:
        if (i == w.size()) {
          t.accept = n == 0;
          t.steps.push_back({n == 0 ? LookaheadMove::ADoneGood : LookaheadMove::ADoneBad, n, std::nullopt, {}});
          return t;
        }
        if (at("+")) {
          t.steps.push_back({LookaheadMove::AAdd, n, std::nullopt, {}});
          ++i;
          st = 'O';
        } else {
          t.steps.push_back({LookaheadMove::AUnexpected, n, std::nullopt, rest()});
          return t;
        }
    }
  }
}

// Structural translation. emit_exp(e, n) runs from O(n) through yield(e) and
// stops in D(n) before its peek, because what follows e is decided by the
// context: '+' (inside add), ')' (inside parens) or the end of input.

namespace {

void emit_exp(const ExpTree& e, std::size_t n, std::vector<LookaheadStep>& out);

void emit_atom(const AtomTree& a, std::size_t n, std::vector<LookaheadStep>& out) {
  if (a.is_num()) {
    out.push_back({LookaheadMove::ONum, n, std::nullopt, {}});
    return;
  }
  out.push_back({LookaheadMove::OLeft, n, std::nullopt, {}});
  emit_exp(a.inner(), n + 1, out);
  out.push_back({LookaheadMove::DLookAheadRP, n + 1, Token(")"), {}});
  out.push_back({LookaheadMove::CCloseGood, n + 1, std::nullopt, {}});
}

void emit_exp(const ExpTree& e, std::size_t n, std::vector<LookaheadStep>& out) {
  emit_atom(e.atom(), n, out);
  if (!e.is_add()) return;
  out.push_back({LookaheadMove::DLookAheadNot, n, Token("+"), {}});
  out.push_back({LookaheadMove::AAdd, n, std::nullopt, {}});
  emit_exp(e.rest(), n, out);
}

class MachineReader {
 public:
  explicit MachineReader(const LookaheadTrace& t) : t_(t) {}

  ExpTree run() {
    ExpTree e = exp(0);
    expect(LookaheadMove::DLookAheadNot, 0);
    expect(LookaheadMove::ADoneGood, 0);
    if (pos_ != t_.steps.size()) fail("trailing moves");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw MalformedTrace("not an accepting lookahead trace: " + why + " (move " + std::to_string(pos_) + ")");
  }

  const LookaheadStep* peek() const { return pos_ < t_.steps.size() ? &t_.steps[pos_] : nullptr; }

  const LookaheadStep& expect(LookaheadMove m, std::size_t n) {
    const LookaheadStep* s = peek();
    if (!s || s->move != m || s->counter != n) fail(std::string("expected ") + move_name(m));
    ++pos_;
    return *s;
  }

  ExpTree exp(std::size_t n) {
    AtomTree a = atom(n);
    const LookaheadStep* s = peek();
    if (s && s->move == LookaheadMove::DLookAheadNot && s->peek == Token("+")) {
      ++pos_;
      expect(LookaheadMove::AAdd, n);
      return ExpTree::add(std::move(a), exp(n));
    }
    return ExpTree::done(std::move(a));
  }

  AtomTree atom(std::size_t n) {
    const LookaheadStep* s = peek();
    if (s && s->move == LookaheadMove::ONum && s->counter == n) {
      ++pos_;
      return AtomTree::num();
    }
    expect(LookaheadMove::OLeft, n);
    ExpTree inner = exp(n + 1);
    expect(LookaheadMove::DLookAheadRP, n + 1);
    expect(LookaheadMove::CCloseGood, n + 1);
    return AtomTree::parens(std::move(inner));
  }

  const LookaheadTrace& t_;
  std::size_t pos_ = 0;
};

}  // namespace

LookaheadTrace exp_to_machine(const ExpTree& t) {
  LookaheadTrace tr;
  emit_exp(t, 0, tr.steps);
  tr.steps.push_back({LookaheadMove::DLookAheadNot, 0, std::nullopt, {}});
  tr.steps.push_back({LookaheadMove::ADoneGood, 0, std::nullopt, {}});
  tr.accept = true;
  return tr;
}

ExpTree machine_to_exp(const LookaheadTrace& tr) {
  if (!tr.accept || !lookahead_trace_valid(tr)) throw MalformedTrace("machine_to_exp expects an accepting trace");
  return MachineReader(tr).run();
}

ExpResult parse_exp(const Word& w) {
  ExpResult r{run_lookahead(w), std::nullopt};
  if (r.trace.accept) r.tree = machine_to_exp(r.trace);
  return r;
}

// ---------------------------------------------------------- trace grammar

std::string lookahead_nonterminal(char state, std::size_t n, bool accept) {
  return std::string(1, state) + "_" + std::to_string(n) + (accept ? "_true" : "_false");
}

namespace {

const char* kNotLP = "NotStartsWithLP";
const char* kNotRP = "NotStartsWithRP";

GrammarExpr one_of(std::initializer_list<std::pair<const char*, const char*>> tagged) {
  std::vector<Branch> br;
  for (const auto& [tag, tok] : tagged) br.emplace_back(tag, GrammarExpr::lit(tok));
  return GrammarExpr::sum(std::move(br));
}

}  // namespace

GrammarEnv lookahead_grammar(std::size_t bound) {
  GrammarEnv env(exp_alphabet());
  auto lit = GrammarExpr::lit;
  auto ref = [](char s, std::size_t n, bool b) { return GrammarExpr::ref(lookahead_nonterminal(s, n, b)); };
  GrammarExpr top = GrammarExpr::top();
  env.define(kNotLP, GrammarExpr::sum({{"empty", GrammarExpr::eps()},
                                       {"rest", GrammarExpr::tensor(one_of({{"rp", ")"}, {"plus", "+"}}), top)}}));
  env.define(kNotRP,
             GrammarExpr::sum({{"empty", GrammarExpr::eps()},
                               {"rest", GrammarExpr::tensor(one_of({{"lp", "("}, {"plus", "+"}, {"num", "NUM"}}), top)}}));
  for (std::size_t n = 0; n <= bound; ++n)
    for (bool b : {true, false}) {
      std::vector<Branch> o, d, c, a;
      if (n < bound) o.emplace_back("left", GrammarExpr::tensor(lit("("), ref('O', n + 1, b)));
      o.emplace_back("num", GrammarExpr::tensor(lit("NUM"), ref('D', n, b)));
      if (!b) o.emplace_back("unexpected", GrammarExpr::ref(kNotLP));

      d.emplace_back("lookAheadRP",
                     GrammarExpr::with({{"peek", GrammarExpr::tensor(lit(")"), top)}, {"trace", ref('C', n, b)}}));
      d.emplace_back("lookAheadNot", GrammarExpr::with({{"peek", GrammarExpr::ref(kNotRP)}, {"trace", ref('A', n, b)}}));

      if (n > 0) c.emplace_back("closeGood", GrammarExpr::tensor(lit(")"), ref('D', n - 1, b)));
      if (n == 0 && !b) c.emplace_back("closeBad", GrammarExpr::tensor(lit(")"), top));
      if (!b) c.emplace_back("unexpected", GrammarExpr::ref(kNotRP));

      if (n == 0 && b) a.emplace_back("doneGood", GrammarExpr::eps());
      if (n > 0 && !b) a.emplace_back("doneBad", GrammarExpr::eps());
      a.emplace_back("add", GrammarExpr::tensor(lit("+"), ref('O', n, b)));
      if (!b) a.emplace_back("unexpected", GrammarExpr::tensor(one_of({{"lp", "("}, {"rp", ")"}, {"num", "NUM"}}), top));

      env.define(lookahead_nonterminal('O', n, b), GrammarExpr::sum(std::move(o)));
      env.define(lookahead_nonterminal('D', n, b), GrammarExpr::sum(std::move(d)));
      env.define(lookahead_nonterminal('C', n, b), GrammarExpr::sum(std::move(c)));
      env.define(lookahead_nonterminal('A', n, b), GrammarExpr::sum(std::move(a)));
    }
  return env;
}

namespace {

ParseTree top_of(Word w) { return ParseTree::tuple({}, std::move(w)); }

Word tail(const Word& w) { return Word(w.begin() + 1, w.end()); }

ParseTree first_token(const Word& s, std::initializer_list<std::pair<const char*, const char*>> tagged) {
  for (const auto& [tag, tok] : tagged)
    if (s[0] == tok) return ParseTree::pair(ParseTree::inj(tag, ParseTree::lit(s[0])), top_of(tail(s)));
  throw MalformedTrace("unexpected leading token '" + s[0] + "'");
}

ParseTree not_lp(const Word& s) {
  if (s.empty()) return ParseTree::roll(kNotLP, ParseTree::inj("empty", ParseTree::eps()));
  return ParseTree::roll(kNotLP, ParseTree::inj("rest", first_token(s, {{"rp", ")"}, {"plus", "+"}})));
}

ParseTree not_rp(const Word& s) {
  if (s.empty()) return ParseTree::roll(kNotRP, ParseTree::inj("empty", ParseTree::eps()));
  return ParseTree::roll(kNotRP, ParseTree::inj("rest", first_token(s, {{"lp", "("}, {"plus", "+"}, {"num", "NUM"}})));
}

}  // namespace

ParseTree lookahead_trace_to_tree(const LookaheadTrace& t) {
  if (!lookahead_trace_valid(t)) throw MalformedTrace("invalid lookahead trace");
  const Word w = lookahead_yield(t);
  const bool b = t.accept;
  std::vector<std::size_t> pos(t.steps.size());
  for (std::size_t k = 0, i = 0; k < t.steps.size(); ++k) {
    pos[k] = i;
    if (consumed(t.steps[k].move)) ++i;
  }
  std::optional<ParseTree> next;
  for (std::size_t k = t.steps.size(); k-- > 0;) {
    const auto& s = t.steps[k];
    const Word suffix(w.begin() + static_cast<std::ptrdiff_t>(pos[k]), w.end());
    const std::string nt = lookahead_nonterminal(state_of(s.move), s.counter, b);
    auto roll = [&](const char* tag, ParseTree body) { return ParseTree::roll(nt, ParseTree::inj(tag, std::move(body))); };
    auto step = [&](const char* tag) {
      return roll(tag, ParseTree::pair(ParseTree::lit(consumed(s.move)), *next));
    };
    switch (s.move) {
      case LookaheadMove::OLeft: next = step("left"); break;
      case LookaheadMove::ONum: next = step("num"); break;
      case LookaheadMove::OUnexpected: next = roll("unexpected", not_lp(s.rest)); break;
      case LookaheadMove::DLookAheadRP:
        next = roll("lookAheadRP",
                    ParseTree::tuple({{"peek", ParseTree::pair(ParseTree::lit(")"), top_of(tail(suffix)))},
                                      {"trace", *next}},
                                     suffix));
        break;
      case LookaheadMove::DLookAheadNot:
        next = roll("lookAheadNot", ParseTree::tuple({{"peek", not_rp(suffix)}, {"trace", *next}}, suffix));
        break;
      case LookaheadMove::CCloseGood: next = step("closeGood"); break;
      case LookaheadMove::CCloseBad:
        next = roll("closeBad", ParseTree::pair(ParseTree::lit(")"), top_of(tail(s.rest))));
        break;
      case LookaheadMove::CUnexpected: next = roll("unexpected", not_rp(s.rest)); break;
      case LookaheadMove::ADoneGood: next = roll("doneGood", ParseTree::eps()); break;
      case LookaheadMove::ADoneBad: next = roll("doneBad", ParseTree::eps()); break;
      case LookaheadMove::AAdd: next = step("add"); break;
      case LookaheadMove::AUnexpected:
        next = roll("unexpected", first_token(s.rest, {{"lp", "("}, {"rp", ")"}, {"num", "NUM"}}));
        break;
    }
  }
  return *next;
}

LookaheadTrace tree_to_lookahead_trace(const ParseTree& t) {
  auto bad = [](const std::string& why) { return MalformedTree("not a lookahead trace parse: " + why); };
  LookaheadTrace out;
  ParseTree cur = t;
  bool first = true;
  while (true) {
    const auto* roll = cur.get<parse::Roll>();
    const auto* inj = roll ? roll->body.get<parse::Inj>() : nullptr;
    if (!inj) throw bad("expected a state constructor");
    const std::string& nt = roll->nonterminal;
    std::size_t n = 0;
    const auto u1 = nt.find('_'), u2 = nt.rfind('_');
    if (nt.size() < 5 || u1 != 1 || u2 == u1 ||
        std::from_chars(nt.data() + 2, nt.data() + u2, n).ptr != nt.data() + u2)
      throw bad("unknown nonterminal " + nt);
    if (first) {
      out.accept = nt.substr(u2) == "_true";
      first = false;
    }
    const char st = nt[0];
    const std::string& tag = inj->tag;
    auto move = [&]() -> std::optional<LookaheadMove> {
      if (st == 'O') return tag == "left" ? LookaheadMove::OLeft : tag == "num" ? LookaheadMove::ONum
                          : tag == "unexpected" ? std::optional(LookaheadMove::OUnexpected) : std::nullopt;
      if (st == 'D') return tag == "lookAheadRP" ? LookaheadMove::DLookAheadRP
                          : tag == "lookAheadNot" ? std::optional(LookaheadMove::DLookAheadNot) : std::nullopt;
      if (st == 'C') return tag == "closeGood" ? LookaheadMove::CCloseGood : tag == "closeBad" ? LookaheadMove::CCloseBad
                          : tag == "unexpected" ? std::optional(LookaheadMove::CUnexpected) : std::nullopt;
      if (st == 'A') return tag == "doneGood" ? LookaheadMove::ADoneGood : tag == "doneBad" ? LookaheadMove::ADoneBad
                          : tag == "add" ? LookaheadMove::AAdd
                          : tag == "unexpected" ? std::optional(LookaheadMove::AUnexpected) : std::nullopt;
      return std::nullopt;
    }();
    if (!move) throw bad("unknown constructor " + std::string(1, st) + "." + tag);
    LookaheadStep step{*move, n, std::nullopt, {}};
    if (consumed(*move)) {
      const auto* pair = inj->body.get<parse::Pair>();
      if (!pair) throw bad("expected a token then a trace");
      out.steps.push_back(step);
      cur = pair->right;
    } else if (st == 'D') {
      const auto* tup = inj->body.get<parse::Tuple>();
      if (!tup || tup->entries.size() != 2) throw bad("expected lookahead evidence paired with a trace");
      if (!tup->yield.empty()) step.peek = tup->yield.front();
      out.steps.push_back(step);
      cur = tup->entries[1].second;
    } else {
      if (swallows_rest(*move)) step.rest = yield_of(inj->body);
      out.steps.push_back(step);
      break;
    }
  }
  if (!lookahead_trace_valid(out) || !(lookahead_trace_to_tree(out) == t)) throw bad("does not replay");
  return out;
}

Parser lookahead_parser() {
  return Parser{"run_lookahead", GrammarExpr::ref(lookahead_nonterminal('O', 0, true)),
                GrammarExpr::ref(lookahead_nonterminal('O', 0, false)), [](const Word& w) {
                  LookaheadTrace t = run_lookahead(w);
                  return ParserResult{t.accept, lookahead_trace_to_tree(t)};
                }};
}

Transformer machine_to_exp_transformer() {
  return Transformer{"machine_to_exp", GrammarExpr::ref(lookahead_nonterminal('O', 0, true)), GrammarExpr::ref("Exp"),
                     [](const ParseTree& t) { return exp_to_parse(machine_to_exp(tree_to_lookahead_trace(t))); }};
}

Transformer exp_to_machine_transformer() {
  return Transformer{"exp_to_machine", GrammarExpr::ref("Exp"), GrammarExpr::ref(lookahead_nonterminal('O', 0, true)),
                     [](const ParseTree& t) { return lookahead_trace_to_tree(exp_to_machine(parse_to_exp(t))); }};
}

Parser exp_parser() {
  return extend_parser(machine_to_exp_transformer(), exp_to_machine_transformer(), lookahead_parser());
}

}  // namespace lambekd
