#include "lambekd/nfa.hpp"

#include <charconv>

namespace lambekd {

void validate_nfa(const Nfa& n) {
  auto in_range = [&](State s) { return s < n.states; };
  if (!in_range(n.init)) throw ConfigError("NFA init state out of range");
  if (n.accepting.size() != n.states) throw ConfigError("NFA acceptance vector has the wrong size");
  for (std::size_t i = 0; i < n.transitions.size(); ++i) {
    const auto& t = n.transitions[i];
    if (t.id != i) throw ConfigError("NFA transition ids are not dense");
    if (!in_range(t.src) || !in_range(t.dst)) throw ConfigError("NFA transition endpoint out of range");
    if (!n.alphabet.contains(t.label)) throw ConfigError("NFA transition label '" + t.label + "' not in alphabet");
  }
  for (std::size_t i = 0; i < n.eps.size(); ++i) {
    const auto& e = n.eps[i];
    if (e.id != i) throw ConfigError("NFA ε-transition ids are not dense");
    if (!in_range(e.src) || !in_range(e.dst)) throw ConfigError("NFA ε-transition endpoint out of range");
  }
}

State trace_end(const Nfa& n, const NfaTrace& tr) {
  if (tr.start >= n.states) throw MalformedTrace("trace starts outside the machine");
  State cur = tr.start;
  for (const auto& step : tr.steps) {
    State src, dst;
    if (step.epsilon) {
      if (step.id >= n.eps.size()) throw MalformedTrace("unknown ε-transition " + std::to_string(step.id));
      src = n.eps[step.id].src;
      dst = n.eps[step.id].dst;
    } else {
      if (step.id >= n.transitions.size()) throw MalformedTrace("unknown transition " + std::to_string(step.id));
      src = n.transitions[step.id].src;
      dst = n.transitions[step.id].dst;
    }
    if (src != cur)
      throw MalformedTrace("step leaves state " + std::to_string(src) + " but the trace is at " + std::to_string(cur));
    cur = dst;
  }
  return cur;
}

Word trace_yield(const Nfa& n, const NfaTrace& tr) {
  Word w;
  for (const auto& step : tr.steps)
    if (!step.epsilon) w.push_back(n.transitions.at(step.id).label);
  return w;
}

bool trace_valid(const Nfa& n, const NfaTrace& tr) {
  try {
    return n.is_accepting(trace_end(n, tr));
  } catch (const MalformedTrace&) {
    return false;
  }
}

// ------------------------------------------------------------ enumeration

namespace {

class TraceSearch {
 public:
  TraceSearch(const Nfa& n, const Word& w) : n_(n), sym_(n.alphabet.ranks(w)), len_(w.size()) {
    out_.resize(n.states);
    eps_out_.resize(n.states);
    for (const auto& t : n.transitions) out_[t.src].push_back(t.id);
    for (const auto& e : n.eps) eps_out_[e.src].push_back(e.id);
    label_.reserve(n.transitions.size());
    for (const auto& t : n.transitions) label_.push_back(n.alphabet.rank(t.label));

    // can_[i][q]: some accepting trace from q reads exactly w[i..].
    can_.assign(len_ + 1, std::vector<char>(n.states, 0));
    for (std::size_t i = len_ + 1; i-- > 0;) {
      auto& row = can_[i];
      for (State q = 0; q < n.states; ++q) {
        if (i == len_ && n.accepting[q]) row[q] = 1;
        if (i < len_)
          for (std::size_t id : out_[q])
            if (label_[id] == sym_[i] && can_[i + 1][n.transitions[id].dst]) row[q] = 1;
      }
      for (bool changed = true; changed;) {
        changed = false;
        for (const auto& e : n.eps)
          if (row[e.dst] && !row[e.src]) row[e.src] = changed = true;
      }
    }
    on_path_.assign(len_ + 1, std::vector<char>(n.states, 0));
  }

  std::vector<NfaTrace> run(State s) {
    start_ = s;
    visit(s, 0);
    return std::move(found_);
  }

 private:
  void visit(State q, std::size_t i) {
    if (!can_[i][q]) return;
    on_path_[i][q] = 1;
    if (i == len_ && n_.accepting[q]) found_.push_back(NfaTrace{start_, path_});
    if (i < len_)
      for (std::size_t id : out_[q]) {
        const auto& t = n_.transitions[id];
        if (label_[id] != sym_[i] || !can_[i + 1][t.dst]) continue;
        path_.push_back({false, id});
        visit(t.dst, i + 1);
        path_.pop_back();
      }
    for (std::size_t id : eps_out_[q]) {
      const auto& e = n_.eps[id];
      if (!can_[i][e.dst]) continue;
      if (on_path_[i][e.dst])
        throw InfiniteTraceSet("ε-cycle through state " + std::to_string(e.dst) + " can be pumped before position " +
                               std::to_string(i));
      path_.push_back({true, id});
      visit(e.dst, i);
      path_.pop_back();
    }
    on_path_[i][q] = 0;
  }

  const Nfa& n_;
  std::vector<std::size_t> sym_;
  std::size_t len_;
  std::vector<std::vector<std::size_t>> out_, eps_out_;
  std::vector<std::size_t> label_;
  std::vector<std::vector<char>> can_, on_path_;
  State start_ = 0;
  std::vector<TraceStep> path_;
  std::vector<NfaTrace> found_;
};

}  // namespace

std::vector<NfaTrace> enumerate_traces(const Nfa& n, State s, const Word& w) {
  if (s >= n.states) throw ConfigError("start state out of range");
  return TraceSearch(n, w).run(s);
}

Nfa fixture_nfa() {
  Nfa n;
  n.alphabet = Alphabet({"a", "b", "c"});
  n.states = 3;
  n.init = 0;
  n.accepting = {false, false, true};
  n.transitions = {{0, 1, "a", 1}, {1, 1, "b", 2}, {2, 0, "c", 2}};
  n.eps = {{0, 0, 1}};
  return n;
}

// ---------------------------------------------------------------- Thompson
//
// Every sub-expression compiles to a fragment with one entry state s and one
// exit state e; e has no outgoing edges until an enclosing fragment adds them.
//
//   'c'      s --c--> e
//   eps      s --ε--> e
//   empty    s        e          (no edges, so no trace crosses it)
//   l | r    s --ε--> l.s,  s --ε--> r.s,  l.e --ε--> e,  r.e --ε--> e      (fresh s, e)
//   l r      l.e --ε--> r.s;  s = l.s, e = r.e
//   b*       s --ε--> e (skip),  s --ε--> b.s (enter),  b.e --ε--> s (loop back)  (fresh s, e)
//
// Only the exit of the whole expression accepts. Each sum choice, split and
// star iteration of a regex parse corresponds to exactly one ε-edge pattern,
// which is what makes the trace translations below bijective.

namespace {

struct Frag {
  Regex::Kind kind = Regex::Kind::Eps;
  State s = 0, e = 0;
  std::size_t a = 0, b = 0, c = 0, d = 0;  // edge ids, meaning per kind as in the table above
  std::size_t left = 0, right = 0;         // child fragment indices
  Token token;
  std::string star;
};

struct Layout {
  Nfa nfa;
  std::vector<Frag> frags;
  std::size_t stars = 0;

  State fresh() {
    nfa.accepting.push_back(false);
    return nfa.states++;
  }
  std::size_t eps(State src, State dst) {
    nfa.eps.push_back({nfa.eps.size(), src, dst});
    return nfa.eps.size() - 1;
  }

  std::size_t build(const Regex& r) {
    const std::size_t idx = frags.size();
    frags.emplace_back();
    frags.back().kind = r.kind();
    switch (r.kind()) {
      case Regex::Kind::Lit: {
        nfa.alphabet.rank(r.token());
        State s = fresh(), e = fresh();
        nfa.transitions.push_back({nfa.transitions.size(), s, r.token(), e});
        frags[idx].s = s;
        frags[idx].e = e;
        frags[idx].a = nfa.transitions.size() - 1;
        frags[idx].token = r.token();
        break;
      }
      case Regex::Kind::Eps: {
        State s = fresh(), e = fresh();
        frags[idx].s = s;
        frags[idx].e = e;
        frags[idx].a = eps(s, e);
        break;
      }
      case Regex::Kind::Empty: {
        State s = fresh(), e = fresh();
        frags[idx].s = s;
        frags[idx].e = e;
        break;
      }
      case Regex::Kind::Union: {
        State s = fresh();
        std::size_t l = build(r.left());
        std::size_t rr = build(r.right());
        State e = fresh();
        Frag& f = frags[idx];
        f.s = s;
        f.e = e;
        f.left = l;
        f.right = rr;
        f.a = eps(s, frags[l].s);
        f.b = eps(s, frags[rr].s);
        f.c = eps(frags[l].e, e);
        f.d = eps(frags[rr].e, e);
        break;
      }
      case Regex::Kind::Concat: {
        std::size_t l = build(r.left());
        std::size_t rr = build(r.right());
        Frag& f = frags[idx];
        f.left = l;
        f.right = rr;
        f.s = frags[l].s;
        f.e = frags[rr].e;
        f.a = eps(frags[l].e, frags[rr].s);
        break;
      }
      case Regex::Kind::Star: {
        State s = fresh();
        std::string name = star_name(stars++);
        std::size_t body = build(r.body());
        State e = fresh();
        Frag& f = frags[idx];
        f.s = s;
        f.e = e;
        f.left = body;
        f.star = std::move(name);
        f.a = eps(s, e);
        f.b = eps(s, frags[body].s);
        f.c = eps(frags[body].e, s);
        break;
      }
    }
    return idx;
  }
};

Layout layout(const Regex& r, const Alphabet& alphabet) {
  Layout l;
  l.nfa.alphabet = alphabet;
  l.build(r);
  l.nfa.init = l.frags[0].s;
  l.nfa.accepting[l.frags[0].e] = true;
  return l;
}

// Regex parse trees only ever contain tokens of the regex, so any alphabet
// containing them produces the same layout.
Layout layout(const Regex& r) { return layout(r, default_alphabet(r)); }

class ToTrace {
 public:
  explicit ToTrace(const Layout& l) : l_(l) {}

  std::vector<TraceStep> run(const ParseTree& t) {
    emit(0, t);
    return std::move(steps_);
  }

 private:
  [[noreturn]] static void bad(const std::string& why, const ParseTree& t) {
    throw MalformedTree("not a regex parse: " + why + " at " + to_string(t));
  }

  void emit(std::size_t idx, const ParseTree& t) {
    const Frag& f = l_.frags[idx];
    switch (f.kind) {
      case Regex::Kind::Lit: {
        const auto* leaf = t.get<parse::LitLeaf>();
        if (!leaf || leaf->token != f.token) bad("expected literal '" + f.token + "'", t);
        steps_.push_back({false, f.a});
        return;
      }
      case Regex::Kind::Eps:
        if (!t.get<parse::EpsLeaf>()) bad("expected the unit", t);
        steps_.push_back({true, f.a});
        return;
      case Regex::Kind::Empty:
        bad("the empty regex has no parses", t);
      case Regex::Kind::Union: {
        const auto* inj = t.get<parse::Inj>();
        if (!inj || (inj->tag != "inl" && inj->tag != "inr")) bad("expected inl/inr", t);
        const bool left = inj->tag == "inl";
        steps_.push_back({true, left ? f.a : f.b});
        emit(left ? f.left : f.right, inj->body);
        steps_.push_back({true, left ? f.c : f.d});
        return;
      }
      case Regex::Kind::Concat: {
        const auto* pair = t.get<parse::Pair>();
        if (!pair) bad("expected a pair", t);
        emit(f.left, pair->left);
        steps_.push_back({true, f.a});
        emit(f.right, pair->right);
        return;
      }
      case Regex::Kind::Star: {
        ParseTree cur = t;
        while (true) {
          const auto* roll = cur.get<parse::Roll>();
          if (!roll || roll->nonterminal != f.star) bad("expected a roll of " + f.star, cur);
          const auto* inj = roll->body.get<parse::Inj>();
          if (inj && inj->tag == "nil" && inj->body.get<parse::EpsLeaf>()) {
            steps_.push_back({true, f.a});
            return;
          }
          const auto* pair = inj && inj->tag == "cons" ? inj->body.get<parse::Pair>() : nullptr;
          if (!pair) bad("expected nil or cons", cur);
          steps_.push_back({true, f.b});
          emit(f.left, pair->left);
          steps_.push_back({true, f.c});
          cur = pair->right;
        }
      }
    }
  }

  const Layout& l_;
  std::vector<TraceStep> steps_;
};

class FromTrace {
 public:
  FromTrace(const Layout& l, const NfaTrace& tr) : l_(l), tr_(tr) {}

  ParseTree run() {
    if (tr_.start != l_.nfa.init) fail("trace does not start at the initial state");
    ParseTree t = decode(0);
    if (pos_ != tr_.steps.size()) fail("trace continues past the accepting state");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw MalformedTrace("not a Thompson trace: " + why + " (step " + std::to_string(pos_) + ")");
  }

  bool next_is(bool epsilon, std::size_t id) const {
    return pos_ < tr_.steps.size() && tr_.steps[pos_].epsilon == epsilon && tr_.steps[pos_].id == id;
  }
  void expect(bool epsilon, std::size_t id) {
    if (!next_is(epsilon, id)) fail("unexpected step");
    ++pos_;
  }

  ParseTree decode(std::size_t idx) {
    const Frag& f = l_.frags[idx];
    switch (f.kind) {
      case Regex::Kind::Lit:
        expect(false, f.a);
        return ParseTree::lit(f.token);
      case Regex::Kind::Eps:
        expect(true, f.a);
        return ParseTree::eps();
      case Regex::Kind::Empty:
        fail("no trace crosses the empty regex");
      case Regex::Kind::Union:
        if (next_is(true, f.a)) {
          ++pos_;
          ParseTree body = decode(f.left);
          expect(true, f.c);
          return ParseTree::inj("inl", body);
        } else {
          expect(true, f.b);
          ParseTree body = decode(f.right);
          expect(true, f.d);
          return ParseTree::inj("inr", body);
        }
      case Regex::Kind::Concat: {
        ParseTree left = decode(f.left);
        expect(true, f.a);
        ParseTree right = decode(f.right);
        return ParseTree::pair(left, right);
      }
      case Regex::Kind::Star: {
        std::vector<ParseTree> items;
        while (next_is(true, f.b)) {
          ++pos_;
          items.push_back(decode(f.left));
          expect(true, f.c);
        }
        expect(true, f.a);
        ParseTree acc = ParseTree::roll(f.star, ParseTree::inj("nil", ParseTree::eps()));
        for (auto it = items.rbegin(); it != items.rend(); ++it)
          acc = ParseTree::roll(f.star, ParseTree::inj("cons", ParseTree::pair(*it, acc)));
        return acc;
      }
    }
    fail("unreachable");
  }

  const Layout& l_;
  const NfaTrace& tr_;
  std::size_t pos_ = 0;
};

}  // namespace

Nfa thompson(const Regex& r, const Alphabet& alphabet) { return layout(r, alphabet).nfa; }

NfaTrace regex_parse_to_trace(const Regex& r, const ParseTree& t) {
  yield_of(t);  // rejects inconsistent splits
  Layout l = layout(r);
  return NfaTrace{l.nfa.init, ToTrace(l).run(t)};
}

ParseTree trace_to_regex_parse(const Regex& r, const NfaTrace& tr) {
  Layout l = layout(r);
  return FromTrace(l, tr).run();
}

// ---------------------------------------------------------- trace grammar

std::string nfa_trace_nonterminal(State s) { return "Trace_" + std::to_string(s); }

GrammarEnv nfa_trace_grammar(const Nfa& n) {
  GrammarEnv env(n.alphabet);
  for (State q = 0; q < n.states; ++q) {
    std::vector<Branch> branches;
    if (n.accepting[q]) branches.emplace_back("nil", GrammarExpr::eps());
    for (const auto& t : n.transitions)
      if (t.src == q)
        branches.emplace_back("cons" + std::to_string(t.id),
                              GrammarExpr::tensor(GrammarExpr::lit(t.label), GrammarExpr::ref(nfa_trace_nonterminal(t.dst))));
    for (const auto& e : n.eps)
      if (e.src == q) branches.emplace_back("eps" + std::to_string(e.id), GrammarExpr::ref(nfa_trace_nonterminal(e.dst)));
    env.define(nfa_trace_nonterminal(q), GrammarExpr::sum(std::move(branches)));
  }
  return env;
}

ParseTree nfa_trace_to_tree(const Nfa& n, const NfaTrace& tr) {
  State end = trace_end(n, tr);
  if (!n.is_accepting(end)) throw MalformedTrace("trace ends at non-accepting state " + std::to_string(end));
  ParseTree acc = ParseTree::roll(nfa_trace_nonterminal(end), ParseTree::inj("nil", ParseTree::eps()));
  for (auto it = tr.steps.rbegin(); it != tr.steps.rend(); ++it) {
    if (it->epsilon) {
      const auto& e = n.eps[it->id];
      acc = ParseTree::roll(nfa_trace_nonterminal(e.src), ParseTree::inj("eps" + std::to_string(e.id), acc));
    } else {
      const auto& t = n.transitions[it->id];
      acc = ParseTree::roll(nfa_trace_nonterminal(t.src),
                            ParseTree::inj("cons" + std::to_string(t.id), ParseTree::pair(ParseTree::lit(t.label), acc)));
    }
  }
  return acc;
}

namespace {

std::optional<std::size_t> number_after(const std::string& s, std::string_view prefix) {
  if (s.size() <= prefix.size() || s.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data() + prefix.size(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

NfaTrace tree_to_nfa_trace(const Nfa& n, const ParseTree& t) {
  auto bad = [&](const std::string& why) -> MalformedTree {
    return MalformedTree("not an NFA trace parse: " + why);
  };
  NfaTrace tr;
  ParseTree cur = t;
  bool first = true;
  State q = 0;
  while (true) {
    const auto* roll = cur.get<parse::Roll>();
    if (!roll) throw bad("expected a roll");
    auto s = number_after(roll->nonterminal, "Trace_");
    if (!s || *s >= n.states) throw bad("unknown nonterminal " + roll->nonterminal);
    if (first) {
      tr.start = q = *s;
      first = false;
    } else if (*s != q) {
      throw bad("trace jumps to state " + std::to_string(*s));
    }
    const auto* inj = roll->body.get<parse::Inj>();
    if (!inj) throw bad("expected a constructor tag");
    if (inj->tag == "nil") {
      if (!n.is_accepting(q) || !inj->body.get<parse::EpsLeaf>()) throw bad("nil at a non-accepting state");
      return tr;
    }
    if (auto id = number_after(inj->tag, "cons")) {
      const auto* pair = inj->body.get<parse::Pair>();
      if (*id >= n.transitions.size() || n.transitions[*id].src != q || !pair) throw bad("bad cons step");
      const auto* leaf = pair->left.get<parse::LitLeaf>();
      if (!leaf || leaf->token != n.transitions[*id].label) throw bad("cons label mismatch");
      tr.steps.push_back({false, *id});
      q = n.transitions[*id].dst;
      cur = pair->right;
    } else if (auto eid = number_after(inj->tag, "eps")) {
      if (*eid >= n.eps.size() || n.eps[*eid].src != q) throw bad("bad ε step");
      tr.steps.push_back({true, *eid});
      q = n.eps[*eid].dst;
      cur = inj->body;
    } else {
      throw bad("unknown tag " + inj->tag);
    }
  }
}

}  // namespace lambekd
