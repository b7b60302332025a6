#include "lambekd/dfa.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <limits>
#include <map>

namespace lambekd {

void validate_dfa(const Dfa& d) {
  if (d.init >= d.states) throw ConfigError("DFA init state out of range");
  if (d.accepting.size() != d.states || d.delta.size() != d.states) throw ConfigError("DFA tables have the wrong size");
  for (const auto& row : d.delta) {
    if (row.size() != d.alphabet.size()) throw ConfigError("DFA transition function is not total");
    for (State t : row)
      if (t >= d.states) throw ConfigError("DFA transition target out of range");
  }
  if (d.subsets && d.subsets->size() != d.states) throw ConfigError("DFA subset table has the wrong size");
}

bool dfa_trace_valid(const Dfa& d, const DfaTrace& t) {
  if (t.last >= d.states) return false;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& s = t.steps[i];
    if (s.from >= d.states || !d.alphabet.contains(s.label)) return false;
    State next = i + 1 < t.steps.size() ? t.steps[i + 1].from : t.last;
    if (d.step(s.from, s.label) != next) return false;
  }
  return t.accept == d.is_accepting(t.last);
}

DfaTrace parse_d(const Dfa& d, State s, const Word& w) {
  auto ranks = d.alphabet.ranks(w);
  DfaTrace t;
  t.steps.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    t.steps.push_back({w[i], s});
    s = d.delta[s][ranks[i]];
  }
  t.last = s;
  t.accept = d.is_accepting(s);
  return t;
}

Word print_d(const DfaTrace& t) {
  Word w;
  w.reserve(t.steps.size());
  for (const auto& s : t.steps) w.push_back(s.label);
  return w;
}

StateSet eps_closure(const Nfa& n, const StateSet& xs) {
  std::vector<char> in(n.states, 0);
  std::vector<State> stack;
  for (State s : xs) {
    if (s >= n.states) throw ConfigError("state out of range");
    if (!in[s]) {
      in[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    for (const auto& e : n.eps)
      if (e.src == s && !in[e.dst]) {
        in[e.dst] = 1;
        stack.push_back(e.dst);
      }
  }
  StateSet out;
  for (State s = 0; s < n.states; ++s)
    if (in[s]) out.push_back(s);
  return out;
}

namespace {

StateSet successors(const Nfa& n, const StateSet& xs, const Token& c) {
  StateSet out;
  for (const auto& t : n.transitions)
    if (t.label == c && std::binary_search(xs.begin(), xs.end(), t.src)) out.push_back(t.dst);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool contains_accepting(const Nfa& n, const StateSet& xs) {
  return std::any_of(xs.begin(), xs.end(), [&](State s) { return n.is_accepting(s); });
}

}  // namespace

Dfa determinize(const Nfa& n, bool full_powerset) {
  validate_nfa(n);
  Dfa d;
  d.alphabet = n.alphabet;
  std::vector<StateSet> subsets;
  std::map<StateSet, State> index;

  if (full_powerset) {
    if (n.states > 20) throw ConfigError("full powerset construction limited to 20 NFA states");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n.states); ++mask) {
      StateSet xs;
      for (State s = 0; s < n.states; ++s)
        if (mask >> s & 1) xs.push_back(s);
      if (eps_closure(n, xs) != xs) continue;
      index.emplace(xs, subsets.size());
      subsets.push_back(std::move(xs));
    }
  } else {
    std::deque<StateSet> work;
    StateSet start = eps_closure(n, {n.init});
    index.emplace(start, 0);
    subsets.push_back(start);
    work.push_back(start);
    while (!work.empty()) {
      StateSet xs = std::move(work.front());
      work.pop_front();
      for (const auto& c : n.alphabet.symbols()) {
        StateSet ys = eps_closure(n, successors(n, xs, c));
        if (index.emplace(ys, subsets.size()).second) {
          subsets.push_back(ys);
          work.push_back(std::move(ys));
        }
      }
    }
  }

  d.states = subsets.size();
  d.init = index.at(eps_closure(n, {n.init}));
  d.accepting.resize(d.states);
  d.delta.assign(d.states, std::vector<State>(n.alphabet.size()));
  for (State x = 0; x < d.states; ++x) {
    d.accepting[x] = contains_accepting(n, subsets[x]);
    for (std::size_t c = 0; c < n.alphabet.size(); ++c)
      d.delta[x][c] = index.at(eps_closure(n, successors(n, subsets[x], n.alphabet[c])));
  }
  d.subsets = std::move(subsets);
  return d;
}

namespace {

const StateSet& subset_of(const Dfa& d, State x) {
  if (!d.subsets) throw ConfigError("DFA was not produced by determinization");
  return d.subsets->at(x);
}

bool member(const StateSet& xs, State s) { return std::binary_search(xs.begin(), xs.end(), s); }

/// Shortest ε-paths between all pairs, ties broken towards smaller ε-ids.
class EpsPaths {
 public:
  explicit EpsPaths(const Nfa& n) : n_(n), dist_(n.states), via_(n.states) {
    constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
    for (State src = 0; src < n.states; ++src) {
      auto& dist = dist_[src];
      auto& via = via_[src];
      dist.assign(n.states, inf);
      via.assign(n.states, 0);
      dist[src] = 0;
      std::deque<State> queue{src};
      while (!queue.empty()) {
        State q = queue.front();
        queue.pop_front();
        for (const auto& e : n.eps)
          if (e.src == q && dist[e.dst] == inf) {
            dist[e.dst] = dist[q] + 1;
            via[e.dst] = e.id;
            queue.push_back(e.dst);
          }
      }
    }
  }

  bool reaches(State from, State to) const { return dist_[from][to] != std::numeric_limits<std::size_t>::max(); }
  std::size_t distance(State from, State to) const { return dist_[from][to]; }

  std::vector<TraceStep> path(State from, State to) const {
    std::vector<TraceStep> out;
    for (State q = to; q != from;) {
      std::size_t id = via_[from][q];
      out.push_back({true, id});
      q = n_.eps[id].src;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  const Nfa& n_;
  std::vector<std::vector<std::size_t>> dist_;
  std::vector<std::vector<std::size_t>> via_;
};

}  // namespace

DfaTrace n_to_d(const Nfa& n, const Dfa& d, const NfaTrace& tr, State x) {
  if (!member(subset_of(d, x), tr.start))
    throw MembershipViolation("NFA state " + std::to_string(tr.start) + " is not in DFA state " + std::to_string(x));
  if (!trace_valid(n, tr)) throw MalformedTrace("n_to_d expects an accepting NFA trace");
  DfaTrace out;
  State q = tr.start;
  for (const auto& step : tr.steps) {
    if (step.epsilon) {
      q = n.eps[step.id].dst;  // stays inside x: subsets are ε-closed
    } else {
      const auto& t = n.transitions[step.id];
      out.steps.push_back({t.label, x});
      x = d.step(x, t.label);
      q = t.dst;
    }
    if (!member(subset_of(d, x), q)) throw MembershipViolation("trace leaves the subset it should track");
  }
  out.last = x;
  out.accept = d.is_accepting(x);
  return out;
}

NfaWitness d_to_n(const Nfa& n, const Dfa& d, const DfaTrace& tr) {
  if (!tr.accept || !dfa_trace_valid(d, tr)) throw MalformedTrace("d_to_n expects an accepting DFA trace");
  EpsPaths paths(n);
  const StateSet& final_set = subset_of(d, tr.last);
  auto acc = std::find_if(final_set.begin(), final_set.end(), [&](State s) { return n.is_accepting(s); });
  if (acc == final_set.end()) throw MalformedTrace("accepting DFA state has no accepting NFA state");

  State q = *acc;
  std::vector<std::vector<TraceStep>> pieces;  // reversed order
  for (std::size_t i = tr.steps.size(); i-- > 0;) {
    const auto& step = tr.steps[i];
    const StateSet& from = subset_of(d, step.from);
    const Transition* best = nullptr;
    for (const auto& t : n.transitions) {
      if (t.label != step.label || !member(from, t.src) || !paths.reaches(t.dst, q)) continue;
      if (!best || paths.distance(t.dst, q) < paths.distance(best->dst, q)) best = &t;
    }
    if (!best) throw MalformedTrace("DFA step has no NFA witness");
    std::vector<TraceStep> piece{{false, best->id}};
    auto eps = paths.path(best->dst, q);
    piece.insert(piece.end(), eps.begin(), eps.end());
    pieces.push_back(std::move(piece));
    q = best->src;
  }
  NfaWitness out{q, NfaTrace{q, {}}};
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it)
    out.trace.steps.insert(out.trace.steps.end(), it->begin(), it->end());
  return out;
}

NfaTrace d_to_n_from_init(const Nfa& n, const Dfa& d, const DfaTrace& tr) {
  if (tr.start() != d.init) throw MalformedTrace("trace does not start at the initial DFA state");
  NfaWitness w = d_to_n(n, d, tr);
  EpsPaths paths(n);
  NfaTrace out{n.init, paths.path(n.init, w.start)};
  out.steps.insert(out.steps.end(), w.trace.steps.begin(), w.trace.steps.end());
  return out;
}

// ------------------------------------------------------------ trace grammar

std::string dfa_trace_nonterminal(State s, bool accept) {
  return "TraceD_" + std::to_string(s) + (accept ? "_true" : "_false");
}

GrammarEnv dfa_trace_grammar(const Dfa& d) {
  GrammarEnv env(d.alphabet);
  for (State s = 0; s < d.states; ++s)
    for (bool b : {true, false}) {
      std::vector<Branch> branches;
      if (d.is_accepting(s) == b) branches.emplace_back("nil", GrammarExpr::eps());
      for (std::size_t c = 0; c < d.alphabet.size(); ++c)
        branches.emplace_back("cons" + std::to_string(c),
                              GrammarExpr::tensor(GrammarExpr::lit(d.alphabet[c]),
                                                  GrammarExpr::ref(dfa_trace_nonterminal(d.delta[s][c], b))));
      env.define(dfa_trace_nonterminal(s, b), GrammarExpr::sum(std::move(branches)));
    }
  return env;
}

GrammarExpr dfa_any_trace(State s) {
  return GrammarExpr::sum({{"true", GrammarExpr::ref(dfa_trace_nonterminal(s, true))},
                           {"false", GrammarExpr::ref(dfa_trace_nonterminal(s, false))}});
}

ParseTree dfa_trace_to_tree(const Dfa& d, const DfaTrace& t) {
  if (!dfa_trace_valid(d, t)) throw MalformedTrace("invalid DFA trace");
  ParseTree acc = ParseTree::roll(dfa_trace_nonterminal(t.last, t.accept), ParseTree::inj("nil", ParseTree::eps()));
  for (auto it = t.steps.rbegin(); it != t.steps.rend(); ++it)
    acc = ParseTree::roll(dfa_trace_nonterminal(it->from, t.accept),
                          ParseTree::inj("cons" + std::to_string(d.alphabet.rank(it->label)),
                                         ParseTree::pair(ParseTree::lit(it->label), acc)));
  return acc;
}

DfaTrace tree_to_dfa_trace(const Dfa& d, const ParseTree& t) {
  const auto* root = t.get<parse::Roll>();
  if (!root) throw MalformedTree("not a DFA trace parse");
  std::optional<bool> accept;
  for (bool b : {true, false})
    for (State s = 0; s < d.states && !accept; ++s)
      if (root->nonterminal == dfa_trace_nonterminal(s, b)) accept = b;
  if (!accept) throw MalformedTree("unknown DFA trace nonterminal " + root->nonterminal);

  GrammarEnv env = dfa_trace_grammar(d);
  if (!well_formed(env, GrammarExpr::ref(root->nonterminal), t)) throw MalformedTree("ill-formed DFA trace parse");
  DfaTrace out;
  out.accept = *accept;
  ParseTree cur = t;
  while (true) {
    const auto* roll = cur.get<parse::Roll>();
    State s = 0;
    const std::string& nt = roll->nonterminal;
    std::from_chars(nt.data() + 7, nt.data() + nt.size(), s);  // "TraceD_<s>_<b>"
    const auto* inj = roll->body.get<parse::Inj>();
    if (inj->tag == "nil") {
      out.last = s;
      return out;
    }
    const auto* pair = inj->body.get<parse::Pair>();
    out.steps.push_back({pair->left.get<parse::LitLeaf>()->token, s});
    cur = pair->right;
  }
}

Parser dfa_parser(const Dfa& d) {
  return Parser{"parse_d", GrammarExpr::ref(dfa_trace_nonterminal(d.init, true)),
                GrammarExpr::ref(dfa_trace_nonterminal(d.init, false)), [d](const Word& w) {
                  DfaTrace t = parse_d(d, d.init, w);
                  return ParserResult{t.accept, dfa_trace_to_tree(d, t)};
                }};
}

RegexPipeline regex_pipeline(const Regex& r, const Alphabet& alphabet, bool full_powerset) {
  Nfa n = thompson(r, alphabet);
  Dfa d = determinize(n, full_powerset);
  RegexGrammar g = regex_to_grammar(r, alphabet);
  GrammarEnv env = dfa_trace_grammar(d);
  env.merge(g.env);
  Parser base = dfa_parser(d);
  Transformer to_regex{"dfa_trace_to_regex_parse", base.accept_grammar, g.start,
                       [r, n, d](const ParseTree& t) {
                         return trace_to_regex_parse(r, d_to_n_from_init(n, d, tree_to_dfa_trace(d, t)));
                       }};
  Transformer from_regex{"regex_parse_to_dfa_trace", g.start, base.accept_grammar, [r, n, d](const ParseTree& t) {
                           return dfa_trace_to_tree(d, n_to_d(n, d, regex_parse_to_trace(r, t), d.init));
                         }};
  Parser parser = extend_parser(to_regex, from_regex, base);
  return RegexPipeline{r, std::move(n), std::move(d), std::move(env), g.start, std::move(to_regex),
                       std::move(from_regex), std::move(parser)};
}

}  // namespace lambekd
