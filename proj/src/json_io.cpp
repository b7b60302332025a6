#include "lambekd/json_io.hpp"

namespace lambekd {

Json to_json(const Word& w) {
  Json j = Json::array();
  for (const auto& t : w) j.push_back(t);
  return j;
}

Word word_from_json(const Json& j) { return j.get<Word>(); }

Json to_json(const ParseTree& t) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, parse::LitLeaf>) return {{"kind", "lit"}, {"token", x.token}};
        else if constexpr (std::is_same_v<T, parse::EpsLeaf>) return {{"kind", "eps"}};
        else if constexpr (std::is_same_v<T, parse::Pair>)
          return {{"kind", "pair"}, {"split", x.split_len}, {"left", to_json(x.left)}, {"right", to_json(x.right)}};
        else if constexpr (std::is_same_v<T, parse::Inj>)
          return {{"kind", "inj"}, {"tag", x.tag}, {"body", to_json(x.body)}};
        else if constexpr (std::is_same_v<T, parse::Tuple>) {
          Json entries = Json::array();
          for (const auto& [tag, e] : x.entries) entries.push_back({{"tag", tag}, {"tree", to_json(e)}});
          return {{"kind", "tuple"}, {"yield", to_json(x.yield)}, {"entries", entries}};
        } else if constexpr (std::is_same_v<T, parse::Roll>)
          return {{"kind", "roll"}, {"nonterminal", x.nonterminal}, {"body", to_json(x.body)}};
        else
          return {{"kind", "reify"}, {"predicate", x.predicate}, {"witness", to_json(x.witness)}};
      },
      t.node().v);
}

ParseTree parse_tree_from_json(const Json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "lit") return ParseTree::lit(j.at("token").get<Token>());
    if (kind == "eps") return ParseTree::eps();
    if (kind == "pair")
      return ParseTree::pair(j.at("split").get<std::size_t>(), parse_tree_from_json(j.at("left")),
                             parse_tree_from_json(j.at("right")));
    if (kind == "inj") return ParseTree::inj(j.at("tag").get<std::string>(), parse_tree_from_json(j.at("body")));
    if (kind == "tuple") {
      std::vector<Entry> entries;
      for (const auto& e : j.at("entries")) entries.emplace_back(e.at("tag").get<std::string>(), parse_tree_from_json(e.at("tree")));
      return ParseTree::tuple(std::move(entries), word_from_json(j.at("yield")));
    }
    if (kind == "roll")
      return ParseTree::roll(j.at("nonterminal").get<std::string>(), parse_tree_from_json(j.at("body")));
    if (kind == "reify") return ParseTree::reify(j.at("predicate").get<std::string>(), word_from_json(j.at("witness")));
    throw MalformedTree("unknown parse tree kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw MalformedTree(std::string("malformed parse tree JSON: ") + e.what());
  }
}

Json to_json(const EquivReport& r) {
  return {{"status", r.pass ? "pass" : "fail"},
          {"maxLen", r.max_len},
          {"checked", r.checked},
          {"counterexample", to_json(r.counterexample)},
          {"detail", r.detail}};
}

namespace {

Json accepting_list(const std::vector<bool>& acc) {
  Json j = Json::array();
  for (std::size_t s = 0; s < acc.size(); ++s)
    if (acc[s]) j.push_back(s);
  return j;
}

std::vector<bool> accepting_from(const Json& j, std::size_t states) {
  std::vector<bool> acc(states, false);
  for (const auto& s : j) {
    auto i = s.get<std::size_t>();
    if (i >= states) throw ConfigError("accepting state out of range");
    acc[i] = true;
  }
  return acc;
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

}  // namespace

Json to_json(const Nfa& n) {
  Json tr = Json::array(), eps = Json::array();
  for (const auto& t : n.transitions) tr.push_back({{"id", t.id}, {"src", t.src}, {"label", t.label}, {"dst", t.dst}});
  for (const auto& e : n.eps) eps.push_back({{"id", e.id}, {"src", e.src}, {"dst", e.dst}});
  return {{"alphabet", n.alphabet.symbols()}, {"states", n.states}, {"init", n.init},
          {"accept", accepting_list(n.accepting)}, {"transitions", tr}, {"eps", eps}};
}

Nfa nfa_from_json(const Json& j) {
  Nfa n = guarded("NFA", [&] {
    Nfa n{Alphabet(j.at("alphabet").get<std::vector<Token>>()), j.at("states").get<std::size_t>(),
          j.at("init").get<State>(), {}, {}, {}};
    n.accepting = accepting_from(j.at("accept"), n.states);
    for (const auto& t : j.at("transitions"))
      n.transitions.push_back({t.at("id").get<std::size_t>(), t.at("src").get<State>(), t.at("label").get<Token>(),
                               t.at("dst").get<State>()});
    for (const auto& e : j.at("eps"))
      n.eps.push_back({e.at("id").get<std::size_t>(), e.at("src").get<State>(), e.at("dst").get<State>()});
    return n;
  });
  validate_nfa(n);
  return n;
}

Json to_json(const Dfa& d) {
  Json tr = Json::array();
  for (State s = 0; s < d.states; ++s)
    for (std::size_t r = 0; r < d.alphabet.size(); ++r)
      tr.push_back({{"src", s}, {"label", d.alphabet[r]}, {"dst", d.delta[s][r]}});
  Json j = {{"alphabet", d.alphabet.symbols()}, {"states", d.states}, {"init", d.init},
            {"accept", accepting_list(d.accepting)}, {"transitions", tr}};
  if (d.subsets) j["subsets"] = *d.subsets;
  return j;
}

Dfa dfa_from_json(const Json& j) {
  Dfa d = guarded("DFA", [&] {
    Dfa d{Alphabet(j.at("alphabet").get<std::vector<Token>>()), j.at("states").get<std::size_t>(),
          j.at("init").get<State>(), {}, {}, std::nullopt};
    d.accepting = accepting_from(j.at("accept"), d.states);
    d.delta.assign(d.states, std::vector<State>(d.alphabet.size(), d.states));
    for (const auto& t : j.at("transitions")) {
      auto s = t.at("src").get<State>();
      if (s >= d.states) throw ConfigError("transition source out of range");
      d.delta[s][d.alphabet.rank(t.at("label").get<Token>())] = t.at("dst").get<State>();
    }
    if (j.contains("subsets")) d.subsets = j.at("subsets").get<std::vector<StateSet>>();
    return d;
  });
  validate_dfa(d);
  return d;
}

Json to_json(const DfaTrace& t) {
  Json j = {{"kind", "nil"}, {"state", t.last}};
  for (std::size_t k = t.steps.size(); k-- > 0;)
    j = {{"kind", "cons"}, {"label", t.steps[k].label}, {"state", t.steps[k].from}, {"rest", std::move(j)},
         {"accept", t.accept}};
  return j;
}

DfaTrace dfa_trace_from_json(const Json& j) {
  return guarded("DFA trace", [&] {
    DfaTrace t;
    const Json* cur = &j;
    while (cur->at("kind").get<std::string>() == "cons") {
      t.steps.push_back({cur->at("label").get<Token>(), cur->at("state").get<State>()});
      t.accept = cur->at("accept").get<bool>();
      cur = &cur->at("rest");
    }
    if (cur->at("kind").get<std::string>() != "nil") throw ConfigError("DFA trace must end in nil");
    t.last = cur->at("state").get<State>();
    // A bare nil carries no accept bit; callers recompute it against their machine.
    return t;
  });
}

Json to_json(const DyckTree& t) {
  if (t.is_nil()) return {{"node", "nil"}};
  return {{"node", "bal"}, {"open", "("}, {"inner", to_json(t.inner())}, {"close", ")"}, {"rest", to_json(t.rest())}};
}

namespace {

const char* counter_move_name(CounterMove m) {
  switch (m) {
    case CounterMove::Open: return "open";
    case CounterMove::Close: return "close";
    case CounterMove::ToFail: return "toFail";
    case CounterMove::FailLoop: return "failLoop";
  }
  return "?";
}

}  // namespace

Json to_json(const CounterTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json j = {{"move", counter_move_name(s.move)}, {"token", s.token}};
    if (s.move != CounterMove::FailLoop) j["counter"] = s.counter;
    steps.push_back(std::move(j));
  }
  Json j = {{"accept", t.accept}, {"steps", steps}, {"terminal", t.accept ? "stop" : "exhausted"},
            {"failed", t.failed}};
  if (!t.failed) j["finalCounter"] = t.final_counter;
  if (auto at = t.rejected_at()) j["rejectedAt"] = *at;
  return j;
}

Json to_json(const AtomTree& t) {
  if (t.is_num()) return {{"node", "num"}, {"token", "NUM"}};
  return {{"node", "parens"}, {"open", "("}, {"inner", to_json(t.inner())}, {"close", ")"}};
}

Json to_json(const ExpTree& t) {
  if (!t.is_add()) return {{"node", "done"}, {"atom", to_json(t.atom())}};
  return {{"node", "add"}, {"left", to_json(t.atom())}, {"op", "+"}, {"right", to_json(t.rest())}};
}

Json to_json(const LookaheadTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json j = {{"move", move_name(s.move)}, {"counter", s.counter}};
    if (s.move == LookaheadMove::DLookAheadRP || s.move == LookaheadMove::DLookAheadNot)
      j["peek"] = s.peek ? Json(*s.peek) : Json(nullptr);
    if (s.move == LookaheadMove::OUnexpected || s.move == LookaheadMove::CCloseBad ||
        s.move == LookaheadMove::CUnexpected || s.move == LookaheadMove::AUnexpected)
      j["rest"] = to_json(s.rest);
    steps.push_back(std::move(j));
  }
  Json j = {{"accept", t.accept}, {"steps", steps}};
  if (auto at = t.rejected_at()) j["rejectedAt"] = *at;
  return j;
}

std::string dump(const Json& j, bool pretty) { return pretty ? j.dump(2) : j.dump(); }

}  // namespace lambekd
