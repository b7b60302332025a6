#pragma once

// The generic fold over parse trees of named fixpoints.
//
// A Layer<R> is one level of a parse: the body of a Roll in which every
// nested Roll (a recursive position of the fixpoint family) has been
// replaced by an R. fold_tree computes
//
//   fold(Roll(x, body)) = algebra[x](map(fold, body))
//
// where map is the functorial action: it rebuilds the body's literal,
// unit, pair, injection, tuple and reify structure unchanged and applies
// fold at each recursive position.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lambekd/grammar.hpp"

namespace lambekd {

template <class R>
struct Layer {
  ParseTree::Kind kind = ParseTree::Kind::Eps;
  Token token;                 // Lit
  std::string tag;             // Inj tag; Roll nonterminal; Reify predicate
  std::size_t split_len = 0;   // Pair
  std::vector<std::pair<std::string, Layer>> children;  // Pair: left,right. Inj: body. Tuple: entries.
  Word word;                   // Tuple yield; Reify witness
  std::optional<R> value;      // Roll: the folded child

  const Layer& left() const { return children.at(0).second; }
  const Layer& right() const { return children.at(1).second; }
  const Layer& body() const { return children.at(0).second; }
  const R& result() const { return *value; }
};

template <class R>
using Algebra = std::map<std::string, std::function<R(const Layer<R>&)>>;

/// Functorial action: rebuilds `body` one level deep, calling `at_roll` on each nested Roll.
template <class R, class F>
Layer<R> map_layer(const ParseTree& body, F&& at_roll) {
  Layer<R> out;
  out.kind = body.kind();
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, parse::LitLeaf>) out.token = x.token;
        else if constexpr (std::is_same_v<T, parse::EpsLeaf>) {
        } else if constexpr (std::is_same_v<T, parse::Pair>) {
          out.split_len = x.split_len;
          out.children.emplace_back("left", map_layer<R>(x.left, at_roll));
          out.children.emplace_back("right", map_layer<R>(x.right, at_roll));
        } else if constexpr (std::is_same_v<T, parse::Inj>) {
          out.tag = x.tag;
          out.children.emplace_back(x.tag, map_layer<R>(x.body, at_roll));
        } else if constexpr (std::is_same_v<T, parse::Tuple>) {
          out.word = x.yield;
          for (const auto& [tag, entry] : x.entries) out.children.emplace_back(tag, map_layer<R>(entry, at_roll));
        } else if constexpr (std::is_same_v<T, parse::Roll>) {
          out.tag = x.nonterminal;
          out.value = at_roll(body);
        } else {
          out.tag = x.predicate;
          out.word = x.witness;
        }
      },
      body.node().v);
  return out;
}

namespace detail {

template <class R>
R fold_unchecked(const Algebra<R>& algebra, const ParseTree& t) {
  const auto* roll = t.get<parse::Roll>();
  auto it = algebra.find(roll->nonterminal);
  if (it == algebra.end()) throw ConfigError("algebra has no case for nonterminal '" + roll->nonterminal + "'");
  return it->second(map_layer<R>(roll->body, [&](const ParseTree& child) { return fold_unchecked(algebra, child); }));
}

}  // namespace detail

/// Folds a well-formed Roll tree. Throws MalformedTree otherwise.
template <class R>
R fold_tree(const GrammarEnv& env, const Algebra<R>& algebra, const ParseTree& t) {
  const auto* roll = t.get<parse::Roll>();
  if (!roll || !env.defines(roll->nonterminal) ||
      !well_formed(env, GrammarExpr::ref(roll->nonterminal), t))
    throw MalformedTree("fold_tree expects a well-formed parse of a named nonterminal, got " + to_string(t));
  return detail::fold_unchecked(algebra, t);
}

/// One algebra step that concatenates the layer's yield; folding with it rebuilds yield_of.
inline Word layer_yield(const Layer<Word>& l) {
  switch (l.kind) {
    case ParseTree::Kind::Lit:
      return Word{l.token};
    case ParseTree::Kind::Eps:
      return {};
    case ParseTree::Kind::Pair: {
      Word w = layer_yield(l.left());
      Word r = layer_yield(l.right());
      w.insert(w.end(), r.begin(), r.end());
      return w;
    }
    case ParseTree::Kind::Inj:
      return layer_yield(l.body());
    case ParseTree::Kind::Tuple:
    case ParseTree::Kind::Reify:
      return l.word;
    case ParseTree::Kind::Roll:
      return l.result();
  }
  return {};
}

/// The yield-rebuilding algebra over every nonterminal of env.
inline Algebra<Word> yield_algebra(const GrammarEnv& env) {
  Algebra<Word> alg;
  for (const auto& [name, body] : env.definitions()) alg[name] = layer_yield;
  return alg;
}

}  // namespace lambekd
