#pragma once

// Regular expressions over tokens, their concrete syntax, and their
// translation into grammars with one named nil/cons fixpoint per star.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lambekd/grammar.hpp"

namespace lambekd {

class Regex {
 public:
  enum class Kind { Lit, Eps, Empty, Union, Concat, Star };

  static Regex lit(Token t);
  static Regex eps();
  static Regex empty();
  static Regex alt(Regex l, Regex r);
  static Regex cat(Regex l, Regex r);
  static Regex star(Regex body);

  Kind kind() const noexcept;
  /// Lit only.
  const Token& token() const;
  /// Union/Concat: operands. Star: left() is the body.
  const Regex& left() const;
  const Regex& right() const;
  const Regex& body() const { return left(); }

  friend bool operator==(const Regex& a, const Regex& b);

  struct Node;

 private:
  explicit Regex(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Syntax: 'tok', eps, empty, postfix *, juxtaposition, |, parentheses.
/// `*` binds tightest, then juxtaposition, then `|`; binary forms associate left.
/// Throws SyntaxError(position).
Regex parse_regex_text(std::string_view text);
/// Minimal-parenthesis printer; parse_regex_text(to_text(r)) == r.
std::string to_text(const Regex& r);

/// Distinct literal tokens in first-occurrence order.
std::vector<Token> regex_literals(const Regex& r);
/// {a, b, c} followed by any other literals of r.
Alphabet default_alphabet(const Regex& r);

/// Name of the fixpoint for the k-th star in pre-order.
std::string star_name(std::size_t k);

struct RegexGrammar {
  GrammarEnv env;
  GrammarExpr start;
};

/// Union -> |inl |inr, Concat -> tensor, Star -> Star<k> ::= |nil: eps |cons: body Star<k>.
/// Throws TokenOutOfAlphabet for literals outside alphabet.
RegexGrammar regex_to_grammar(const Regex& r, const Alphabet& alphabet);

}  // namespace lambekd
