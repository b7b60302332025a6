#pragma once

// Text format for grammar environments.
//
//   # comment
//   alphabet ( )
//   Dyck ::= |nil: eps |bal: '(' Dyck ')' Dyck
//
// Expressions: 'tok' literal, eps, empty, top, juxtaposition (right-nested
// tensor), `|tag: e` alternatives, `&{tag: e, ...}`, bare identifiers for
// nonterminals, reify(p), parentheses for grouping. A line starting with
// `|` continues the previous declaration.

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "lambekd/grammar.hpp"

namespace lambekd {

struct GrammarFile {
  GrammarEnv env;
  /// First declared nonterminal, if any.
  std::optional<std::string> start;
};

/// Throws SyntaxError. Reify predicates are looked up in `predicates`;
/// unknown ones are left for validate_env to report.
GrammarFile parse_grammar_text(std::string_view text, const std::map<std::string, Predicate>& predicates = {});

/// Parses a single expression (no declarations).
GrammarExpr parse_grammar_expr(std::string_view text);

std::string to_text(const GrammarExpr& g);
std::string to_text(const GrammarEnv& env);

}  // namespace lambekd
