#pragma once

// Brute-force denotational oracle: the exact parse set of a grammar at a
// string, and desk-scale checkers built on it (unambiguity, disjointness,
// language equality, strong equivalence, parser soundness/completeness).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lambekd/grammar.hpp"

namespace lambekd {

inline constexpr std::size_t kDefaultMaxLen = 6;

/// A grammar compiled once for many queries.
///
/// Queries first fill a recognizer table (which (node, span) pairs have any
/// parse, computed as a least fixpoint span by span), then count or
/// enumerate top-down through nonempty pairs only. Re-entering a pair that
/// is still being computed therefore means a productive cycle that does not
/// consume input, and the parse set is infinite: InfiniteParseSet.
///
/// Enumeration order: tensor splits by ascending left length, sum branches
/// in declaration order, tuples as the cartesian product with the first
/// branch varying slowest.
class ParseOracle {
 public:
  /// Throws ConfigError if env or start fail validation.
  ParseOracle(GrammarEnv env, GrammarExpr start);
  ~ParseOracle();
  ParseOracle(ParseOracle&&) noexcept;
  ParseOracle& operator=(ParseOracle&&) noexcept;

  const GrammarEnv& env() const noexcept;
  const GrammarExpr& start() const noexcept;

  std::vector<ParseTree> enumerate(const Word& w) const;
  /// Throws std::overflow_error beyond 2^64 - 1.
  std::uint64_t count(const Word& w) const;
  bool recognizes(const Word& w) const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

std::vector<ParseTree> enumerate_parses(const GrammarEnv& env, const GrammarExpr& g, const Word& w);
std::uint64_t count_parses(const GrammarEnv& env, const GrammarExpr& g, const Word& w);

/// Visits every word of length <= max_len in shortlex order (length, then
/// alphabet rank). Stops early when visit returns false.
void for_each_word(const Alphabet& alphabet, std::size_t max_len, const std::function<bool(const Word&)>& visit);
std::vector<Word> words_up_to(const Alphabet& alphabet, std::size_t max_len);

struct EquivReport {
  std::size_t max_len = kDefaultMaxLen;
  bool pass = true;
  Word counterexample;
  std::string detail;
  std::size_t checked = 0;
};

EquivReport check_unambiguous(const GrammarEnv& env, const GrammarExpr& g, std::size_t max_len = kDefaultMaxLen);
EquivReport check_disjoint(const GrammarEnv& env, const GrammarExpr& a, const GrammarExpr& b,
                           std::size_t max_len = kDefaultMaxLen);
EquivReport check_language_equal(const GrammarEnv& env, const GrammarExpr& a, const GrammarExpr& b,
                                 std::size_t max_len = kDefaultMaxLen);

/// f lands in its target and preserves yield on every enumerated source parse.
/// Throws YieldViolation naming f.
EquivReport check_transformer(const GrammarEnv& env, const Transformer& f, std::size_t max_len = kDefaultMaxLen);
/// g(f(t)) = t for every enumerated parse t of f.source.
EquivReport check_retract(const GrammarEnv& env, const Transformer& f, const Transformer& g,
                          std::size_t max_len = kDefaultMaxLen);
/// Both composites are identities. Requires f.source = g.target and f.target = g.source.
EquivReport check_strong_equiv(const GrammarEnv& env, const Transformer& f, const Transformer& g,
                               std::size_t max_len = kDefaultMaxLen);

// ---------------------------------------------------------------- parsers

struct ParserResult {
  bool accepted = false;
  /// Parse of the accept grammar when accepted, evidence in the reject grammar otherwise.
  ParseTree tree = ParseTree::eps();
};

/// A total map from strings into accept ⊕ reject with the two grammars disjoint.
struct Parser {
  std::string name;
  GrammarExpr accept_grammar;
  GrammarExpr reject_grammar;
  std::function<ParserResult(const Word&)> run;
};

/// Given f : A -> B, g : B -> A and a parser p for A, a parser for B with the same negative grammar.
Parser extend_parser(const Transformer& f, const Transformer& g, const Parser& p);

/// For every word: the verdict tree has the word as yield and is well-formed
/// for its grammar, and accept/reject grammars never both parse the word.
EquivReport check_parser(const GrammarEnv& env, const Parser& p, std::size_t max_len = kDefaultMaxLen);

// ------------------------------------------------- distributivity (& over ⊕)

/// outer tag -> chosen inner tag, in tuple entry order.
using Choice = std::vector<std::pair<std::string, std::string>>;

struct Distributed {
  Choice choice;
  ParseTree tuple;
};

/// Tuple[(x, Inj(y_x, t_x))...] -> ({x -> y_x}, Tuple[(x, t_x)...]). Throws ShapeMismatch.
Distributed distribute(const ParseTree& t);
/// Inverse of distribute. Throws ShapeMismatch when the choice and tuple disagree.
ParseTree undistribute(const Choice& choice, const ParseTree& tuple);

/// Tag used for a choice function in distributed_grammar: "x=p,y=q".
std::string choice_tag(const Choice& choice);
/// &{x: |p: A |q: B, ...} -> |x=p,...: &{x: A, ...} |... over all choice functions.
GrammarExpr distributed_grammar(const GrammarExpr& with_of_sums);
/// The two directions of the distributivity isomorphism as transformers.
std::pair<Transformer, Transformer> distribute_transformers(const GrammarExpr& with_of_sums);

// ------------------------------------------------------- strings and reify

/// ⌈w⌉: 'w0' ⊗ ('w1' ⊗ (... ⊗ eps)).
GrammarExpr internalize(const Word& w);

/// Char ::= one branch per token, String ::= |nil: eps |cons: Char String.
GrammarEnv string_grammar(const Alphabet& alphabet);

/// The finite sum ⊕ ⌈w⌉ over words w with |w| <= max_len accepted by predicate id.
GrammarExpr reify_expansion(const GrammarEnv& env, const std::string& predicate, std::size_t max_len);

/// Predicates available to grammar files: palindrome, even_length, balanced, anbncn.
const std::map<std::string, Predicate>& builtin_predicates();

}  // namespace lambekd
