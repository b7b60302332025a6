#pragma once

// Grammars as linear type expressions, their parse trees, yields, and
// structural membership of a tree in a grammar's parse set.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lambekd/errors.hpp"

namespace lambekd {

using Token = std::string;
using Word = std::vector<Token>;

/// Finite ordered set of tokens. Tokens are opaque strings ("a", "(", "NUM").
class Alphabet {
 public:
  Alphabet() = default;
  /// Throws std::invalid_argument on an empty list or duplicates.
  explicit Alphabet(std::vector<Token> symbols);

  const std::vector<Token>& symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  bool contains(const Token& t) const { return rank_.count(t) != 0; }
  std::optional<std::size_t> find(const Token& t) const;
  /// Throws TokenOutOfAlphabet.
  std::size_t rank(const Token& t) const;
  std::vector<std::size_t> ranks(std::span<const Token> w) const;
  const Token& operator[](std::size_t i) const { return symbols_.at(i); }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

 private:
  std::vector<Token> symbols_;
  std::map<Token, std::size_t> rank_;
};

struct GrammarNode;

/// Immutable grammar expression; cheap to copy (shared node).
class GrammarExpr {
 public:
  enum class Kind { Lit, Eps, Tensor, Sum, With, Ref, Reify };

  static GrammarExpr lit(Token token);
  static GrammarExpr eps();
  static GrammarExpr tensor(GrammarExpr left, GrammarExpr right);
  /// Right-nested tensor of the parts; eps() for an empty list.
  static GrammarExpr seq(std::vector<GrammarExpr> parts);
  static GrammarExpr sum(std::vector<std::pair<std::string, GrammarExpr>> branches);
  static GrammarExpr with(std::vector<std::pair<std::string, GrammarExpr>> branches);
  static GrammarExpr empty() { return sum({}); }
  static GrammarExpr top() { return with({}); }
  static GrammarExpr ref(std::string nonterminal);
  static GrammarExpr reify(std::string predicate);

  Kind kind() const noexcept;
  const GrammarNode& node() const noexcept { return *node_; }
  template <class T>
  const T* get() const noexcept;
  /// Node identity; equal for copies of the same expression object.
  const void* id() const noexcept { return node_.get(); }

  friend bool operator==(const GrammarExpr& a, const GrammarExpr& b);

 private:
  explicit GrammarExpr(std::shared_ptr<const GrammarNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const GrammarNode> node_;
};

using Branch = std::pair<std::string, GrammarExpr>;

namespace expr {
struct Lit {
  Token token;
};
struct Eps {};
struct Tensor {
  GrammarExpr left;
  GrammarExpr right;
};
struct Sum {
  std::vector<Branch> branches;
};
struct With {
  std::vector<Branch> branches;
};
struct Ref {
  std::string name;
};
struct Reify {
  std::string predicate;
};
}  // namespace expr

struct GrammarNode {
  std::variant<expr::Lit, expr::Eps, expr::Tensor, expr::Sum, expr::With, expr::Ref, expr::Reify> v;
};

template <class T>
const T* GrammarExpr::get() const noexcept {
  return std::get_if<T>(&node_->v);
}

/// Decidable string predicate used by reify(). Must be total and pure.
using Predicate = std::function<bool(std::span<const Token>)>;

/// Alphabet, named (mutually recursive) definitions and reify predicates.
class GrammarEnv {
 public:
  GrammarEnv() = default;
  explicit GrammarEnv(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  const Alphabet& alphabet() const noexcept { return alphabet_; }

  /// Throws ConfigError when the name is already bound to a different body.
  GrammarEnv& define(const std::string& name, GrammarExpr body);
  GrammarEnv& add_predicate(const std::string& id, Predicate p);

  bool defines(const std::string& name) const { return index_.count(name) != 0; }
  /// Throws ConfigError for an unknown name.
  const GrammarExpr& definition(const std::string& name) const;
  const std::vector<std::pair<std::string, GrammarExpr>>& definitions() const noexcept { return defs_; }
  const Predicate* predicate(const std::string& id) const;
  const std::map<std::string, Predicate>& predicates() const noexcept { return predicates_; }

  /// Adds every definition and predicate of `other`; alphabets must agree.
  GrammarEnv& merge(const GrammarEnv& other);

 private:
  Alphabet alphabet_;
  std::vector<std::pair<std::string, GrammarExpr>> defs_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, Predicate> predicates_;
};

struct ParseNode;

/// An element of a grammar's parse set at some string. Immutable, shares structure.
class ParseTree {
 public:
  enum class Kind { Lit, Eps, Pair, Inj, Tuple, Roll, Reify };

  static ParseTree lit(Token token);
  static ParseTree eps();
  static ParseTree pair(std::size_t split_len, ParseTree left, ParseTree right);
  /// Split length taken from the left tree's yield length.
  static ParseTree pair(ParseTree left, ParseTree right);
  static ParseTree inj(std::string tag, ParseTree body);
  static ParseTree tuple(std::vector<std::pair<std::string, ParseTree>> entries, Word yield);
  /// Yield taken from the first entry; throws ShapeMismatch when there are no entries.
  static ParseTree tuple(std::vector<std::pair<std::string, ParseTree>> entries);
  static ParseTree roll(std::string nonterminal, ParseTree body);
  static ParseTree reify(std::string predicate, Word witness);

  Kind kind() const noexcept;
  const ParseNode& node() const noexcept { return *node_; }
  template <class T>
  const T* get() const noexcept;
  /// Yield length as claimed by construction; equals yield_of(*this).size() on valid trees.
  std::size_t yield_length() const noexcept;

  friend bool operator==(const ParseTree& a, const ParseTree& b);
  friend bool operator<(const ParseTree& a, const ParseTree& b) { return compare(a, b) < 0; }
  /// Total structural order (kind, then fields left to right).
  friend int compare(const ParseTree& a, const ParseTree& b);

 private:
  explicit ParseTree(std::shared_ptr<const ParseNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ParseNode> node_;
};

using Entry = std::pair<std::string, ParseTree>;

namespace parse {
struct LitLeaf {
  Token token;
};
struct EpsLeaf {};
struct Pair {
  std::size_t split_len;
  ParseTree left;
  ParseTree right;
};
struct Inj {
  std::string tag;
  ParseTree body;
};
struct Tuple {
  std::vector<Entry> entries;
  Word yield;
};
struct Roll {
  std::string nonterminal;
  ParseTree body;
};
struct ReifyLeaf {
  std::string predicate;
  Word witness;
};
}  // namespace parse

struct ParseNode {
  std::variant<parse::LitLeaf, parse::EpsLeaf, parse::Pair, parse::Inj, parse::Tuple, parse::Roll,
               parse::ReifyLeaf>
      v;
  std::size_t yield_length = 0;
};

template <class T>
const T* ParseTree::get() const noexcept {
  return std::get_if<T>(&node_->v);
}

/// The underlying string. Throws MalformedTree on a split or tuple-yield mismatch.
Word yield_of(const ParseTree& t);

struct Violation {
  std::string path;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_env(const GrammarEnv& env);
/// Checks one expression against the environment (references, literals, tags).
ValidationReport validate_expr(const GrammarEnv& env, const GrammarExpr& g, const std::string& path = "");

/// Whether t belongs to the parse set of g at yield_of(t).
bool well_formed(const GrammarEnv& env, const GrammarExpr& g, const ParseTree& t);

/// A yield-preserving map between parse sets.
struct Transformer {
  std::string name;
  GrammarExpr source;
  GrammarExpr target;
  std::function<ParseTree(const ParseTree&)> apply;
};

Transformer identity_transformer(const GrammarExpr& g);
/// compose(f, g) applies g first, then f.
Transformer compose(const Transformer& f, const Transformer& g);

/// Applies tr and throws YieldViolation if the yield changes.
ParseTree apply_checked(const Transformer& tr, const ParseTree& t);

std::string to_string(const ParseTree& t);
std::string to_string(const Word& w);

/// Splits raw text into one token per character.
Word chars(std::string_view text);

}  // namespace lambekd
