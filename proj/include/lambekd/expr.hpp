#pragma once

// Right-associative sums over NUM with parentheses, and the one-token
// lookahead automaton with states O (opening), D (done opening, peeks),
// C (closing) and A (adding), each indexed by an open-paren counter n and a
// verdict bit b.

#include <memory>
#include <optional>
#include <vector>

#include "lambekd/grammar.hpp"
#include "lambekd/oracle.hpp"

namespace lambekd {

/// Exp ::= |done: Atom |add: Atom '+' Exp;  Atom ::= |num: 'NUM' |parens: '(' Exp ')'
GrammarEnv exp_env();
Alphabet exp_alphabet();

class AtomTree;

class ExpTree {
 public:
  static ExpTree done(AtomTree atom);
  static ExpTree add(AtomTree atom, ExpTree rest);

  bool is_add() const noexcept;
  const AtomTree& atom() const;
  /// add only.
  const ExpTree& rest() const;

  friend bool operator==(const ExpTree& a, const ExpTree& b);

  struct Node;

 private:
  explicit ExpTree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

class AtomTree {
 public:
  static AtomTree num();
  static AtomTree parens(ExpTree inner);

  bool is_num() const noexcept { return node_ == nullptr; }
  /// parens only.
  const ExpTree& inner() const;

  friend bool operator==(const AtomTree& a, const AtomTree& b);

  struct Node;

 private:
  explicit AtomTree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Word exp_yield(const ExpTree& t);
ParseTree exp_to_parse(const ExpTree& t);
/// Throws MalformedTree unless t is a well-formed Exp parse.
ExpTree parse_to_exp(const ParseTree& t);

enum class LookaheadMove {
  OLeft,
  ONum,
  OUnexpected,
  DLookAheadRP,
  DLookAheadNot,
  CCloseGood,
  CCloseBad,
  CUnexpected,
  ADoneGood,
  ADoneBad,
  AAdd,
  AUnexpected,
};

const char* move_name(LookaheadMove m);

/// One constructor of a trace. counter is the index n of the state the move
/// leaves. D moves consume nothing and record the peeked token (nullopt at
/// end of input). Rejecting moves that swallow the remaining input keep it in rest.
struct LookaheadStep {
  LookaheadMove move;
  std::size_t counter = 0;
  std::optional<Token> peek;
  Word rest;
  friend bool operator==(const LookaheadStep&, const LookaheadStep&) = default;
};

struct LookaheadTrace {
  std::vector<LookaheadStep> steps;
  bool accept = false;

  /// Input index where the rejecting move happened; nullopt when accepting.
  std::optional<std::size_t> rejected_at() const;
  friend bool operator==(const LookaheadTrace&, const LookaheadTrace&) = default;
};

Word lookahead_yield(const LookaheadTrace& t);
/// Replays from O(0): state/counter chaining, peeks agree with what follows, the
/// last move is terminal, and accept is true iff it is A.doneGood.
bool lookahead_trace_valid(const LookaheadTrace& t);

/// The deterministic run on w from O(0). Throws TokenOutOfAlphabet.
LookaheadTrace run_lookahead(const Word& w);

/// Accepting trace of yield(t), built structurally.
LookaheadTrace exp_to_machine(const ExpTree& t);
/// Throws MalformedTrace on rejecting or ill-formed traces.
ExpTree machine_to_exp(const LookaheadTrace& tr);

struct ExpResult {
  LookaheadTrace trace;
  std::optional<ExpTree> tree;
  bool accepted() const { return tree.has_value(); }
};

ExpResult parse_exp(const Word& w);

// ------------------------------------------ automaton traces as a grammar

std::string lookahead_nonterminal(char state, std::size_t n, bool accept);

/// O_n_b, D_n_b, C_n_b, A_n_b for n <= bound, plus NotStartsWithLP and
/// NotStartsWithRP. Moves that would exceed the bound are dropped, so the
/// grammar is exact on inputs nesting at most `bound` parentheses.
GrammarEnv lookahead_grammar(std::size_t bound);
ParseTree lookahead_trace_to_tree(const LookaheadTrace& t);
/// Throws MalformedTree.
LookaheadTrace tree_to_lookahead_trace(const ParseTree& t);

Parser lookahead_parser();
Transformer machine_to_exp_transformer();
Transformer exp_to_machine_transformer();
/// The lookahead parser extended to Exp along the weak equivalence.
Parser exp_parser();

}  // namespace lambekd
