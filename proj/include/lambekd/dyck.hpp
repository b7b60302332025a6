#pragma once

// Balanced parentheses: the Dyck grammar, its counter automaton, and the
// strong equivalence between Dyck parses and accepting counter traces.

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "lambekd/grammar.hpp"
#include "lambekd/oracle.hpp"

namespace lambekd {

/// Dyck ::= |nil: eps |bal: '(' Dyck ')' Dyck   over the alphabet ( )
GrammarEnv dyck_env();

class DyckTree {
 public:
  static DyckTree nil() { return DyckTree(nullptr); }
  static DyckTree bal(DyckTree inner, DyckTree rest);

  bool is_nil() const noexcept { return node_ == nullptr; }
  /// bal only.
  const DyckTree& inner() const;
  const DyckTree& rest() const;

  friend bool operator==(const DyckTree& a, const DyckTree& b);

  struct Node;

 private:
  explicit DyckTree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Word dyck_yield(const DyckTree& t);
ParseTree dyck_to_parse(const DyckTree& t);
/// Throws MalformedTree unless t is a well-formed Dyck parse.
DyckTree parse_to_dyck(const ParseTree& t);

enum class CounterMove { Open, Close, ToFail, FailLoop };

struct CounterStep {
  CounterMove move;
  /// Counter before the step; unused (0) once in the fail state.
  std::size_t counter;
  Token token;
  friend bool operator==(const CounterStep&, const CounterStep&) = default;
};

/// A run of the counter machine from counter 0. The terminal is Stop when
/// accept holds (counter 0, never failed) and Exhausted otherwise.
struct CounterTrace {
  std::vector<CounterStep> steps;
  bool accept = false;
  bool failed = false;
  std::size_t final_counter = 0;

  /// Input index of the ToFail step, or the input length for a run that ends with open parentheses.
  std::optional<std::size_t> rejected_at() const;
  friend bool operator==(const CounterTrace&, const CounterTrace&) = default;
};

Word counter_yield(const CounterTrace& t);
/// Step chaining and the accept/terminal bookkeeping hold.
bool counter_trace_valid(const CounterTrace& t);

/// The unique run on w. Throws TokenOutOfAlphabet.
CounterTrace run_counter(const Word& w);

/// Fold producing trace fragments threaded through a counter offset.
CounterTrace dyck_to_trace(const DyckTree& t);
/// Throws MalformedTrace on non-accepting or ill-formed traces.
DyckTree trace_to_dyck(const CounterTrace& tr);

struct DyckResult {
  CounterTrace trace;
  std::optional<DyckTree> tree;  // present iff accepted
  bool accepted() const { return tree.has_value(); }
};

DyckResult parse_dyck(const Word& w);

// --------------------------------------------- counter traces as a grammar

/// M_n_b for counters n <= bound (deeper opens are dropped) plus M_fail_false:
///   M_n_b ::= |stop: eps (n = 0, b) |exhausted: eps (n > 0, not b) |open: '(' M_{n+1}_b
///           |close: ')' M_{n-1}_b (n > 0) |toFail: ')' M_fail_false (n = 0, not b)
///   M_fail_false ::= |exhausted: eps |loopOpen: '(' M_fail_false |loopClose: ')' M_fail_false
GrammarEnv counter_grammar(std::size_t bound);
std::string counter_nonterminal(std::size_t n, bool accept);
ParseTree counter_trace_to_tree(const CounterTrace& t);
/// Throws MalformedTree.
CounterTrace tree_to_counter_trace(const ParseTree& t);

/// The counter machine as a parser, and extended to Dyck parses.
Parser counter_parser();
Transformer counter_to_dyck_transformer();
Transformer dyck_to_counter_transformer();
Parser dyck_parser();

}  // namespace lambekd
