#pragma once

// Total deterministic automata, boolean-indexed traces, the parse/print
// retraction, subset construction and the translations between NFA and DFA
// traces.

#include <optional>
#include <string>
#include <vector>

#include "lambekd/nfa.hpp"
#include "lambekd/oracle.hpp"

namespace lambekd {

/// Sorted, duplicate-free set of NFA states.
using StateSet = std::vector<State>;

struct Dfa {
  Alphabet alphabet;
  std::size_t states = 0;
  State init = 0;
  std::vector<bool> accepting;
  /// delta[s][rank(c)]; total.
  std::vector<std::vector<State>> delta;
  /// For determinized machines: the ε-closed NFA subset behind each state.
  std::optional<std::vector<StateSet>> subsets;

  bool is_accepting(State s) const { return accepting.at(s); }
  State step(State s, const Token& c) const { return delta.at(s).at(alphabet.rank(c)); }
};

/// Throws ConfigError when delta is partial or out of range.
void validate_dfa(const Dfa& d);

struct DfaStep {
  Token label;
  State from;
  friend bool operator==(const DfaStep&, const DfaStep&) = default;
};

/// cons(label, from, ...) steps closed by nil at `last`; accept mirrors the Bool index.
struct DfaTrace {
  std::vector<DfaStep> steps;
  State last = 0;
  bool accept = false;

  State start() const { return steps.empty() ? last : steps.front().from; }
  friend bool operator==(const DfaTrace&, const DfaTrace&) = default;
};

/// Steps chain through delta, and accept equals isAcc(last).
bool dfa_trace_valid(const Dfa& d, const DfaTrace& t);

/// The unique trace from s reading w. Throws TokenOutOfAlphabet.
DfaTrace parse_d(const Dfa& d, State s, const Word& w);
Word print_d(const DfaTrace& t);

StateSet eps_closure(const Nfa& n, const StateSet& xs);

/// Subset construction over the ε-closures reachable from the initial closure,
/// in breadth-first discovery order with successors by alphabet rank. With
/// full_powerset every ε-closed subset becomes a state (ascending bitmask
/// order; at most 20 NFA states). The empty subset is a non-accepting sink.
Dfa determinize(const Nfa& n, bool full_powerset = false);

/// Accepting NFA trace from s, with s in subset(x) -> accepting DFA trace from x.
/// Throws MembershipViolation if s is not in subset(x), MalformedTrace if tr is not accepting.
DfaTrace n_to_d(const Nfa& n, const Dfa& d, const NfaTrace& tr, State x);

struct NfaWitness {
  State start;
  NfaTrace trace;
};

/// Accepting DFA trace from x -> an accepting NFA trace from some s in subset(x).
///
/// Built backwards from the smallest accepting state of the final subset. For
/// each step X --c--> Y arriving at q in Y, the chosen predecessor is the
/// c-transition out of X whose target reaches q by the shortest ε-path,
/// ties broken by transition id; ε-paths themselves are shortest with
/// lexicographically smallest ε-ids. Throws MalformedTrace on a rejecting trace.
NfaWitness d_to_n(const Nfa& n, const Dfa& d, const DfaTrace& tr);
/// As d_to_n for traces from d.init, prefixed with the canonical ε-path from n.init.
NfaTrace d_to_n_from_init(const Nfa& n, const Dfa& d, const DfaTrace& tr);

// ----------------------------------------------------- traces as a grammar

std::string dfa_trace_nonterminal(State s, bool accept);
/// TraceD_s_b ::= |nil: eps (when isAcc(s) = b) |cons<rank>: 'c' TraceD_{delta(s,c)}_b ...
GrammarEnv dfa_trace_grammar(const Dfa& d);
/// |true: TraceD_s_true |false: TraceD_s_false
GrammarExpr dfa_any_trace(State s);
ParseTree dfa_trace_to_tree(const Dfa& d, const DfaTrace& t);
/// Throws MalformedTree.
DfaTrace tree_to_dfa_trace(const Dfa& d, const ParseTree& t);

/// parse_d as a parser: accepting traces from init versus rejecting ones.
Parser dfa_parser(const Dfa& d);

/// The full regex pipeline: thompson, determinize, and the DFA parser extended
/// to regex parses through the two trace translations.
struct RegexPipeline {
  Regex regex;
  Nfa nfa;
  Dfa dfa;
  /// Regex grammar merged with the DFA trace grammar.
  GrammarEnv env;
  GrammarExpr regex_start;
  /// Accepting DFA traces from init -> regex parses, and back.
  Transformer to_regex;
  Transformer from_regex;
  Parser parser;
};

RegexPipeline regex_pipeline(const Regex& r, const Alphabet& alphabet, bool full_powerset = false);

}  // namespace lambekd
