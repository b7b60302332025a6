#pragma once

// Nondeterministic automata with ε-moves, their traces, Thompson's
// construction, and the bijection between regex parses and Thompson traces.

#include <cstddef>
#include <string>
#include <vector>

#include "lambekd/grammar.hpp"
#include "lambekd/regex.hpp"

namespace lambekd {

using State = std::size_t;

struct Transition {
  std::size_t id;
  State src;
  Token label;
  State dst;
};

struct EpsTransition {
  std::size_t id;
  State src;
  State dst;
};

/// transitions[i].id == i and eps[i].id == i; the id order is the
/// disambiguation order used wherever a choice between edges is made.
struct Nfa {
  Alphabet alphabet;
  std::size_t states = 0;
  State init = 0;
  std::vector<bool> accepting;
  std::vector<Transition> transitions;
  std::vector<EpsTransition> eps;

  bool is_accepting(State s) const { return accepting.at(s); }
};

/// Throws ConfigError on out-of-range endpoints, non-dense ids or foreign labels.
void validate_nfa(const Nfa& n);

/// One step of a trace: a labeled transition (cons) or an ε-transition (εcons).
struct TraceStep {
  bool epsilon = false;
  std::size_t id = 0;
  friend bool operator==(const TraceStep&, const TraceStep&) = default;
  friend auto operator<=>(const TraceStep&, const TraceStep&) = default;
};

/// cons/εcons steps from `start`, closed by nil at the final state.
struct NfaTrace {
  State start = 0;
  std::vector<TraceStep> steps;
  friend bool operator==(const NfaTrace&, const NfaTrace&) = default;
};

/// Final state after replaying all steps. Throws MalformedTrace if the steps do not chain.
State trace_end(const Nfa& n, const NfaTrace& tr);
/// Labels of the cons steps in order.
Word trace_yield(const Nfa& n, const NfaTrace& tr);
/// Steps chain from start and nil sits at an accepting state.
bool trace_valid(const Nfa& n, const NfaTrace& tr);

/// All accepting traces from s with yield w, ordered nil < cons(id) < εcons(id)
/// at every step. Throws InfiniteTraceSet when an ε-cycle can be pumped on the way
/// to acceptance, TokenOutOfAlphabet on foreign tokens.
std::vector<NfaTrace> enumerate_traces(const Nfa& n, State s, const Word& w);

/// The hand-drawn three-state machine for ('a'* 'b') | 'c':
/// ε 0->1 (0to1), 1 -a-> 1 (1to1), 1 -b-> 2 (1to2), 0 -c-> 2 (0to2); 2 accepts.
Nfa fixture_nfa();

/// Thompson's construction. Literals must be in alphabet.
Nfa thompson(const Regex& r, const Alphabet& alphabet);
inline Nfa thompson(const Regex& r) { return thompson(r, default_alphabet(r)); }

/// Regex parse (a tree of regex_to_grammar(r)) -> accepting trace of thompson(r) from init.
/// Throws MalformedTree.
NfaTrace regex_parse_to_trace(const Regex& r, const ParseTree& t);
/// Inverse of regex_parse_to_trace. Throws MalformedTrace.
ParseTree trace_to_regex_parse(const Regex& r, const NfaTrace& tr);

// ------------------------------------------------- traces as a grammar

/// Nonterminal for traces starting at state s.
std::string nfa_trace_nonterminal(State s);

/// Trace_q ::= |nil: eps (accepting q only) |cons<id>: 'c' Trace_dst ... |eps<id>: Trace_dst ...
GrammarEnv nfa_trace_grammar(const Nfa& n);
ParseTree nfa_trace_to_tree(const Nfa& n, const NfaTrace& tr);
/// Throws MalformedTree.
NfaTrace tree_to_nfa_trace(const Nfa& n, const ParseTree& t);

}  // namespace lambekd
