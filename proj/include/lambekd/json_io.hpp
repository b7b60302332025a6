#pragma once

// JSON encodings of the library's values. Field order is fixed, so equal
// values always serialize to identical bytes.

#include <json.hpp>

#include "lambekd/dfa.hpp"
#include "lambekd/dyck.hpp"
#include "lambekd/expr.hpp"
#include "lambekd/oracle.hpp"

namespace lambekd {

using Json = nlohmann::ordered_json;

Json to_json(const Word& w);
Word word_from_json(const Json& j);

/// {"kind":"lit","token":..} | {"kind":"eps"} | {"kind":"pair","split":k,"left":..,"right":..}
/// | {"kind":"inj","tag":..,"body":..} | {"kind":"tuple","yield":[..],"entries":[{"tag":..,"tree":..}]}
/// | {"kind":"roll","nonterminal":..,"body":..} | {"kind":"reify","predicate":..,"witness":[..]}
Json to_json(const ParseTree& t);
/// Throws MalformedTree on unknown shapes.
ParseTree parse_tree_from_json(const Json& j);

/// {"status","maxLen","checked","counterexample","detail"}
Json to_json(const EquivReport& r);

Json to_json(const Nfa& n);
/// Throws ConfigError on a malformed machine.
Nfa nfa_from_json(const Json& j);
/// NFA fields, with every delta entry as a transition, plus "subsets" when present.
Json to_json(const Dfa& d);
Dfa dfa_from_json(const Json& j);

/// Nested nil/cons; cons nodes carry the accept bit of their tail.
Json to_json(const DfaTrace& t);
DfaTrace dfa_trace_from_json(const Json& j);

Json to_json(const DyckTree& t);
Json to_json(const CounterTrace& t);
Json to_json(const ExpTree& t);
Json to_json(const AtomTree& t);
Json to_json(const LookaheadTrace& t);

/// Compact by default; indent 2 when pretty. No trailing newline.
std::string dump(const Json& j, bool pretty = false);

}  // namespace lambekd
