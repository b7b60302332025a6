#pragma once

// The lambekd command line as a library call, so tests can drive it in-process.
//
// Exit codes: 0 accept/pass, 1 reject/fail, 2 usage or configuration error.
// Results go to `out` as JSON (one document, or one line per record for
// enumerate); diagnostics go to `err`.

#include <iosfwd>
#include <string>
#include <vector>

#include "lambekd/grammar.hpp"

namespace lambekd {

inline constexpr int kExitAccept = 0;
inline constexpr int kExitReject = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Command-line input to tokens. With `whitespace`, split on blanks. Otherwise
/// every character is a token when all symbols are single characters, and
/// longest-match lexing (blanks skipped) is used when some symbol is longer.
/// Throws TokenOutOfAlphabet.
Word tokenize(const std::string& input, const Alphabet& alphabet, bool whitespace);

}  // namespace lambekd
