#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lambekd {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parse tree violates the yield equations or does not match the grammar it was given for.
class MalformedTree : public Error {
 public:
  using Error::Error;
};

/// An automaton trace does not replay through its machine.
class MalformedTrace : public Error {
 public:
  using Error::Error;
};

/// A productive ε-cycle makes the parse set of some (grammar, string) pair infinite.
class InfiniteParseSet : public Error {
 public:
  using Error::Error;
};

/// Same as InfiniteParseSet, on the NFA side.
class InfiniteTraceSet : public Error {
 public:
  using Error::Error;
};

class TokenOutOfAlphabet : public Error {
 public:
  explicit TokenOutOfAlphabet(const std::string& token)
      : Error("token '" + token + "' is not in the alphabet"), token_(token) {}
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// A transformer returned a tree whose yield differs from its input's.
class YieldViolation : public Error {
 public:
  YieldViolation(const std::string& transformer, const std::string& detail)
      : Error("transformer '" + transformer + "' broke yield preservation: " + detail),
        transformer_(transformer) {}
  const std::string& transformer() const noexcept { return transformer_; }

 private:
  std::string transformer_;
};

class MembershipViolation : public Error {
 public:
  using Error::Error;
};

/// Invalid environment, unknown nonterminal or predicate, bad option.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace lambekd
