#include "lambekd/regex.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace lambekd {

struct Regex::Node {
  Kind kind;
  Token token;
  std::vector<Regex> kids;
};

Regex Regex::lit(Token t) { return Regex(std::make_shared<const Node>(Node{Kind::Lit, std::move(t), {}})); }
Regex Regex::eps() { return Regex(std::make_shared<const Node>(Node{Kind::Eps, {}, {}})); }
Regex Regex::empty() { return Regex(std::make_shared<const Node>(Node{Kind::Empty, {}, {}})); }
Regex Regex::alt(Regex l, Regex r) {
  return Regex(std::make_shared<const Node>(Node{Kind::Union, {}, {std::move(l), std::move(r)}}));
}
Regex Regex::cat(Regex l, Regex r) {
  return Regex(std::make_shared<const Node>(Node{Kind::Concat, {}, {std::move(l), std::move(r)}}));
}
Regex Regex::star(Regex body) { return Regex(std::make_shared<const Node>(Node{Kind::Star, {}, {std::move(body)}})); }

Regex::Kind Regex::kind() const noexcept { return node_->kind; }

const Token& Regex::token() const {
  if (node_->kind != Kind::Lit) throw ShapeMismatch("regex is not a literal");
  return node_->token;
}

const Regex& Regex::left() const {
  if (node_->kids.empty()) throw ShapeMismatch("regex has no operands");
  return node_->kids[0];
}

const Regex& Regex::right() const {
  if (node_->kids.size() < 2) throw ShapeMismatch("regex has no right operand");
  return node_->kids[1];
}

bool operator==(const Regex& a, const Regex& b) {
  if (a.node_ == b.node_) return true;
  return a.node_->kind == b.node_->kind && a.node_->token == b.node_->token && a.node_->kids == b.node_->kids;
}

// ------------------------------------------------------------------ parser

namespace {

class RegexParser {
 public:
  explicit RegexParser(std::string_view s) : s_(s) {}

  Regex run() {
    Regex r = alternation();
    skip();
    if (pos_ < s_.size()) fail(s_[pos_] == ')' ? "unbalanced ')'" : "unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool atom_follows() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return c == '\'' || c == '(' || std::isalpha(static_cast<unsigned char>(c));
  }

  Regex alternation() {
    Regex r = concatenation();
    while (true) {
      skip();
      if (pos_ >= s_.size() || s_[pos_] != '|') return r;
      ++pos_;
      r = Regex::alt(r, concatenation());
    }
  }

  Regex concatenation() {
    if (!atom_follows()) fail("expected a regular expression");
    Regex r = postfix();
    while (atom_follows()) r = Regex::cat(r, postfix());
    return r;
  }

  Regex postfix() {
    Regex r = atom();
    while (true) {
      skip();
      if (pos_ >= s_.size() || s_[pos_] != '*') return r;
      ++pos_;
      r = Regex::star(r);
    }
  }

  Regex atom() {
    skip();
    const std::size_t at = pos_;
    char c = s_[pos_];
    if (c == '\'') {
      ++pos_;
      Token t;
      while (true) {
        if (pos_ >= s_.size()) throw SyntaxError("unterminated quoted token", at);
        char d = s_[pos_++];
        if (d == '\'') break;
        if (d == '\\') {
          if (pos_ >= s_.size()) throw SyntaxError("unterminated escape", at);
          d = s_[pos_++];
        }
        t.push_back(d);
      }
      if (t.empty()) throw SyntaxError("empty quoted token", at);
      return Regex::lit(std::move(t));
    }
    if (c == '(') {
      ++pos_;
      Regex inner = alternation();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') throw SyntaxError("unbalanced '('", at);
      ++pos_;
      return inner;
    }
    std::size_t b = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string_view word = s_.substr(b, pos_ - b);
    if (word == "eps") return Regex::eps();
    if (word == "empty") return Regex::empty();
    throw SyntaxError("unknown keyword '" + std::string(word) + "'", at);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

// Precedence levels: 0 union, 1 concat, 2 star/atom.
void print(const Regex& r, int ctx, std::ostream& os) {
  auto open = [&](int level) {
    if (ctx > level) os << '(';
  };
  auto close = [&](int level) {
    if (ctx > level) os << ')';
  };
  switch (r.kind()) {
    case Regex::Kind::Lit:
      os << '\'';
      for (char c : r.token()) {
        if (c == '\'' || c == '\\') os << '\\';
        os << c;
      }
      os << '\'';
      break;
    case Regex::Kind::Eps:
      os << "eps";
      break;
    case Regex::Kind::Empty:
      os << "empty";
      break;
    case Regex::Kind::Union:
      open(0);
      print(r.left(), 0, os);
      os << " | ";
      print(r.right(), 1, os);
      close(0);
      break;
    case Regex::Kind::Concat:
      open(1);
      print(r.left(), 1, os);
      os << ' ';
      print(r.right(), 2, os);
      close(1);
      break;
    case Regex::Kind::Star:
      print(r.body(), 3, os);
      os << '*';
      break;
  }
}

}  // namespace

Regex parse_regex_text(std::string_view text) { return RegexParser(text).run(); }

std::string to_text(const Regex& r) {
  std::ostringstream os;
  print(r, 0, os);
  return os.str();
}

// ---------------------------------------------------------------- grammars

namespace {

void collect_literals(const Regex& r, std::vector<Token>& out) {
  switch (r.kind()) {
    case Regex::Kind::Lit:
      if (std::find(out.begin(), out.end(), r.token()) == out.end()) out.push_back(r.token());
      break;
    case Regex::Kind::Union:
    case Regex::Kind::Concat:
      collect_literals(r.left(), out);
      collect_literals(r.right(), out);
      break;
    case Regex::Kind::Star:
      collect_literals(r.body(), out);
      break;
    default:
      break;
  }
}

GrammarExpr lower(const Regex& r, GrammarEnv& env, std::size_t& stars) {
  switch (r.kind()) {
    case Regex::Kind::Lit:
      env.alphabet().rank(r.token());
      return GrammarExpr::lit(r.token());
    case Regex::Kind::Eps:
      return GrammarExpr::eps();
    case Regex::Kind::Empty:
      return GrammarExpr::empty();
    case Regex::Kind::Union: {
      GrammarExpr l = lower(r.left(), env, stars);
      GrammarExpr rr = lower(r.right(), env, stars);
      return GrammarExpr::sum({{"inl", l}, {"inr", rr}});
    }
    case Regex::Kind::Concat: {
      GrammarExpr l = lower(r.left(), env, stars);
      GrammarExpr rr = lower(r.right(), env, stars);
      return GrammarExpr::tensor(l, rr);
    }
    case Regex::Kind::Star: {
      const std::string name = star_name(stars++);
      GrammarExpr body = lower(r.body(), env, stars);
      env.define(name, GrammarExpr::sum({{"nil", GrammarExpr::eps()},
                                         {"cons", GrammarExpr::tensor(body, GrammarExpr::ref(name))}}));
      return GrammarExpr::ref(name);
    }
  }
  return GrammarExpr::empty();
}

}  // namespace

std::vector<Token> regex_literals(const Regex& r) {
  std::vector<Token> out;
  collect_literals(r, out);
  return out;
}

Alphabet default_alphabet(const Regex& r) {
  std::vector<Token> symbols{"a", "b", "c"};
  for (const auto& t : regex_literals(r))
    if (std::find(symbols.begin(), symbols.end(), t) == symbols.end()) symbols.push_back(t);
  return Alphabet(std::move(symbols));
}

std::string star_name(std::size_t k) { return "Star" + std::to_string(k); }

RegexGrammar regex_to_grammar(const Regex& r, const Alphabet& alphabet) {
  GrammarEnv env(alphabet);
  std::size_t stars = 0;
  GrammarExpr start = lower(r, env, stars);
  return {std::move(env), std::move(start)};
}

}  // namespace lambekd
