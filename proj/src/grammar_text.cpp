#include "lambekd/grammar_text.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace lambekd {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }
bool space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

/// Characters of one logical declaration, each mapped back to its offset in the source.
struct Source {
  std::string text;
  std::vector<std::size_t> origin;
  std::size_t end_offset = 0;

  void append(std::string_view piece, std::size_t offset) {
    if (!text.empty()) {
      text.push_back(' ');
      origin.push_back(offset);
    }
    for (std::size_t i = 0; i < piece.size(); ++i) {
      text.push_back(piece[i]);
      origin.push_back(offset + i);
    }
    end_offset = offset + piece.size();
  }
  std::size_t where(std::size_t i) const { return i < origin.size() ? origin[i] : end_offset; }
};

class ExprParser {
 public:
  explicit ExprParser(const Source& src) : src_(src), s_(src.text) {}

  std::string ident() {
    skip();
    if (pos_ >= s_.size() || !ident_start(s_[pos_])) fail("expected an identifier");
    std::size_t b = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return s_.substr(b, pos_ - b);
  }

  void expect(std::string_view lit) {
    skip();
    if (s_.compare(pos_, lit.size(), lit) != 0) fail("expected '" + std::string(lit) + "'");
    pos_ += lit.size();
  }

  bool at_end() {
    skip();
    return pos_ >= s_.size();
  }

  void finish() {
    if (!at_end()) fail("unexpected trailing input");
  }

  GrammarExpr expr() {
    skip();
    if (peek('|')) return alternatives();
    return sequence();
  }

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, src_.where(pos_)); }

 private:
  void skip() {
    while (pos_ < s_.size() && space(s_[pos_])) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  GrammarExpr alternatives() {
    std::vector<Branch> branches;
    while (peek('|')) {
      ++pos_;
      std::string tag = ident();
      expect(":");
      branches.emplace_back(std::move(tag), sequence());
    }
    return GrammarExpr::sum(std::move(branches));
  }

  bool atom_follows() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return c == '\'' || c == '(' || c == '&' || ident_start(c);
  }

  GrammarExpr sequence() {
    std::vector<GrammarExpr> parts;
    if (!atom_follows()) fail("expected an expression");
    while (atom_follows()) parts.push_back(atom());
    return GrammarExpr::seq(std::move(parts));
  }

  std::string quoted() {
    ++pos_;  // opening quote
    std::string tok;
    while (true) {
      if (pos_ >= s_.size()) fail("unterminated quoted token");
      char c = s_[pos_++];
      if (c == '\'') break;
      if (c == '\\') {
        if (pos_ >= s_.size()) fail("unterminated escape");
        c = s_[pos_++];
      }
      tok.push_back(c);
    }
    if (tok.empty()) fail("empty quoted token");
    return tok;
  }

  GrammarExpr atom() {
    skip();
    char c = s_[pos_];
    if (c == '\'') return GrammarExpr::lit(quoted());
    if (c == '(') {
      ++pos_;
      GrammarExpr inner = expr();
      expect(")");
      return inner;
    }
    if (c == '&') {
      expect("&{");
      std::vector<Branch> branches;
      if (peek('}')) {
        ++pos_;
        return GrammarExpr::with({});
      }
      while (true) {
        std::string tag = ident();
        expect(":");
        branches.emplace_back(std::move(tag), expr());
        if (peek(',')) {
          ++pos_;
          continue;
        }
        expect("}");
        break;
      }
      return GrammarExpr::with(std::move(branches));
    }
    std::size_t here = pos_;
    std::string name = ident();
    if (name == "eps") return GrammarExpr::eps();
    if (name == "empty") return GrammarExpr::empty();
    if (name == "top") return GrammarExpr::top();
    if (name == "reify") {
      expect("(");
      std::string p = ident();
      expect(")");
      return GrammarExpr::reify(std::move(p));
    }
    if (name == "alphabet") {
      pos_ = here;
      fail("'alphabet' is reserved");
    }
    return GrammarExpr::ref(std::move(name));
  }

  const Source& src_;
  const std::string& s_;
  std::size_t pos_ = 0;
};

/// Strips a trailing '#' comment, ignoring '#' inside quotes.
std::string_view strip_comment(std::string_view line) {
  bool in_quote = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_quote && c == '\\') {
      ++i;
      continue;
    }
    if (c == '\'') in_quote = !in_quote;
    else if (c == '#' && !in_quote) return line.substr(0, i);
  }
  return line;
}

std::vector<Token> alphabet_tokens(std::string_view rest, std::size_t offset) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < rest.size()) {
    if (space(rest[i])) {
      ++i;
      continue;
    }
    std::string tok;
    if (rest[i] == '\'') {
      ++i;
      while (i < rest.size() && rest[i] != '\'') {
        if (rest[i] == '\\' && i + 1 < rest.size()) ++i;
        tok.push_back(rest[i++]);
      }
      if (i >= rest.size()) throw SyntaxError("unterminated quoted token", offset + i);
      ++i;
    } else {
      while (i < rest.size() && !space(rest[i])) tok.push_back(rest[i++]);
    }
    out.push_back(std::move(tok));
  }
  return out;
}

bool needs_quotes(const Token& t) {
  for (char c : t)
    if (space(c) || c == '#' || c == '\'' || c == '\\') return true;
  return t.empty();
}

std::string quote(const Token& t) {
  std::string out = "'";
  for (char c : t) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "'";
}

enum class Ctx { Top, Seq, Atom };

void print(const GrammarExpr& g, Ctx ctx, std::ostream& os) {
  auto wrap = [&](Ctx need, auto&& body) {
    bool parens = static_cast<int>(ctx) > static_cast<int>(need);
    if (parens) os << '(';
    body();
    if (parens) os << ')';
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, expr::Lit>) os << quote(x.token);
        else if constexpr (std::is_same_v<T, expr::Eps>) os << "eps";
        else if constexpr (std::is_same_v<T, expr::Tensor>) {
          wrap(Ctx::Seq, [&] {
            print(x.left, Ctx::Atom, os);
            os << ' ';
            print(x.right, Ctx::Seq, os);
          });
        } else if constexpr (std::is_same_v<T, expr::Sum>) {
          if (x.branches.empty()) {
            os << "empty";
            return;
          }
          wrap(Ctx::Top, [&] {
            for (std::size_t i = 0; i < x.branches.size(); ++i) {
              if (i) os << ' ';
              os << '|' << x.branches[i].first << ": ";
              print(x.branches[i].second, Ctx::Seq, os);
            }
          });
        } else if constexpr (std::is_same_v<T, expr::With>) {
          if (x.branches.empty()) {
            os << "top";
            return;
          }
          os << "&{";
          for (std::size_t i = 0; i < x.branches.size(); ++i) {
            if (i) os << ", ";
            os << x.branches[i].first << ": ";
            print(x.branches[i].second, Ctx::Top, os);
          }
          os << '}';
        } else if constexpr (std::is_same_v<T, expr::Ref>) os << x.name;
        else os << "reify(" << x.predicate << ')';
      },
      g.node().v);
}

}  // namespace

GrammarFile parse_grammar_text(std::string_view text, const std::map<std::string, Predicate>& predicates) {
  std::optional<Alphabet> alphabet;
  std::vector<std::pair<Source, std::size_t>> decls;  // source, offset of the declaration

  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t nl = text.find('\n', line_start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = strip_comment(text.substr(line_start, nl - line_start));
    std::size_t b = 0;
    while (b < line.size() && space(line[b])) ++b;
    std::size_t e = line.size();
    while (e > b && space(line[e - 1])) --e;
    std::string_view body = line.substr(b, e - b);
    const std::size_t offset = line_start + b;

    if (!body.empty()) {
      if (body.substr(0, 8) == "alphabet" && (body.size() == 8 || space(body[8]))) {
        if (alphabet) throw SyntaxError("second alphabet declaration", offset);
        try {
          alphabet = Alphabet(alphabet_tokens(body.substr(8), offset + 8));
        } catch (const std::invalid_argument& ex) {
          throw SyntaxError(ex.what(), offset);
        }
      } else if (body.front() == '|') {
        if (decls.empty()) throw SyntaxError("continuation line without a declaration", offset);
        decls.back().first.append(body, offset);
      } else {
        Source src;
        src.append(body, offset);
        decls.emplace_back(std::move(src), offset);
      }
    }
    if (nl == text.size()) break;
    line_start = nl + 1;
  }

  if (!alphabet) throw SyntaxError("missing alphabet declaration", 0);
  GrammarFile out{GrammarEnv(*alphabet), std::nullopt};
  for (const auto& [src, offset] : decls) {
    ExprParser p(src);
    std::string name = p.ident();
    p.expect("::=");
    GrammarExpr body = p.expr();
    p.finish();
    if (out.env.defines(name)) throw SyntaxError("nonterminal '" + name + "' declared twice", offset);
    out.env.define(name, body);
    if (!out.start) out.start = name;
  }

  // Register the predicates the file refers to.
  std::vector<GrammarExpr> stack;
  for (const auto& [name, body] : out.env.definitions()) stack.push_back(body);
  while (!stack.empty()) {
    GrammarExpr g = stack.back();
    stack.pop_back();
    if (const auto* r = g.get<expr::Reify>()) {
      auto it = predicates.find(r->predicate);
      if (it != predicates.end() && !out.env.predicate(r->predicate)) out.env.add_predicate(it->first, it->second);
    } else if (const auto* t = g.get<expr::Tensor>()) {
      stack.push_back(t->left);
      stack.push_back(t->right);
    } else if (const auto* s = g.get<expr::Sum>()) {
      for (const auto& br : s->branches) stack.push_back(br.second);
    } else if (const auto* w = g.get<expr::With>()) {
      for (const auto& br : w->branches) stack.push_back(br.second);
    }
  }
  return out;
}

GrammarExpr parse_grammar_expr(std::string_view text) {
  Source src;
  src.append(text, 0);
  ExprParser p(src);
  GrammarExpr g = p.expr();
  p.finish();
  return g;
}

std::string to_text(const GrammarExpr& g) {
  std::ostringstream os;
  print(g, Ctx::Top, os);
  return os.str();
}

std::string to_text(const GrammarEnv& env) {
  std::ostringstream os;
  os << "alphabet";
  for (const auto& t : env.alphabet().symbols()) os << ' ' << (needs_quotes(t) ? quote(t) : t);
  os << '\n';
  for (const auto& [name, body] : env.definitions()) os << name << " ::= " << to_text(body) << '\n';
  return os.str();
}

}  // namespace lambekd
