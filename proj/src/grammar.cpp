#include "lambekd/grammar.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace lambekd {

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::vector<Token> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw std::invalid_argument("alphabet must not be empty");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i].empty()) throw std::invalid_argument("alphabet tokens must be nonempty");
    if (!rank_.emplace(symbols_[i], i).second)
      throw std::invalid_argument("duplicate alphabet token '" + symbols_[i] + "'");
  }
}

std::optional<std::size_t> Alphabet::find(const Token& t) const {
  auto it = rank_.find(t);
  if (it == rank_.end()) return std::nullopt;
  return it->second;
}

std::size_t Alphabet::rank(const Token& t) const {
  auto it = rank_.find(t);
  if (it == rank_.end()) throw TokenOutOfAlphabet(t);
  return it->second;
}

std::vector<std::size_t> Alphabet::ranks(std::span<const Token> w) const {
  std::vector<std::size_t> out;
  out.reserve(w.size());
  for (const auto& t : w) out.push_back(rank(t));
  return out;
}

// ------------------------------------------------------------- GrammarExpr

namespace {

GrammarExpr::Kind kind_of(const GrammarNode& n) { return static_cast<GrammarExpr::Kind>(n.v.index()); }

bool same_branches(const std::vector<Branch>& a, const std::vector<Branch>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].first != b[i].first || !(a[i].second == b[i].second)) return false;
  return true;
}

}  // namespace

GrammarExpr GrammarExpr::lit(Token token) {
  return GrammarExpr(std::make_shared<const GrammarNode>(GrammarNode{expr::Lit{std::move(token)}}));
}

GrammarExpr GrammarExpr::eps() {
  static const GrammarExpr unit(std::make_shared<const GrammarNode>(GrammarNode{expr::Eps{}}));
  return unit;
}

GrammarExpr GrammarExpr::tensor(GrammarExpr left, GrammarExpr right) {
  return GrammarExpr(
      std::make_shared<const GrammarNode>(GrammarNode{expr::Tensor{std::move(left), std::move(right)}}));
}

GrammarExpr GrammarExpr::seq(std::vector<GrammarExpr> parts) {
  if (parts.empty()) return eps();
  GrammarExpr acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = tensor(parts[i], acc);
  return acc;
}

GrammarExpr GrammarExpr::sum(std::vector<Branch> branches) {
  return GrammarExpr(std::make_shared<const GrammarNode>(GrammarNode{expr::Sum{std::move(branches)}}));
}

GrammarExpr GrammarExpr::with(std::vector<Branch> branches) {
  return GrammarExpr(std::make_shared<const GrammarNode>(GrammarNode{expr::With{std::move(branches)}}));
}

GrammarExpr GrammarExpr::ref(std::string nonterminal) {
  return GrammarExpr(std::make_shared<const GrammarNode>(GrammarNode{expr::Ref{std::move(nonterminal)}}));
}

GrammarExpr GrammarExpr::reify(std::string predicate) {
  return GrammarExpr(std::make_shared<const GrammarNode>(GrammarNode{expr::Reify{std::move(predicate)}}));
}

GrammarExpr::Kind GrammarExpr::kind() const noexcept { return kind_of(*node_); }

bool operator==(const GrammarExpr& a, const GrammarExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node_->v);
        if constexpr (std::is_same_v<T, expr::Lit>) return x.token == y.token;
        else if constexpr (std::is_same_v<T, expr::Eps>) return true;
        else if constexpr (std::is_same_v<T, expr::Tensor>) return x.left == y.left && x.right == y.right;
        else if constexpr (std::is_same_v<T, expr::Sum> || std::is_same_v<T, expr::With>)
          return same_branches(x.branches, y.branches);
        else if constexpr (std::is_same_v<T, expr::Ref>) return x.name == y.name;
        else return x.predicate == y.predicate;
      },
      a.node_->v);
}

// -------------------------------------------------------------- GrammarEnv

GrammarEnv& GrammarEnv::define(const std::string& name, GrammarExpr body) {
  auto it = index_.find(name);
  if (it != index_.end()) {
    if (defs_[it->second].second == body) return *this;
    throw ConfigError("nonterminal '" + name + "' is already defined");
  }
  index_.emplace(name, defs_.size());
  defs_.emplace_back(name, std::move(body));
  return *this;
}

GrammarEnv& GrammarEnv::add_predicate(const std::string& id, Predicate p) {
  predicates_[id] = std::move(p);
  return *this;
}

const GrammarExpr& GrammarEnv::definition(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ConfigError("unknown nonterminal '" + name + "'");
  return defs_[it->second].second;
}

const Predicate* GrammarEnv::predicate(const std::string& id) const {
  auto it = predicates_.find(id);
  return it == predicates_.end() ? nullptr : &it->second;
}

GrammarEnv& GrammarEnv::merge(const GrammarEnv& other) {
  if (alphabet_.empty()) alphabet_ = other.alphabet_;
  else if (!other.alphabet_.empty() && !(alphabet_ == other.alphabet_))
    throw ConfigError("cannot merge grammar environments over different alphabets");
  for (const auto& [name, body] : other.defs_) define(name, body);
  for (const auto& [id, p] : other.predicates_)
    if (!predicates_.count(id)) predicates_.emplace(id, p);
  return *this;
}

// --------------------------------------------------------------- ParseTree

namespace {

ParseTree::Kind kind_of(const ParseNode& n) { return static_cast<ParseTree::Kind>(n.v.index()); }

template <class T>
std::shared_ptr<const ParseNode> make_node(T value, std::size_t len) {
  return std::make_shared<const ParseNode>(ParseNode{std::move(value), len});
}

template <class T>
int cmp3(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

}  // namespace

ParseTree ParseTree::lit(Token token) { return ParseTree(make_node(parse::LitLeaf{std::move(token)}, 1)); }

ParseTree ParseTree::eps() {
  static const ParseTree unit(make_node(parse::EpsLeaf{}, 0));
  return unit;
}

ParseTree ParseTree::pair(std::size_t split_len, ParseTree left, ParseTree right) {
  const std::size_t len = split_len + right.yield_length();
  return ParseTree(make_node(parse::Pair{split_len, std::move(left), std::move(right)}, len));
}

ParseTree ParseTree::pair(ParseTree left, ParseTree right) {
  const std::size_t split = left.yield_length();
  return pair(split, std::move(left), std::move(right));
}

ParseTree ParseTree::inj(std::string tag, ParseTree body) {
  const std::size_t len = body.yield_length();
  return ParseTree(make_node(parse::Inj{std::move(tag), std::move(body)}, len));
}

ParseTree ParseTree::tuple(std::vector<Entry> entries, Word yield) {
  const std::size_t len = yield.size();
  return ParseTree(make_node(parse::Tuple{std::move(entries), std::move(yield)}, len));
}

ParseTree ParseTree::tuple(std::vector<Entry> entries) {
  if (entries.empty()) throw ShapeMismatch("an empty tuple needs an explicit yield");
  Word w = yield_of(entries.front().second);
  return tuple(std::move(entries), std::move(w));
}

ParseTree ParseTree::roll(std::string nonterminal, ParseTree body) {
  const std::size_t len = body.yield_length();
  return ParseTree(make_node(parse::Roll{std::move(nonterminal), std::move(body)}, len));
}

ParseTree ParseTree::reify(std::string predicate, Word witness) {
  const std::size_t len = witness.size();
  return ParseTree(make_node(parse::ReifyLeaf{std::move(predicate), std::move(witness)}, len));
}

ParseTree::Kind ParseTree::kind() const noexcept { return kind_of(*node_); }

std::size_t ParseTree::yield_length() const noexcept { return node_->yield_length; }

int compare(const ParseTree& a, const ParseTree& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return cmp3(a.node_->v.index(), b.node_->v.index());
  return std::visit(
      [&](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node_->v);
        if constexpr (std::is_same_v<T, parse::LitLeaf>) return cmp3(x.token, y.token);
        else if constexpr (std::is_same_v<T, parse::EpsLeaf>) return 0;
        else if constexpr (std::is_same_v<T, parse::Pair>) {
          if (int c = cmp3(x.split_len, y.split_len)) return c;
          if (int c = compare(x.left, y.left)) return c;
          return compare(x.right, y.right);
        } else if constexpr (std::is_same_v<T, parse::Inj>) {
          if (int c = cmp3(x.tag, y.tag)) return c;
          return compare(x.body, y.body);
        } else if constexpr (std::is_same_v<T, parse::Tuple>) {
          if (int c = cmp3(x.yield, y.yield)) return c;
          if (int c = cmp3(x.entries.size(), y.entries.size())) return c;
          for (std::size_t i = 0; i < x.entries.size(); ++i) {
            if (int c = cmp3(x.entries[i].first, y.entries[i].first)) return c;
            if (int c = compare(x.entries[i].second, y.entries[i].second)) return c;
          }
          return 0;
        } else if constexpr (std::is_same_v<T, parse::Roll>) {
          if (int c = cmp3(x.nonterminal, y.nonterminal)) return c;
          return compare(x.body, y.body);
        } else {
          if (int c = cmp3(x.predicate, y.predicate)) return c;
          return cmp3(x.witness, y.witness);
        }
      },
      a.node_->v);
}

bool operator==(const ParseTree& a, const ParseTree& b) { return compare(a, b) == 0; }

namespace {

void append_yield(const ParseTree& t, Word& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, parse::LitLeaf>) out.push_back(x.token);
        else if constexpr (std::is_same_v<T, parse::EpsLeaf>) {
        } else if constexpr (std::is_same_v<T, parse::Pair>) {
          const std::size_t before = out.size();
          append_yield(x.left, out);
          if (out.size() - before != x.split_len)
            throw MalformedTree("pair split length " + std::to_string(x.split_len) +
                                " does not match left yield length " + std::to_string(out.size() - before));
          append_yield(x.right, out);
        } else if constexpr (std::is_same_v<T, parse::Inj>) append_yield(x.body, out);
        else if constexpr (std::is_same_v<T, parse::Tuple>) {
          for (const auto& [tag, entry] : x.entries) {
            Word ew;
            append_yield(entry, ew);
            if (ew != x.yield) throw MalformedTree("tuple entry '" + tag + "' disagrees on the yield");
          }
          out.insert(out.end(), x.yield.begin(), x.yield.end());
        } else if constexpr (std::is_same_v<T, parse::Roll>) append_yield(x.body, out);
        else out.insert(out.end(), x.witness.begin(), x.witness.end());
      },
      t.node().v);
}

}  // namespace

Word yield_of(const ParseTree& t) {
  Word out;
  out.reserve(t.yield_length());
  append_yield(t, out);
  return out;
}

// -------------------------------------------------------------- validation

namespace {

void check_tags(const std::vector<Branch>& branches, const std::string& path, ValidationReport& report) {
  std::set<std::string> seen;
  for (const auto& [tag, body] : branches) {
    if (tag.empty()) report.violations.push_back({path, "empty branch tag"});
    if (!seen.insert(tag).second) report.violations.push_back({path, "duplicate branch tag '" + tag + "'"});
  }
}

void validate_into(const GrammarEnv& env, const GrammarExpr& g, const std::string& path,
                   ValidationReport& report) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, expr::Lit>) {
          if (!env.alphabet().contains(x.token))
            report.violations.push_back({path, "literal '" + x.token + "' is not in the alphabet"});
        } else if constexpr (std::is_same_v<T, expr::Tensor>) {
          validate_into(env, x.left, path + "/left", report);
          validate_into(env, x.right, path + "/right", report);
        } else if constexpr (std::is_same_v<T, expr::Sum> || std::is_same_v<T, expr::With>) {
          check_tags(x.branches, path, report);
          for (const auto& [tag, body] : x.branches) validate_into(env, body, path + "/" + tag, report);
        } else if constexpr (std::is_same_v<T, expr::Ref>) {
          if (!env.defines(x.name))
            report.violations.push_back({path, "reference to undefined nonterminal '" + x.name + "'"});
        } else if constexpr (std::is_same_v<T, expr::Reify>) {
          if (!env.predicate(x.predicate))
            report.violations.push_back({path, "reify of unregistered predicate '" + x.predicate + "'"});
        }
      },
      g.node().v);
}

}  // namespace

ValidationReport validate_expr(const GrammarEnv& env, const GrammarExpr& g, const std::string& path) {
  ValidationReport report;
  validate_into(env, g, path, report);
  return report;
}

ValidationReport validate_env(const GrammarEnv& env) {
  ValidationReport report;
  if (env.alphabet().empty()) report.violations.push_back({"", "alphabet is empty"});
  for (const auto& [name, body] : env.definitions()) validate_into(env, body, name, report);
  return report;
}

// ------------------------------------------------------------- membership

namespace {

bool member(const GrammarEnv& env, const GrammarExpr& g, const ParseTree& t) {
  switch (g.kind()) {
    case GrammarExpr::Kind::Lit: {
      const auto* leaf = t.get<parse::LitLeaf>();
      return leaf && leaf->token == g.get<expr::Lit>()->token;
    }
    case GrammarExpr::Kind::Eps:
      return t.kind() == ParseTree::Kind::Eps;
    case GrammarExpr::Kind::Tensor: {
      const auto* p = t.get<parse::Pair>();
      const auto* e = g.get<expr::Tensor>();
      return p && member(env, e->left, p->left) && member(env, e->right, p->right);
    }
    case GrammarExpr::Kind::Sum: {
      const auto* inj = t.get<parse::Inj>();
      if (!inj) return false;
      for (const auto& [tag, body] : g.get<expr::Sum>()->branches)
        if (tag == inj->tag) return member(env, body, inj->body);
      return false;
    }
    case GrammarExpr::Kind::With: {
      const auto* tup = t.get<parse::Tuple>();
      const auto& branches = g.get<expr::With>()->branches;
      if (!tup || tup->entries.size() != branches.size()) return false;
      for (std::size_t i = 0; i < branches.size(); ++i) {
        if (tup->entries[i].first != branches[i].first) return false;
        if (!member(env, branches[i].second, tup->entries[i].second)) return false;
      }
      return true;
    }
    case GrammarExpr::Kind::Ref: {
      const auto* roll = t.get<parse::Roll>();
      const auto& name = g.get<expr::Ref>()->name;
      if (!roll || roll->nonterminal != name || !env.defines(name)) return false;
      return member(env, env.definition(name), roll->body);
    }
    case GrammarExpr::Kind::Reify: {
      const auto* leaf = t.get<parse::ReifyLeaf>();
      const auto& id = g.get<expr::Reify>()->predicate;
      if (!leaf || leaf->predicate != id) return false;
      const Predicate* p = env.predicate(id);
      return p && (*p)(leaf->witness);
    }
  }
  return false;
}

}  // namespace

bool well_formed(const GrammarEnv& env, const GrammarExpr& g, const ParseTree& t) {
  try {
    (void)yield_of(t);
  } catch (const MalformedTree&) {
    return false;
  }
  return member(env, g, t);
}

// ------------------------------------------------------------ transformers

Transformer identity_transformer(const GrammarExpr& g) {
  return Transformer{"identity", g, g, [](const ParseTree& t) { return t; }};
}

Transformer compose(const Transformer& f, const Transformer& g) {
  return Transformer{f.name + " . " + g.name, g.source, f.target,
                     [fa = f.apply, ga = g.apply](const ParseTree& t) { return fa(ga(t)); }};
}

ParseTree apply_checked(const Transformer& tr, const ParseTree& t) {
  ParseTree out = tr.apply(t);
  Word before = yield_of(t);
  Word after = yield_of(out);
  if (before != after)
    throw YieldViolation(tr.name, "input yield " + to_string(before) + ", output yield " + to_string(after));
  return out;
}

// ---------------------------------------------------------------- printing

namespace {

bool atomic(const ParseTree& t) {
  switch (t.kind()) {
    case ParseTree::Kind::Lit:
    case ParseTree::Kind::Eps:
    case ParseTree::Kind::Pair:
    case ParseTree::Kind::Tuple:
      return true;
    case ParseTree::Kind::Inj:
      return t.get<parse::Inj>()->body.kind() == ParseTree::Kind::Eps;
    case ParseTree::Kind::Roll:
      return atomic(t.get<parse::Roll>()->body);
    case ParseTree::Kind::Reify:
      return false;
  }
  return false;
}

void print(const ParseTree& t, std::ostream& os) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, parse::LitLeaf>) os << x.token;
        else if constexpr (std::is_same_v<T, parse::EpsLeaf>) os << "()";
        else if constexpr (std::is_same_v<T, parse::Pair>) {
          os << '(';
          print(x.left, os);
          os << ", ";
          print(x.right, os);
          os << ')';
        } else if constexpr (std::is_same_v<T, parse::Inj>) {
          os << x.tag;
          if (x.body.kind() == ParseTree::Kind::Eps) return;
          os << ' ';
          if (atomic(x.body)) print(x.body, os);
          else {
            os << '(';
            print(x.body, os);
            os << ')';
          }
        } else if constexpr (std::is_same_v<T, parse::Tuple>) {
          os << "&{";
          for (std::size_t i = 0; i < x.entries.size(); ++i) {
            if (i) os << ", ";
            os << x.entries[i].first << ": ";
            print(x.entries[i].second, os);
          }
          os << '}';
        } else if constexpr (std::is_same_v<T, parse::Roll>) print(x.body, os);
        else os << "reify " << x.predicate << ' ' << to_string(x.witness);
      },
      t.node().v);
}

}  // namespace

std::string to_string(const ParseTree& t) {
  std::ostringstream os;
  print(t, os);
  return os.str();
}

std::string to_string(const Word& w) {
  std::string out = "\"";
  bool multi = false;
  for (const auto& t : w) multi = multi || t.size() != 1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (multi && i) out += ' ';
    out += w[i];
  }
  return out + "\"";
}

Word chars(std::string_view text) {
  Word w;
  w.reserve(text.size());
  for (char c : text) w.emplace_back(1, c);
  return w;
}

}  // namespace lambekd
