#include "lambekd/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

namespace lambekd {

// ------------------------------------------------------------- ParseOracle

namespace {

struct CNode {
  GrammarExpr::Kind kind = GrammarExpr::Kind::Eps;
  std::size_t sym = 0;
  std::vector<std::size_t> kids;
  std::vector<std::string> tags;
  std::string name;
  const Predicate* pred = nullptr;
};

std::uint64_t add_checked(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("parse count overflows 64 bits");
  return r;
}

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("parse count overflows 64 bits");
  return r;
}

}  // namespace

struct ParseOracle::Impl {
  GrammarEnv env;
  GrammarExpr start;
  std::vector<CNode> nodes;
  std::vector<std::size_t> order;  // children before parents (up to cycles)
  std::map<const void*, std::size_t> by_expr;
  std::map<std::string, std::size_t> by_ref;
  std::size_t root = 0;

  Impl(GrammarEnv e, GrammarExpr s) : env(std::move(e)), start(std::move(s)) {
    ValidationReport report = validate_env(env);
    ValidationReport local = validate_expr(env, start, "<start>");
    report.violations.insert(report.violations.end(), local.violations.begin(), local.violations.end());
    if (!report.ok()) {
      std::string msg = "invalid grammar:";
      for (const auto& v : report.violations) msg += " [" + v.path + "] " + v.message + ";";
      throw ConfigError(msg);
    }
    root = compile(start);
  }

  std::size_t compile(const GrammarExpr& g) {
    if (const auto* r = g.get<expr::Ref>()) {
      if (auto it = by_ref.find(r->name); it != by_ref.end()) return it->second;
      std::size_t id = fresh(g);
      by_ref.emplace(r->name, id);
      nodes[id].name = r->name;
      std::size_t body = compile(env.definition(r->name));
      nodes[id].kids = {body};
      order.push_back(id);
      return id;
    }
    if (auto it = by_expr.find(g.id()); it != by_expr.end()) return it->second;
    std::size_t id = fresh(g);
    by_expr.emplace(g.id(), id);
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, expr::Lit>) nodes[id].sym = env.alphabet().rank(x.token);
          else if constexpr (std::is_same_v<T, expr::Tensor>) {
            std::size_t l = compile(x.left);
            std::size_t r = compile(x.right);
            nodes[id].kids = {l, r};
          } else if constexpr (std::is_same_v<T, expr::Sum> || std::is_same_v<T, expr::With>) {
            std::vector<std::size_t> kids;
            std::vector<std::string> tags;
            for (const auto& [tag, body] : x.branches) {
              kids.push_back(compile(body));
              tags.push_back(tag);
            }
            nodes[id].kids = std::move(kids);
            nodes[id].tags = std::move(tags);
          } else if constexpr (std::is_same_v<T, expr::Reify>) {
            nodes[id].name = x.predicate;
            nodes[id].pred = env.predicate(x.predicate);
          }
        },
        g.node().v);
    order.push_back(id);
    return id;
  }

  std::size_t fresh(const GrammarExpr& g) {
    nodes.emplace_back();
    nodes.back().kind = g.kind();
    return nodes.size() - 1;
  }
};

namespace {

/// Per-word tables.
class Query {
 public:
  Query(const ParseOracle::Impl& g, const Word& w)
      : g_(g), word_(w), sym_(g.env.alphabet().ranks(w)), n_(w.size()), spans_((n_ + 1) * (n_ + 1)) {
    nonempty_.assign(g.nodes.size() * spans_, 0);
    recognize();
  }

  bool nonempty(std::size_t node, std::size_t i, std::size_t j) const { return nonempty_[key(node, i, j)] != 0; }
  std::size_t length() const { return n_; }

  std::uint64_t count(std::size_t node, std::size_t i, std::size_t j) {
    if (!nonempty(node, i, j)) return 0;
    if (counts_.empty()) {
      counts_.assign(g_.nodes.size() * spans_, 0);
      state_.assign(g_.nodes.size() * spans_, 0);
    }
    const std::size_t k = key(node, i, j);
    if (state_[k] == 2) return counts_[k];
    if (state_[k] == 1) cycle(node);
    state_[k] = 1;
    const CNode& c = g_.nodes[node];
    std::uint64_t total = 0;
    switch (c.kind) {
      case GrammarExpr::Kind::Lit:
      case GrammarExpr::Kind::Eps:
      case GrammarExpr::Kind::Reify:
        total = 1;
        break;
      case GrammarExpr::Kind::Tensor:
        for (std::size_t m = i; m <= j; ++m)
          if (nonempty(c.kids[0], i, m) && nonempty(c.kids[1], m, j))
            total = add_checked(total, mul_checked(count(c.kids[0], i, m), count(c.kids[1], m, j)));
        break;
      case GrammarExpr::Kind::Sum:
        for (std::size_t b : c.kids) total = add_checked(total, count(b, i, j));
        break;
      case GrammarExpr::Kind::With:
        total = 1;
        for (std::size_t b : c.kids) total = mul_checked(total, count(b, i, j));
        break;
      case GrammarExpr::Kind::Ref:
        total = count(c.kids[0], i, j);
        break;
    }
    counts_[k] = total;
    state_[k] = 2;
    return total;
  }

  const std::vector<ParseTree>& trees(std::size_t node, std::size_t i, std::size_t j) {
    static const std::vector<ParseTree> none;
    if (!nonempty(node, i, j)) return none;
    if (memo_.empty()) {
      memo_.resize(g_.nodes.size() * spans_);
      tree_state_.assign(g_.nodes.size() * spans_, 0);
    }
    const std::size_t k = key(node, i, j);
    if (tree_state_[k] == 2) return *memo_[k];
    if (tree_state_[k] == 1) cycle(node);
    tree_state_[k] = 1;
    const CNode& c = g_.nodes[node];
    std::vector<ParseTree> out;
    switch (c.kind) {
      case GrammarExpr::Kind::Lit:
        out.push_back(ParseTree::lit(word_[i]));
        break;
      case GrammarExpr::Kind::Eps:
        out.push_back(ParseTree::eps());
        break;
      case GrammarExpr::Kind::Reify:
        out.push_back(ParseTree::reify(c.name, slice(i, j)));
        break;
      case GrammarExpr::Kind::Tensor:
        for (std::size_t m = i; m <= j; ++m) {
          if (!nonempty(c.kids[0], i, m) || !nonempty(c.kids[1], m, j)) continue;
          const auto& ls = trees(c.kids[0], i, m);
          const auto& rs = trees(c.kids[1], m, j);
          for (const auto& l : ls)
            for (const auto& r : rs) out.push_back(ParseTree::pair(m - i, l, r));
        }
        break;
      case GrammarExpr::Kind::Sum:
        for (std::size_t b = 0; b < c.kids.size(); ++b)
          for (const auto& t : trees(c.kids[b], i, j)) out.push_back(ParseTree::inj(c.tags[b], t));
        break;
      case GrammarExpr::Kind::With: {
        std::vector<const std::vector<ParseTree>*> parts;
        for (std::size_t b : c.kids) parts.push_back(&trees(b, i, j));
        const Word y = slice(i, j);
        std::vector<std::size_t> idx(parts.size(), 0);
        while (true) {
          std::vector<Entry> entries;
          entries.reserve(parts.size());
          for (std::size_t b = 0; b < parts.size(); ++b) entries.emplace_back(c.tags[b], (*parts[b])[idx[b]]);
          out.push_back(ParseTree::tuple(std::move(entries), y));
          std::size_t b = parts.size();
          while (b > 0 && idx[b - 1] + 1 == parts[b - 1]->size()) idx[--b] = 0;
          if (b == 0) break;
          ++idx[b - 1];
        }
        break;
      }
      case GrammarExpr::Kind::Ref:
        for (const auto& t : trees(c.kids[0], i, j)) out.push_back(ParseTree::roll(c.name, t));
        break;
    }
    memo_[k] = std::move(out);
    tree_state_[k] = 2;
    return *memo_[k];
  }

 private:
  std::size_t key(std::size_t node, std::size_t i, std::size_t j) const { return node * spans_ + i * (n_ + 1) + j; }

  Word slice(std::size_t i, std::size_t j) const {
    return Word(word_.begin() + static_cast<std::ptrdiff_t>(i), word_.begin() + static_cast<std::ptrdiff_t>(j));
  }

  [[noreturn]] void cycle(std::size_t node) const {
    const CNode& c = g_.nodes[node];
    std::string where = c.kind == GrammarExpr::Kind::Ref ? " through nonterminal '" + c.name + "'" : "";
    throw InfiniteParseSet("productive cycle that consumes no input" + where + " on " + to_string(word_));
  }

  bool compute(const CNode& c, std::size_t i, std::size_t j) const {
    switch (c.kind) {
      case GrammarExpr::Kind::Lit:
        return j == i + 1 && sym_[i] == c.sym;
      case GrammarExpr::Kind::Eps:
        return i == j;
      case GrammarExpr::Kind::Reify:
        return false;  // seeded separately
      case GrammarExpr::Kind::Tensor:
        for (std::size_t m = i; m <= j; ++m)
          if (nonempty(c.kids[0], i, m) && nonempty(c.kids[1], m, j)) return true;
        return false;
      case GrammarExpr::Kind::Sum:
        for (std::size_t b : c.kids)
          if (nonempty(b, i, j)) return true;
        return false;
      case GrammarExpr::Kind::With:
        for (std::size_t b : c.kids)
          if (!nonempty(b, i, j)) return false;
        return true;
      case GrammarExpr::Kind::Ref:
        return nonempty(c.kids[0], i, j);
    }
    return false;
  }

  void recognize() {
    for (std::size_t len = 0; len <= n_; ++len) {
      for (std::size_t i = 0; i + len <= n_; ++i) {
        const std::size_t j = i + len;
        for (std::size_t id : g_.order) {
          const CNode& c = g_.nodes[id];
          if (c.kind == GrammarExpr::Kind::Reify) {
            const Word piece = slice(i, j);
            nonempty_[key(id, i, j)] = (*c.pred)(piece) ? 1 : 0;
          }
        }
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t id : g_.order) {
            char& cell = nonempty_[key(id, i, j)];
            if (cell) continue;
            if (compute(g_.nodes[id], i, j)) {
              cell = 1;
              changed = true;
            }
          }
        }
      }
    }
  }

  const ParseOracle::Impl& g_;
  const Word& word_;
  std::vector<std::size_t> sym_;
  std::size_t n_;
  std::size_t spans_;
  std::vector<char> nonempty_;
  std::vector<std::uint64_t> counts_;
  std::vector<unsigned char> state_;
  std::vector<std::optional<std::vector<ParseTree>>> memo_;
  std::vector<unsigned char> tree_state_;
};

}  // namespace

ParseOracle::ParseOracle(GrammarEnv env, GrammarExpr start)
    : impl_(std::make_unique<Impl>(std::move(env), std::move(start))) {}
ParseOracle::~ParseOracle() = default;
ParseOracle::ParseOracle(ParseOracle&&) noexcept = default;
ParseOracle& ParseOracle::operator=(ParseOracle&&) noexcept = default;

const GrammarEnv& ParseOracle::env() const noexcept { return impl_->env; }
const GrammarExpr& ParseOracle::start() const noexcept { return impl_->start; }

std::vector<ParseTree> ParseOracle::enumerate(const Word& w) const {
  Query q(*impl_, w);
  return q.trees(impl_->root, 0, w.size());
}

std::uint64_t ParseOracle::count(const Word& w) const {
  Query q(*impl_, w);
  return q.count(impl_->root, 0, w.size());
}

bool ParseOracle::recognizes(const Word& w) const {
  Query q(*impl_, w);
  return q.nonempty(impl_->root, 0, w.size());
}

std::vector<ParseTree> enumerate_parses(const GrammarEnv& env, const GrammarExpr& g, const Word& w) {
  return ParseOracle(env, g).enumerate(w);
}

std::uint64_t count_parses(const GrammarEnv& env, const GrammarExpr& g, const Word& w) {
  return ParseOracle(env, g).count(w);
}

// ------------------------------------------------------------------ words

void for_each_word(const Alphabet& alphabet, std::size_t max_len, const std::function<bool(const Word&)>& visit) {
  const std::size_t k = alphabet.size();
  for (std::size_t len = 0; len <= max_len; ++len) {
    if (len > 0 && k == 0) return;
    std::vector<std::size_t> digits(len, 0);
    Word w(len, k ? alphabet[0] : Token{});
    while (true) {
      if (!visit(w)) return;
      // Odometer increment, last position fastest.
      std::size_t pos = len;
      while (pos > 0 && digits[pos - 1] + 1 == k) {
        --pos;
        digits[pos] = 0;
        w[pos] = alphabet[0];
      }
      if (pos == 0) break;
      --pos;
      w[pos] = alphabet[++digits[pos]];
    }
  }
}

std::vector<Word> words_up_to(const Alphabet& alphabet, std::size_t max_len) {
  std::vector<Word> out;
  for_each_word(alphabet, max_len, [&](const Word& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

// --------------------------------------------------------------- checkers

namespace {

EquivReport scan(const Alphabet& alphabet, std::size_t max_len,
                 const std::function<std::optional<std::string>(const Word&)>& failure) {
  EquivReport report;
  report.max_len = max_len;
  for_each_word(alphabet, max_len, [&](const Word& w) {
    ++report.checked;
    if (auto why = failure(w)) {
      report.pass = false;
      report.counterexample = w;
      report.detail = *why;
      return false;
    }
    return true;
  });
  return report;
}

}  // namespace

EquivReport check_unambiguous(const GrammarEnv& env, const GrammarExpr& g, std::size_t max_len) {
  ParseOracle oracle(env, g);
  return scan(env.alphabet(), max_len, [&](const Word& w) -> std::optional<std::string> {
    std::uint64_t c = oracle.count(w);
    if (c > 1) return std::to_string(c) + " parses of " + to_string(w);
    return std::nullopt;
  });
}

EquivReport check_disjoint(const GrammarEnv& env, const GrammarExpr& a, const GrammarExpr& b, std::size_t max_len) {
  ParseOracle oa(env, a);
  ParseOracle ob(env, b);
  return scan(env.alphabet(), max_len, [&](const Word& w) -> std::optional<std::string> {
    if (oa.recognizes(w) && ob.recognizes(w)) return "both grammars parse " + to_string(w);
    return std::nullopt;
  });
}

EquivReport check_language_equal(const GrammarEnv& env, const GrammarExpr& a, const GrammarExpr& b,
                                 std::size_t max_len) {
  ParseOracle oa(env, a);
  ParseOracle ob(env, b);
  return scan(env.alphabet(), max_len, [&](const Word& w) -> std::optional<std::string> {
    bool in_a = oa.recognizes(w);
    bool in_b = ob.recognizes(w);
    if (in_a == in_b) return std::nullopt;
    return std::string(in_a ? "only the first" : "only the second") + " grammar parses " + to_string(w);
  });
}

EquivReport check_transformer(const GrammarEnv& env, const Transformer& f, std::size_t max_len) {
  ParseOracle source(env, f.source);
  return scan(env.alphabet(), max_len, [&](const Word& w) -> std::optional<std::string> {
    for (const auto& t : source.enumerate(w)) {
      ParseTree out = apply_checked(f, t);
      if (!well_formed(env, f.target, out))
        return "'" + f.name + "' maps " + to_string(t) + " outside its target: " + to_string(out);
    }
    return std::nullopt;
  });
}

EquivReport check_retract(const GrammarEnv& env, const Transformer& f, const Transformer& g, std::size_t max_len) {
  if (!(f.target == g.source) || !(g.target == f.source))
    throw ConfigError("'" + f.name + "' and '" + g.name + "' are not opposite transformers");
  ParseOracle source(env, f.source);
  return scan(env.alphabet(), max_len, [&](const Word& w) -> std::optional<std::string> {
    for (const auto& t : source.enumerate(w)) {
      ParseTree mid = apply_checked(f, t);
      if (!well_formed(env, f.target, mid))
        return "'" + f.name + "' maps " + to_string(t) + " outside its target: " + to_string(mid);
      ParseTree back = apply_checked(g, mid);
      if (!(back == t)) return "'" + g.name + "' does not undo '" + f.name + "' on " + to_string(t);
    }
    return std::nullopt;
  });
}

EquivReport check_strong_equiv(const GrammarEnv& env, const Transformer& f, const Transformer& g,
                               std::size_t max_len) {
  EquivReport forward = check_retract(env, f, g, max_len);
  if (!forward.pass) return forward;
  EquivReport backward = check_retract(env, g, f, max_len);
  backward.checked += forward.checked;
  return backward;
}

// ----------------------------------------------------------------- parsers

Parser extend_parser(const Transformer& f, const Transformer& g, const Parser& p) {
  if (!(f.source == p.accept_grammar) || !(g.target == p.accept_grammar) || !(g.source == f.target))
    throw ConfigError("transformers '" + f.name + "'/'" + g.name + "' do not match parser '" + p.name + "'");
  return Parser{p.name + " via " + f.name, f.target, p.reject_grammar,
                [run = p.run, apply = f.apply](const Word& w) {
                  ParserResult r = run(w);
                  if (r.accepted) r.tree = apply(r.tree);
                  return r;
                }};
}

EquivReport check_parser(const GrammarEnv& env, const Parser& p, std::size_t max_len) {
  ParseOracle accept(env, p.accept_grammar);
  ParseOracle reject(env, p.reject_grammar);
  return scan(env.alphabet(), max_len, [&](const Word& w) -> std::optional<std::string> {
    ParserResult r = p.run(w);
    if (yield_of(r.tree) != w) return "verdict tree yields " + to_string(yield_of(r.tree));
    if (!well_formed(env, r.accepted ? p.accept_grammar : p.reject_grammar, r.tree))
      return std::string(r.accepted ? "accept" : "reject") + " tree is not well-formed: " + to_string(r.tree);
    if (accept.recognizes(w) && reject.recognizes(w)) return "accept and reject grammars overlap";
    return std::nullopt;
  });
}

// ---------------------------------------------------------- distributivity

Distributed distribute(const ParseTree& t) {
  const auto* tup = t.get<parse::Tuple>();
  if (!tup) throw ShapeMismatch("distribute expects a tuple, got " + to_string(t));
  Distributed out{{}, ParseTree::eps()};
  std::vector<Entry> entries;
  for (const auto& [x, entry] : tup->entries) {
    const auto* inj = entry.get<parse::Inj>();
    if (!inj) throw ShapeMismatch("tuple entry '" + x + "' is not an injection");
    out.choice.emplace_back(x, inj->tag);
    entries.emplace_back(x, inj->body);
  }
  out.tuple = ParseTree::tuple(std::move(entries), tup->yield);
  return out;
}

ParseTree undistribute(const Choice& choice, const ParseTree& tuple) {
  const auto* tup = tuple.get<parse::Tuple>();
  if (!tup || tup->entries.size() != choice.size()) throw ShapeMismatch("choice and tuple have different indices");
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < choice.size(); ++i) {
    if (choice[i].first != tup->entries[i].first) throw ShapeMismatch("choice index '" + choice[i].first + "' mismatch");
    entries.emplace_back(choice[i].first, ParseTree::inj(choice[i].second, tup->entries[i].second));
  }
  return ParseTree::tuple(std::move(entries), tup->yield);
}

std::string choice_tag(const Choice& choice) {
  if (choice.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < choice.size(); ++i) {
    if (i) out += ',';
    out += choice[i].first + "=" + choice[i].second;
  }
  return out;
}

namespace {

std::vector<std::pair<Choice, std::vector<Branch>>> choice_functions(const GrammarExpr& with_of_sums) {
  const auto* w = with_of_sums.get<expr::With>();
  if (!w) throw ShapeMismatch("expected a product of sums");
  std::vector<std::pair<Choice, std::vector<Branch>>> acc{{{}, {}}};
  for (const auto& [x, body] : w->branches) {
    const auto* s = body.get<expr::Sum>();
    if (!s) throw ShapeMismatch("product entry '" + x + "' is not a sum");
    std::vector<std::pair<Choice, std::vector<Branch>>> next;
    for (const auto& [choice, picked] : acc)
      for (const auto& [y, inner] : s->branches) {
        auto c = choice;
        auto p = picked;
        c.emplace_back(x, y);
        p.emplace_back(x, inner);
        next.emplace_back(std::move(c), std::move(p));
      }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

GrammarExpr distributed_grammar(const GrammarExpr& with_of_sums) {
  std::vector<Branch> branches;
  for (auto& [choice, picked] : choice_functions(with_of_sums))
    branches.emplace_back(choice_tag(choice), GrammarExpr::with(std::move(picked)));
  return GrammarExpr::sum(std::move(branches));
}

std::pair<Transformer, Transformer> distribute_transformers(const GrammarExpr& with_of_sums) {
  GrammarExpr target = distributed_grammar(with_of_sums);
  auto by_tag = std::make_shared<std::map<std::string, Choice>>();
  for (auto& [choice, picked] : choice_functions(with_of_sums)) (*by_tag)[choice_tag(choice)] = choice;
  Transformer there{"distribute", with_of_sums, target, [](const ParseTree& t) {
                      Distributed d = distribute(t);
                      return ParseTree::inj(choice_tag(d.choice), d.tuple);
                    }};
  Transformer back{"undistribute", target, with_of_sums, [by_tag](const ParseTree& t) {
                     const auto* inj = t.get<parse::Inj>();
                     if (!inj) throw ShapeMismatch("undistribute expects an injection");
                     auto it = by_tag->find(inj->tag);
                     if (it == by_tag->end()) throw ShapeMismatch("unknown choice '" + inj->tag + "'");
                     return undistribute(it->second, inj->body);
                   }};
  return {std::move(there), std::move(back)};
}

// -------------------------------------------------------- strings & reify

GrammarExpr internalize(const Word& w) {
  GrammarExpr acc = GrammarExpr::eps();
  for (std::size_t i = w.size(); i-- > 0;) acc = GrammarExpr::tensor(GrammarExpr::lit(w[i]), acc);
  return acc;
}

namespace {

bool identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

GrammarEnv string_grammar(const Alphabet& alphabet) {
  GrammarEnv env(alphabet);
  std::vector<Branch> chars;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    const Token& t = alphabet[i];
    chars.emplace_back(identifier(t) ? t : "c" + std::to_string(i), GrammarExpr::lit(t));
  }
  env.define("Char", GrammarExpr::sum(std::move(chars)));
  env.define("String", GrammarExpr::sum({{"nil", GrammarExpr::eps()},
                                         {"cons", GrammarExpr::tensor(GrammarExpr::ref("Char"),
                                                                      GrammarExpr::ref("String"))}}));
  return env;
}

GrammarExpr reify_expansion(const GrammarEnv& env, const std::string& predicate, std::size_t max_len) {
  const Predicate* p = env.predicate(predicate);
  if (!p) throw ConfigError("unknown predicate '" + predicate + "'");
  std::vector<Branch> branches;
  for_each_word(env.alphabet(), max_len, [&](const Word& w) {
    if ((*p)(w)) branches.emplace_back("w" + std::to_string(branches.size()), internalize(w));
    return true;
  });
  return GrammarExpr::sum(std::move(branches));
}

const std::map<std::string, Predicate>& builtin_predicates() {
  static const std::map<std::string, Predicate> table = {
      {"palindrome",
       [](std::span<const Token> w) { return std::equal(w.begin(), w.begin() + w.size() / 2, w.rbegin()); }},
      {"even_length", [](std::span<const Token> w) { return w.size() % 2 == 0; }},
      {"balanced",
       [](std::span<const Token> w) {
         long depth = 0;
         for (const auto& t : w) {
           if (t == "(") ++depth;
           else if (t == ")" && --depth < 0) return false;
         }
         return depth == 0;
       }},
      {"anbncn",
       [](std::span<const Token> w) {
         if (w.size() % 3 != 0) return false;
         const std::size_t n = w.size() / 3;
         for (std::size_t i = 0; i < w.size(); ++i) {
           const char* want = i < n ? "a" : (i < 2 * n ? "b" : "c");
           if (w[i] != want) return false;
         }
         return true;
       }},
  };
  return table;
}

}  // namespace lambekd
