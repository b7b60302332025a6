#include "lambekd/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

#include "lambekd/grammar_text.hpp"
#include "lambekd/json_io.hpp"
#include "lambekd/regex.hpp"

namespace lambekd {

Word tokenize(const std::string& input, const Alphabet& alphabet, bool whitespace) {
  Word w;
  auto blank = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  if (whitespace) {
    std::istringstream is(input);
    for (Token t; is >> t;) w.push_back(t);
  } else {
    std::size_t longest = 0;
    for (const auto& s : alphabet.symbols()) longest = std::max(longest, s.size());
    if (longest <= 1) {
      for (char c : input) w.emplace_back(1, c);
    } else {
      for (std::size_t i = 0; i < input.size();) {
        if (blank(input[i])) {
          ++i;
          continue;
        }
        std::size_t best = 0;
        for (const auto& s : alphabet.symbols())
          if (s.size() > best && input.compare(i, s.size(), s) == 0) best = s.size();
        if (best == 0) throw TokenOutOfAlphabet(input.substr(i, 1));
        w.push_back(input.substr(i, best));
        i += best;
      }
    }
  }
  alphabet.ranks(w);
  return w;
}

namespace {

struct Options {
  bool pretty = false;
  bool tokens = false;
  bool full_powerset = false;
  std::size_t max_len = kDefaultMaxLen;
  std::string alphabet;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GrammarFile load_grammar(const std::string& path) {
  return parse_grammar_text(read_file(path), builtin_predicates());
}

Alphabet regex_alphabet(const Regex& r, const Options& o) {
  if (o.alphabet.empty()) return default_alphabet(r);
  std::istringstream is(o.alphabet);
  std::vector<Token> symbols;
  for (Token t; is >> t;) symbols.push_back(t);
  return Alphabet(symbols);
}

/// A start expression: the given text parsed as a grammar expression (a bare
/// name is a nonterminal), else the file's first declaration.
GrammarExpr start_of(const GrammarFile& f, const std::string& given, const char* flag) {
  if (!given.empty()) return parse_grammar_expr(given);
  if (!f.start) throw ConfigError(std::string("grammar declares no nonterminal; pass ") + flag);
  return GrammarExpr::ref(*f.start);
}

class Runner {
 public:
  Runner(std::ostream& out, const Options& o) : out_(out), o_(o) {}

  void emit(const Json& j) { out_ << dump(j, o_.pretty) << '\n'; }

  int parse_regex(const std::string& text, const std::string& input) {
    Regex r = parse_regex_text(text);
    RegexPipeline p = regex_pipeline(r, regex_alphabet(r, o_), o_.full_powerset);
    Word w = tokenize(input, p.nfa.alphabet, o_.tokens);
    ParserResult res = p.parser.run(w);
    if (res.accepted) {
      emit({{"verdict", "accept"},
            {"input", to_json(w)},
            {"env", to_text(regex_to_grammar(r, p.nfa.alphabet).env)},
            {"start", to_text(p.regex_start)},
            {"tree", to_json(res.tree)}});
      return kExitAccept;
    }
    emit({{"verdict", "reject"}, {"input", to_json(w)}, {"trace", to_json(parse_d(p.dfa, p.dfa.init, w))}});
    return kExitReject;
  }

  int compile(const std::string& text, const std::string& stage) {
    Regex r = parse_regex_text(text);
    Nfa n = thompson(r, regex_alphabet(r, o_));
    if (stage == "nfa") emit(to_json(n));
    else emit(to_json(determinize(n, o_.full_powerset)));
    return kExitAccept;
  }

  int check(const std::string& kind, const std::vector<std::string>& files, const std::string& nt,
            const std::string& nt2, const std::string& pair, const std::string& regex) {
    EquivReport rep;
    if (kind == "strong-equiv" && pair != "identity") {
      if (!files.empty()) throw ConfigError("--pair " + pair + " takes no grammar file");
      rep = strong_equiv(pair, regex);
    } else {
      if (files.empty()) throw ConfigError(kind + " needs a grammar file");
      GrammarFile first = load_grammar(files[0]);
      GrammarEnv env = first.env;
      GrammarExpr a = start_of(first, nt, "--nt");
      if (kind == "unambig" || kind == "strong-equiv") {
        if (files.size() > 1 || !nt2.empty()) throw ConfigError(kind + " takes one grammar");
        if (kind == "unambig") {
          rep = check_unambiguous(env, a, o_.max_len);
        } else {
          Transformer id = identity_transformer(a);
          rep = check_strong_equiv(env, id, id, o_.max_len);
        }
      } else {
        GrammarExpr b = a;
        if (files.size() == 2) {
          GrammarFile second = load_grammar(files[1]);
          for (const auto& [name, body] : second.env.definitions())
            if (env.defines(name) && !(env.definition(name) == body))
              throw ConfigError("nonterminal '" + name + "' is defined differently in the two files");
          env.merge(second.env);
          b = start_of(second, nt2, "--nt2");
        } else {
          if (nt2.empty()) throw ConfigError(kind + " needs a second grammar: another file or --nt2");
          b = parse_grammar_expr(nt2);
        }
        if (kind == "disjoint") rep = check_disjoint(env, a, b, o_.max_len);
        else rep = check_language_equal(env, a, b, o_.max_len);
      }
    }
    emit(to_json(rep));
    return rep.pass ? kExitAccept : kExitReject;
  }

  int parse_builtin(const std::string& which, const std::string& input) {
    if (which == "dyck") {
      Word w = tokenize(input, dyck_env().alphabet(), o_.tokens);
      DyckResult r = parse_dyck(w);
      if (r.tree) {
        emit({{"verdict", "accept"}, {"input", to_json(w)}, {"env", to_text(dyck_env())}, {"start", "Dyck"},
              {"tree", to_json(*r.tree)},
              {"parse", to_json(dyck_to_parse(*r.tree))}});
        return kExitAccept;
      }
      emit({{"verdict", "reject"}, {"input", to_json(w)}, {"trace", to_json(r.trace)}});
      return kExitReject;
    }
    Word w = tokenize(input, exp_alphabet(), o_.tokens);
    ExpResult r = parse_exp(w);
    if (r.tree) {
      emit({{"verdict", "accept"}, {"input", to_json(w)}, {"env", to_text(exp_env())}, {"start", "Exp"},
            {"tree", to_json(*r.tree)},
            {"parse", to_json(exp_to_parse(*r.tree))}});
      return kExitAccept;
    }
    emit({{"verdict", "reject"}, {"input", to_json(w)}, {"trace", to_json(r.trace)}});
    return kExitReject;
  }

  int enumerate(const std::string& file, const std::string& nt) {
    GrammarFile f = load_grammar(file);
    ParseOracle oracle(f.env, start_of(f, nt, "--nt"));
    for_each_word(f.env.alphabet(), o_.max_len, [&](const Word& w) {
      std::vector<ParseTree> trees = oracle.enumerate(w);
      if (trees.empty()) return true;
      Json js = Json::array();
      for (const auto& t : trees) js.push_back(to_json(t));
      emit({{"word", to_json(w)}, {"count", trees.size()}, {"trees", js}});
      return true;
    });
    return kExitAccept;
  }

 private:
  EquivReport strong_equiv(const std::string& pair, const std::string& regex) {
    if (pair == "dyck") {
      GrammarEnv env = counter_grammar(o_.max_len);
      env.merge(dyck_env());
      return check_strong_equiv(env, counter_to_dyck_transformer(), dyck_to_counter_transformer(), o_.max_len);
    }
    if (pair == "regex") {
      if (regex.empty()) throw ConfigError("--pair regex needs --regex");
      Regex r = parse_regex_text(regex);
      RegexPipeline p = regex_pipeline(r, regex_alphabet(r, o_), o_.full_powerset);
      return check_strong_equiv(p.env, p.to_regex, p.from_regex, o_.max_len);
    }
    throw ConfigError("strong-equiv needs --pair identity, dyck or regex");
  }

  std::ostream& out_;
  const Options& o_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parse, compile and check grammars, regular expressions and automata."};
  app.name("lambekd");
  app.require_subcommand(1, 1);
  app.fallthrough();

  Options o;
  app.add_flag("--pretty", o.pretty, "Indent JSON output");
  app.add_flag("--tokens", o.tokens, "Split inputs on whitespace");
  app.add_flag("--full-powerset", o.full_powerset, "Determinize over every subset, not only reachable ones");
  app.add_option("--max-len", o.max_len, "Longest word enumerated by checkers")->capture_default_str();
  app.add_option("--alphabet", o.alphabet, "Whitespace-separated regex alphabet (default: a b c plus literals)");

  std::string regex, input, stage = "dfa", kind, nt, nt2, pair, which, file;
  std::vector<std::string> files;

  auto* pr = app.add_subcommand("parse-regex", "Parse a string with a regular expression's DFA parser");
  pr->add_option("regex", regex, "Regular expression")->required();
  pr->add_option("input", input, "Input string")->required();

  auto* co = app.add_subcommand("compile", "Print the NFA or DFA of a regular expression");
  co->add_option("regex", regex, "Regular expression")->required();
  co->add_option("--stage", stage, "nfa or dfa")->check(CLI::IsMember({"nfa", "dfa"}))->capture_default_str();

  auto* ch = app.add_subcommand("check", "Run a bounded checker and print its report");
  ch->add_option("kind", kind, "unambig, disjoint, lang-equal or strong-equiv")
      ->required()
      ->check(CLI::IsMember({"unambig", "disjoint", "lang-equal", "strong-equiv"}));
  ch->add_option("files", files, "Grammar files (one or two)")->expected(0, 2);
  ch->add_option("--nt", nt, "Start expression of the first grammar");
  ch->add_option("--nt2", nt2, "Start expression of the second grammar");
  ch->add_option("--pair", pair, "Transformer pair for strong-equiv: identity (over a file), dyck or regex")
      ->check(CLI::IsMember({"identity", "dyck", "regex"}));
  ch->add_option("--regex", regex, "Regular expression for --pair regex");

  auto* pa = app.add_subcommand("parse", "Parse with a built-in grammar's automaton");
  pa->add_option("grammar", which, "dyck or expr")->required()->check(CLI::IsMember({"dyck", "expr"}));
  pa->add_option("input", input, "Input string")->required();

  auto* en = app.add_subcommand("enumerate", "List every word up to --max-len with its parses");
  en->add_option("file", file, "Grammar file")->required();
  en->add_option("--nt", nt, "Start expression (default: first declaration)");

  std::vector<std::string> argv_store{"lambekd"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitAccept;
  } catch (const CLI::ParseError& e) {
    err << "lambekd: " << e.what() << '\n';
    return kExitUsage;
  }

  Runner run(out, o);
  try {
    if (pr->parsed()) return run.parse_regex(regex, input);
    if (co->parsed()) return run.compile(regex, stage);
    if (ch->parsed()) return run.check(kind, files, nt, nt2, pair, regex);
    if (pa->parsed()) return run.parse_builtin(which, input);
    return run.enumerate(file, nt);
  } catch (const Error& e) {
    err << "lambekd: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "lambekd: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace lambekd
