#include "chasebound/parser.hpp"

#include <cctype>
#include <map>
#include <set>

#include "chasebound/error.hpp"

namespace chase {
namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  /// Next character without skipping whitespace.
  char peek_raw() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    for (std::size_t i = 0; i < token.size(); ++i) advance();
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  std::string identifier(const std::string& what) {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) advance();
    if (start == pos_) fail("expected " + what);
    return std::string(text_.substr(start, pos_ - start));
  }

  /// Identifier characters directly at the cursor (no whitespace skipping).
  std::string raw_identifier(const std::string& what) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) advance();
    if (start == pos_) fail("expected " + what);
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect_raw(char c) {
    if (peek_raw() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

  [[noreturn]] void fail(const std::string& message) const {
    std::size_t begin = pos_ == 0 ? std::string_view::npos : text_.rfind('\n', pos_ - 1);
    begin = begin == std::string_view::npos ? 0 : begin + 1;
    std::size_t end = text_.find('\n', begin);
    if (end == std::string_view::npos) end = text_.size();
    std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
    std::string out = std::to_string(line_) + ":" + std::to_string(column_) + ": " + message + ", found " +
                      found + "\n  " + std::string(text_.substr(begin, end - begin)) + "\n  " +
                      std::string(column_ - 1, ' ') + "^";
    throw SyntaxError(out, line_, column_);
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

Term read_term(Lexer& lex, const std::string& scope);

/// After `_:`: either a plain label or `rule#{k:t,...}#exvar` / `rule#[...]#exvar`.
Term read_null(Lexer& lex, const std::string& scope) {
  std::string head = lex.raw_identifier("null label");
  if (lex.peek_raw() != '#') return Term::initial_null(head);
  lex.expect_raw('#');
  NullProvenance p;
  p.rule_id = head;
  char open = lex.peek_raw();
  char close;
  if (open == '{') {
    p.key_kind = NullKeyKind::Trigger;
    close = '}';
  } else if (open == '[') {
    p.key_kind = NullKeyKind::Frontier;
    close = ']';
  } else {
    lex.fail("expected '{' or '[' in null key");
  }
  lex.expect_raw(open);
  if (lex.peek_raw() != close) {
    for (;;) {
      std::string var = lex.raw_identifier("key variable");
      lex.expect_raw(':');
      p.key.emplace_back(var, read_term(lex, scope));
      if (lex.peek_raw() != ',') break;
      lex.expect_raw(',');
    }
  }
  lex.expect_raw(close);
  lex.expect_raw('#');
  p.exvar = lex.raw_identifier("existential variable");
  return Term::null(std::move(p));
}

Term read_term(Lexer& lex, const std::string& scope) {
  if (lex.accept("_:")) return read_null(lex, scope);
  std::string name = lex.identifier("term");
  if (std::isupper(static_cast<unsigned char>(name[0]))) return Term::variable(name, scope);
  if (name[0] == '_') lex.fail("identifiers may not start with '_'");
  return Term::constant(name);
}

Atom read_atom(Lexer& lex, const std::string& scope) {
  lex.skip_space();
  std::size_t line = lex.line(), column = lex.column();
  Atom a;
  a.predicate = lex.identifier("predicate");
  if (!std::islower(static_cast<unsigned char>(a.predicate[0])))
    throw SyntaxError(std::to_string(line) + ":" + std::to_string(column) + ": predicate '" + a.predicate +
                          "' must start with a lowercase letter",
                      line, column);
  if (lex.accept("(")) {
    if (!lex.accept(")")) {
      do {
        a.args.push_back(read_term(lex, scope));
      } while (lex.accept(","));
      lex.expect(")");
    }
  }
  return a;
}

std::vector<Atom> read_conjunction(Lexer& lex, const std::string& scope) {
  std::vector<Atom> out;
  do {
    out.push_back(read_atom(lex, scope));
  } while (lex.accept(","));
  return out;
}

void rescope(std::vector<Atom>& atoms, const std::string& scope) {
  for (auto& a : atoms)
    for (auto& t : a.args)
      if (t.is_variable()) t = Term::variable(t.name(), scope);
}

}  // namespace

ParsedKb parse_kb(std::string_view text) {
  ParsedKb out;
  Lexer lex(text);
  std::vector<Rule> rules;
  std::map<std::string, std::string> first_owner;  // variable name -> rule id
  std::set<std::string> reported;

  while (!lex.at_end()) {
    lex.skip_space();
    std::size_t line = lex.line(), column = lex.column();
    std::string id;
    bool has_id = false;
    if (lex.accept("[")) {
      id = lex.identifier("rule id");
      lex.expect("]");
      has_id = true;
    }
    std::vector<Atom> body = read_conjunction(lex, id);
    if (lex.accept("->")) {
      std::vector<Atom> head = read_conjunction(lex, id);
      lex.expect(".");
      if (!has_id) {
        id = "R" + std::to_string(rules.size() + 1);
        rescope(body, id);
        rescope(head, id);
      }
      Rule r;
      try {
        r = derive_rule_metadata(id, AtomSet(body.begin(), body.end()), AtomSet(head.begin(), head.end()));
      } catch (const ValidationError& e) {
        throw SyntaxError(std::to_string(line) + ":" + std::to_string(column) + ": " + e.what(), line, column);
      }
      TermSet vars = r.body.variables();
      TermSet hv = r.head.variables();
      vars.insert(hv.begin(), hv.end());
      for (const auto& v : vars) {
        auto [it, fresh] = first_owner.emplace(v.name(), r.id);
        if (!fresh && it->second != r.id && reported.insert(v.name()).second)
          out.diagnostics.push_back({Diagnostic::Severity::Info, "renamed-apart",
                                     "variable " + v.name() + " is used in rules " + it->second + " and " + r.id +
                                         "; each rule keeps its own copy",
                                     line, column});
      }
      rules.push_back(std::move(r));
    } else {
      if (has_id) lex.fail("expected '->' after the body of rule " + id);
      lex.expect(".");
      for (auto& a : body) out.kb.factbase.insert(a);
    }
  }
  out.kb.ruleset = RuleSet(std::move(rules));
  for (auto& d : validate_kb(out.kb)) out.diagnostics.push_back(std::move(d));
  return out;
}

AtomSet parse_atom_list(std::string_view text, const std::string& scope) {
  Lexer lex(text);
  AtomSet out;
  if (lex.at_end()) return out;
  for (auto& a : read_conjunction(lex, scope)) out.insert(a);
  if (!lex.at_end()) lex.fail("unexpected text after atom list");
  return out;
}

Term parse_term(std::string_view text, const std::string& scope) {
  Lexer lex(text);
  Term t = read_term(lex, scope);
  if (!lex.at_end()) lex.fail("unexpected text after term");
  return t;
}

std::string serialize_kb(const KnowledgeBase& kb) {
  std::string out;
  for (const auto& a : kb.factbase) out += a.to_string() + ".\n";
  for (const auto& r : kb.ruleset.rules()) out += r.to_string() + "\n";
  return out;
}

}  // namespace chase
