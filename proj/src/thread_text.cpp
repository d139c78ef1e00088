#include "mwb/thread_text.hpp"

#include <cctype>
#include <cstdint>
#include <limits>
#include <vector>

namespace mwb {

namespace {

enum class Tok : std::uint8_t {
  ident,
  nat,
  equals,
  question,
  colon,
  semi,
  lparen,
  rparen,
  newline,
  end,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, column;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::nat: return "number";
    case Tok::equals: return "'='";
    case Tok::question: return "'?'";
    case Tok::colon: return "':'";
    case Tok::semi: return "';'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::newline: return "end of line";
    case Tok::end: return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string t, std::size_t c) {
    out.push_back({k, std::move(t), line, c});
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      push(Tok::newline, "\n", col);
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (c == ' ' || c == '\t') {
      ++i;
      ++col;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    const std::size_t start_col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_')) {
        ++j;
      }
      push(Tok::ident, std::string(text.substr(i, j - i)), start_col);
      col += j - i;
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[j]))) {
        ++j;
      }
      push(Tok::nat, std::string(text.substr(i, j - i)), start_col);
      col += j - i;
      i = j;
      continue;
    }
    Tok k;
    switch (c) {
      case '=': k = Tok::equals; break;
      case '?': k = Tok::question; break;
      case ':': k = Tok::colon; break;
      case ';': k = Tok::semi; break;
      case '(': k = Tok::lparen; break;
      case ')': k = Tok::rparen; break;
      default:
        throw ParseError(line, col,
                         std::string("unexpected character '") + c + "'");
    }
    push(k, std::string(1, c), start_col);
    ++i;
    ++col;
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  RecSpec parse_file() {
    RecSpec spec;
    while (true) {
      while (at(Tok::newline)) ++pos_;
      if (at(Tok::end)) break;
      const Token& name = expect(Tok::ident, "variable name");
      expect(Tok::equals, "'='");
      TermPtr rhs = parse_term();
      if (!at(Tok::newline) && !at(Tok::end)) {
        fail("expected end of line after declaration");
      }
      spec.equations.emplace_back(name.text, std::move(rhs));
    }
    if (spec.equations.empty()) {
      const Token& t = toks_.back();
      throw ParseError(t.line, t.column, "no declarations found");
    }
    validate_spec(spec);
    return spec;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }
  const Token& take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(t.line, t.column, msg);
  }
  const Token& expect(Tok k, const std::string& what) {
    if (!at(k)) fail("expected " + what + ", found " + tok_name(peek().kind));
    return take();
  }

  TermPtr parse_term() {
    if (at(Tok::lparen)) {
      take();
      TermPtr t = parse_term();
      expect(Tok::rparen, "')'");
      return t;
    }
    if (!at(Tok::ident)) fail("expected a term");
    // Constants first; they never act or branch.
    if (peek().text == "S") {
      take();
      return ThreadTerm::stop();
    }
    if (peek().text == "D") {
      take();
      return ThreadTerm::dead();
    }
    // An identifier starts an action exactly when an index, '?' or ';'
    // follows; the index case needs two tokens of lookahead to keep
    // "a ? X : Y" (else-colon after a variable) unambiguous, since no term
    // starts with a number.
    const bool indexed = at(Tok::colon, 1) && at(Tok::nat, 2);
    const bool is_action =
        indexed || at(Tok::question, 1) || at(Tok::semi, 1);
    const Token& head = take();
    if (!is_action) {
      if (head.text == "tau") {
        throw ParseError(head.line, head.column,
                         "'tau' is an action and needs '?' or ';'");
      }
      return ThreadTerm::var(head.text);
    }
    ActionId action(head.text);
    if (indexed) {
      take();  // ':'
      const Token& nat = take();
      unsigned long value = 0;
      try {
        value = std::stoul(nat.text);
      } catch (const std::exception&) {
        throw ParseError(nat.line, nat.column, "action index out of range");
      }
      if (value > std::numeric_limits<std::uint32_t>::max()) {
        throw ParseError(nat.line, nat.column, "action index out of range");
      }
      if (head.text == "tau") {
        throw ParseError(head.line, head.column, "'tau' takes no index");
      }
      action.index = static_cast<std::uint32_t>(value);
    }
    if (at(Tok::question)) {
      take();
      TermPtr then_b = parse_term();
      expect(Tok::colon, "':' between the branches");
      TermPtr else_b = parse_term();
      return ThreadTerm::post(std::move(action), std::move(then_b),
                              std::move(else_b));
    }
    if (at(Tok::semi)) {
      take();
      return ThreadTerm::prefix(std::move(action), parse_term());
    }
    fail("expected '?' or ';' after action '" + action.str() + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void print_term_into(const TermPtr& t, std::string& out) {
  switch (t->kind()) {
    case TermKind::stop:
      out += "S";
      return;
    case TermKind::dead:
      out += "D";
      return;
    case TermKind::var:
      out += t->var_name();
      return;
    case TermKind::post:
      out += t->action().str();
      if (equal_terms(t->then_branch(), t->else_branch())) {
        out += " ; ";
        print_term_into(t->then_branch(), out);
      } else {
        out += " ? ";
        print_term_into(t->then_branch(), out);
        out += " : ";
        print_term_into(t->else_branch(), out);
      }
      return;
  }
}

}  // namespace

RecSpec parse_threads(std::string_view text) {
  return Parser(text).parse_file();
}

std::string print_term(const TermPtr& term) {
  if (!term) throw Error("cannot print a null term");
  std::string out;
  print_term_into(term, out);
  return out;
}

std::string print_threads(const RecSpec& spec) {
  validate_spec(spec);
  const std::string& root = spec.root_name();
  std::string out;
  auto emit = [&](const std::pair<std::string, TermPtr>& eq) {
    out += eq.first;
    out += " = ";
    print_term_into(eq.second, out);
    out += "\n";
  };
  for (const auto& eq : spec.equations) {
    if (eq.first == root) emit(eq);
  }
  for (const auto& eq : spec.equations) {
    if (eq.first != root) emit(eq);
  }
  return out;
}

}  // namespace mwb
