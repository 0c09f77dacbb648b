#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "c2hls/util.hpp"

namespace c2hls {

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(int line_, int col_, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                           std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

enum class TokKind { Identifier, Keyword, Number, String, CharLit, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  int line = 0;
  int col = 0;
  size_t offset = 0;
  bool from_main = true;  // false inside system-header regions of preprocessed text
};

struct PragmaLine {
  int line = 0;
  size_t offset = 0;        // offset of the '#' character
  std::string text;         // text after "#pragma", trimmed
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<PragmaLine> pragmas;
  // object-like macros whose replacement is a single token sequence; used to
  // treat `#define N 20` names as compile-time constants in raw candidates
  std::map<std::string, std::string> defines;
};

namespace detail {

inline const std::set<std::string>& c_keywords() {
  static const std::set<std::string> kw = {
      "auto",     "break",   "case",     "char",   "const",    "continue",
      "default",  "do",      "double",   "else",   "enum",     "extern",
      "float",    "for",     "goto",     "if",     "inline",   "int",
      "long",     "register", "restrict", "return", "short",    "signed",
      "sizeof",   "static",  "struct",   "switch", "typedef",  "union",
      "unsigned", "void",    "volatile", "while",  "_Bool",    "_Complex",
      "_Imaginary"};
  return kw;
}

inline const std::set<std::string>& type_keywords() {
  static const std::set<std::string> kw = {
      "void", "char",  "short",    "int",    "long",   "float", "double",
      "signed", "unsigned", "_Bool", "const", "volatile", "struct",
      "union", "enum", "restrict"};
  return kw;
}

inline bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// identifiers silently dropped in system-header regions (glibc decorations)
inline const std::set<std::string>& droppable_extensions() {
  static const std::set<std::string> s = {
      "__extension__", "__restrict",  "__restrict__", "__inline",
      "__inline__",    "__volatile__", "__const",     "_Noreturn",
      "__signed__",    "__THROW",      "__wur",       "__nonnull"};
  return s;
}

// identifiers followed by a parenthesized group, dropped together with it
inline const std::set<std::string>& paren_extensions() {
  static const std::set<std::string> s = {"__attribute__", "__asm__", "__asm",
                                          "__typeof__",    "typeof",  "__typeof"};
  return s;
}

}  // namespace detail

inline bool is_c_keyword(const std::string& s) { return detail::c_keywords().count(s) > 0; }
inline bool is_type_keyword(const std::string& s) { return detail::type_keywords().count(s) > 0; }

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  // strict: GNU-extension tokens in main-file regions raise ParseError.
  LexResult run(bool strict = true) {
    LexResult res;
    scan(res);
    normalize(res, strict);
    return res;
  }

 private:
  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::string main_file_;
  std::string current_file_;
  bool seen_marker_ = false;

  bool in_main() const { return !seen_marker_ || current_file_ == main_file_; }

  char peek(size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (pos_ >= text_.size()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void scan(LexResult& res) {
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f') {
        advance();
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        while (pos_ < text_.size() && peek() != '\n') advance();
        continue;
      }
      if (c == '/' && peek(1) == '*') {
        int sl = line_, sc = col_;
        advance();
        advance();
        bool closed = false;
        while (pos_ < text_.size()) {
          if (peek() == '*' && peek(1) == '/') {
            advance();
            advance();
            closed = true;
            break;
          }
          advance();
        }
        if (!closed) throw ParseError(sl, sc, "unterminated block comment");
        continue;
      }
      if (c == '#' && at_line_start()) {
        directive(res);
        continue;
      }
      if (detail::ident_start(c)) {
        Token t{TokKind::Identifier, "", line_, col_, pos_, in_main()};
        while (pos_ < text_.size() && detail::ident_char(peek())) {
          t.text.push_back(peek());
          advance();
        }
        if (is_c_keyword(t.text)) t.kind = TokKind::Keyword;
        res.tokens.push_back(std::move(t));
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        res.tokens.push_back(number());
        continue;
      }
      if (c == '"') {
        res.tokens.push_back(quoted('"', TokKind::String));
        continue;
      }
      if (c == '\'') {
        res.tokens.push_back(quoted('\'', TokKind::CharLit));
        continue;
      }
      res.tokens.push_back(punct());
    }
  }

  bool at_line_start() const {
    size_t p = pos_;
    while (p > 0) {
      char c = text_[p - 1];
      if (c == '\n') return true;
      if (c != ' ' && c != '\t') return false;
      --p;
    }
    return true;
  }

  void directive(LexResult& res) {
    int dline = line_;
    size_t doffset = pos_;
    std::string body;
    advance();  // '#'
    while (pos_ < text_.size()) {
      if (peek() == '\\' && peek(1) == '\n') {
        advance();
        advance();
        body.push_back(' ');
        continue;
      }
      if (peek() == '\n') break;
      body.push_back(peek());
      advance();
    }
    std::string t = trim(body);
    if (!t.empty() && std::isdigit(static_cast<unsigned char>(t[0]))) {
      // line marker: # <num> "file" [flags]
      size_t q1 = t.find('"');
      size_t q2 = (q1 == std::string::npos) ? std::string::npos : t.find('"', q1 + 1);
      if (q1 != std::string::npos && q2 != std::string::npos) {
        std::string file = t.substr(q1 + 1, q2 - q1 - 1);
        if (!seen_marker_) {
          main_file_ = file;
          seen_marker_ = true;
        }
        current_file_ = file;
      }
      return;
    }
    if (t.rfind("pragma", 0) == 0) {
      res.pragmas.push_back({dline, doffset, trim(t.substr(6))});
      return;
    }
    if (t.rfind("define", 0) == 0) {
      std::string rest = trim(t.substr(6));
      size_t i = 0;
      while (i < rest.size() && detail::ident_char(rest[i])) ++i;
      if (i > 0 && (i >= rest.size() || rest[i] != '(')) {  // object-like only
        std::string name = rest.substr(0, i);
        std::string value = trim(rest.substr(i));
        if (!value.empty()) res.defines[name] = value;
      }
      return;
    }
    // other directives (#include, #if in raw candidates, ...) are skipped;
    // preprocessed units only ever carry line markers here
  }

  Token number() {
    Token t{TokKind::Number, "", line_, col_, pos_, in_main()};
    while (pos_ < text_.size()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_') {
        t.text.push_back(c);
        advance();
        continue;
      }
      if ((c == '+' || c == '-') && !t.text.empty()) {
        char prev = t.text.back();
        if (prev == 'e' || prev == 'E' || prev == 'p' || prev == 'P') {
          t.text.push_back(c);
          advance();
          continue;
        }
      }
      break;
    }
    return t;
  }

  Token quoted(char delim, TokKind kind) {
    Token t{kind, "", line_, col_, pos_, in_main()};
    int sl = line_, sc = col_;
    t.text.push_back(delim);
    advance();
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == '\\') {
        t.text.push_back(c);
        advance();
        if (pos_ < text_.size()) {
          t.text.push_back(peek());
          advance();
        }
        continue;
      }
      if (c == '\n') throw ParseError(sl, sc, "unterminated literal");
      t.text.push_back(c);
      advance();
      if (c == delim) return t;
    }
    throw ParseError(sl, sc, "unterminated literal");
  }

  Token punct() {
    static const std::vector<std::string> multi = {
        "<<=", ">>=", "...", "->", "++", "--", "<<", ">>", "<=", ">=",
        "==",  "!=",  "&&",  "||", "+=", "-=", "*=", "/=", "%=", "&=",
        "|=",  "^=",  "##"};
    Token t{TokKind::Punct, "", line_, col_, pos_, in_main()};
    for (const auto& m : multi) {
      if (text_.compare(pos_, m.size(), m) == 0) {
        t.text = m;
        for (size_t i = 0; i < m.size(); ++i) advance();
        return t;
      }
    }
    t.text.push_back(peek());
    advance();
    return t;
  }

  // Drop glibc decoration tokens from header regions; reject GNU extensions
  // in user code when strict.
  void normalize(LexResult& res, bool strict) {
    std::vector<Token> out;
    out.reserve(res.tokens.size());
    const auto& drop = detail::droppable_extensions();
    const auto& paren = detail::paren_extensions();
    for (size_t i = 0; i < res.tokens.size(); ++i) {
      const Token& t = res.tokens[i];
      bool is_ext = (t.kind == TokKind::Identifier || t.kind == TokKind::Keyword) &&
                    (drop.count(t.text) > 0 || paren.count(t.text) > 0);
      if (!is_ext) {
        out.push_back(t);
        continue;
      }
      if (t.from_main && strict) {
        throw ParseError(t.line, t.col, "GNU extension '" + t.text +
                                            "' is not supported (C99 only)");
      }
      if (paren.count(t.text)) {
        // skip following balanced parens, if present
        size_t j = i + 1;
        if (j < res.tokens.size() && res.tokens[j].text == "(") {
          int depth = 0;
          for (; j < res.tokens.size(); ++j) {
            if (res.tokens[j].text == "(") ++depth;
            if (res.tokens[j].text == ")") {
              --depth;
              if (depth == 0) break;
            }
          }
          i = j;
        }
      }
    }
    res.tokens = std::move(out);
  }
};

inline LexResult lex(const std::string& text, bool strict = true) {
  return Lexer(text).run(strict);
}

// Evaluates an integer constant expression over literals, parens, basic
// arithmetic, and names resolvable through `defines`. Used to decide whether
// array extents and loop bounds are compile-time constants.
inline std::optional<long long> eval_const_expr(
    const std::vector<Token>& toks, size_t begin, size_t end,
    const std::map<std::string, std::string>& defines, int depth = 0);

inline std::optional<long long> eval_const_text(
    const std::string& text, const std::map<std::string, std::string>& defines,
    int depth = 0) {
  if (depth > 8) return std::nullopt;
  LexResult lr;
  try {
    lr = lex(text);
  } catch (const ParseError&) {
    return std::nullopt;
  }
  return eval_const_expr(lr.tokens, 0, lr.tokens.size(), defines, depth);
}

namespace detail {

// recursive-descent over + - * / % and unary minus; precedence: mul > add
struct ConstEval {
  const std::vector<Token>& t;
  size_t pos, end;
  const std::map<std::string, std::string>& defines;
  int depth;
  bool bad = false;

  std::optional<long long> atom() {
    if (pos >= end) {
      bad = true;
      return std::nullopt;
    }
    const Token& tok = t[pos];
    if (tok.text == "(") {
      ++pos;
      auto v = add();
      if (pos >= end || t[pos].text != ")") {
        bad = true;
        return std::nullopt;
      }
      ++pos;
      return v;
    }
    if (tok.text == "-") {
      ++pos;
      auto v = atom();
      if (!v) return std::nullopt;
      return -*v;
    }
    if (tok.text == "+") {
      ++pos;
      return atom();
    }
    if (tok.kind == TokKind::Number) {
      ++pos;
      std::string digits = tok.text;
      while (!digits.empty() &&
             (digits.back() == 'u' || digits.back() == 'U' || digits.back() == 'l' ||
              digits.back() == 'L'))
        digits.pop_back();
      try {
        size_t used = 0;
        long long v = std::stoll(digits, &used, 0);
        if (used != digits.size()) {
          bad = true;
          return std::nullopt;
        }
        return v;
      } catch (...) {
        bad = true;
        return std::nullopt;
      }
    }
    if (tok.kind == TokKind::CharLit) {
      ++pos;
      if (tok.text.size() == 3) return static_cast<long long>(tok.text[1]);
      bad = true;
      return std::nullopt;
    }
    if (tok.kind == TokKind::Identifier) {
      auto it = defines.find(tok.text);
      if (it == defines.end()) {
        bad = true;
        return std::nullopt;
      }
      ++pos;
      auto v = eval_const_text(it->second, defines, depth + 1);
      if (!v) bad = true;
      return v;
    }
    bad = true;
    return std::nullopt;
  }

  std::optional<long long> mul() {
    auto v = atom();
    while (!bad && v && pos < end &&
           (t[pos].text == "*" || t[pos].text == "/" || t[pos].text == "%")) {
      std::string op = t[pos].text;
      ++pos;
      auto rhs = atom();
      if (!rhs) return std::nullopt;
      if ((op == "/" || op == "%") && *rhs == 0) {
        bad = true;
        return std::nullopt;
      }
      if (op == "*") *v *= *rhs;
      if (op == "/") *v /= *rhs;
      if (op == "%") *v %= *rhs;
    }
    return v;
  }

  std::optional<long long> add() {
    auto v = mul();
    while (!bad && v && pos < end && (t[pos].text == "+" || t[pos].text == "-")) {
      std::string op = t[pos].text;
      ++pos;
      auto rhs = mul();
      if (!rhs) return std::nullopt;
      *v = (op == "+") ? *v + *rhs : *v - *rhs;
    }
    return v;
  }
};

}  // namespace detail

inline std::optional<long long> eval_const_expr(
    const std::vector<Token>& toks, size_t begin, size_t end,
    const std::map<std::string, std::string>& defines, int depth) {
  if (depth > 8 || begin >= end) return std::nullopt;
  detail::ConstEval ev{toks, begin, end, defines, depth};
  auto v = ev.add();
  if (ev.bad || !v || ev.pos != end) return std::nullopt;
  return v;
}

}  // namespace c2hls
