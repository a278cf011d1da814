#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "minijif/principals.hpp"
#include "minijif/source.hpp"

namespace minijif {

enum class TokenKind {
  Ident,
  Keyword,
  IntLit,
  StrLit,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Semi,
  Comma,
  Dot,
  Colon,
  Arrow,      // ->
  LeftArrow,  // <-
  Underscore,
  Star,
  Plus,
  Minus,
  Slash,
  Percent,
  Assign,
  EqEq,
  NotEq,
  Less,
  LessEq,
  Greater,
  GreaterEq,
  AndAnd,
  OrOr,
  Bang,
  Eof,
};

struct Token {
  TokenKind kind;
  std::string text;  // identifier/keyword spelling, decoded string literal, digits
  Span span;

  bool is(TokenKind k) const { return kind == k; }
  bool is_keyword(std::string_view kw) const { return kind == TokenKind::Keyword && text == kw; }
};

inline std::string describe(TokenKind k) {
  switch (k) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::IntLit: return "integer literal";
    case TokenKind::StrLit: return "string literal";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::Semi: return "';'";
    case TokenKind::Comma: return "','";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Arrow: return "'->'";
    case TokenKind::LeftArrow: return "'<-'";
    case TokenKind::Underscore: return "'_'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::Percent: return "'%'";
    case TokenKind::Assign: return "'='";
    case TokenKind::EqEq: return "'=='";
    case TokenKind::NotEq: return "'!='";
    case TokenKind::Less: return "'<'";
    case TokenKind::LessEq: return "'<='";
    case TokenKind::Greater: return "'>'";
    case TokenKind::GreaterEq: return "'>='";
    case TokenKind::AndAnd: return "'&&'";
    case TokenKind::OrOr: return "'||'";
    case TokenKind::Bang: return "'!'";
    case TokenKind::Eof: return "end of input";
  }
  return "token";
}

inline std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::Ident: return "identifier '" + t.text + "'";
    case TokenKind::Keyword: return "'" + t.text + "'";
    case TokenKind::IntLit: return "integer literal " + t.text;
    case TokenKind::StrLit: return "string literal";
    default: return describe(t.kind);
  }
}

/// Splits source into tokens. The stream always ends with an Eof token whose
/// span covers the last character of the input (or 1:1 for empty input).
/// `//` and `/* */` comments are skipped.
class Lexer {
 public:
  Lexer(std::string_view source, std::string file) : src_(source), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (at_end()) break;
      out.push_back(next());
    }
    Span eof{file_, last_, last_};
    if (!src_.empty()) eof.end = Position{last_.line, last_.column + 1};
    out.push_back(Token{TokenKind::Eof, {}, eof});
    return out;
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  char advance() {
    char c = src_[pos_++];
    last_ = here_;
    if (c == '\n') {
      ++here_.line;
      here_.column = 1;
    } else {
      ++here_.column;
    }
    return c;
  }

  void skip_trivia() {
    for (;;) {
      if (at_end()) return;
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        Position start = here_;
        advance();
        advance();
        while (!at_end() && !(peek() == '*' && peek(1) == '/')) advance();
        if (at_end()) throw LexError(Span{file_, start, here_}, "unterminated comment");
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  Token make(TokenKind kind, Position start, std::string text = {}) {
    return Token{kind, std::move(text), Span{file_, start, here_}};
  }

  Token next() {
    Position start = here_;
    char c = peek();
    auto uc = static_cast<unsigned char>(c);

    if (std::isalpha(uc) || c == '_') {
      std::string word;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
        word += advance();
      if (word == "_") return make(TokenKind::Underscore, start);
      if (is_keyword(word)) return make(TokenKind::Keyword, start, word);
      return make(TokenKind::Ident, start, word);
    }
    if (std::isdigit(uc)) {
      std::string digits;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
      return make(TokenKind::IntLit, start, digits);
    }
    if (c == '"') return string_literal(start);

    advance();
    auto two = [&](char second, TokenKind yes, TokenKind no) {
      if (peek() == second) {
        advance();
        return make(yes, start);
      }
      return make(no, start);
    };
    switch (c) {
      case '{': return make(TokenKind::LBrace, start);
      case '}': return make(TokenKind::RBrace, start);
      case '(': return make(TokenKind::LParen, start);
      case ')': return make(TokenKind::RParen, start);
      case '[': return make(TokenKind::LBracket, start);
      case ']': return make(TokenKind::RBracket, start);
      case ';': return make(TokenKind::Semi, start);
      case ',': return make(TokenKind::Comma, start);
      case '.': return make(TokenKind::Dot, start);
      case ':': return make(TokenKind::Colon, start);
      case '*': return make(TokenKind::Star, start);
      case '+': return make(TokenKind::Plus, start);
      case '/': return make(TokenKind::Slash, start);
      case '%': return make(TokenKind::Percent, start);
      case '-': return two('>', TokenKind::Arrow, TokenKind::Minus);
      case '=': return two('=', TokenKind::EqEq, TokenKind::Assign);
      case '!': return two('=', TokenKind::NotEq, TokenKind::Bang);
      case '>': return two('=', TokenKind::GreaterEq, TokenKind::Greater);
      case '<':
        if (peek() == '-') {
          advance();
          return make(TokenKind::LeftArrow, start);
        }
        return two('=', TokenKind::LessEq, TokenKind::Less);
      case '&':
        if (peek() == '&') {
          advance();
          return make(TokenKind::AndAnd, start);
        }
        break;
      case '|':
        if (peek() == '|') {
          advance();
          return make(TokenKind::OrOr, start);
        }
        break;
      default: break;
    }
    std::string shown = uc >= 0x20 && uc < 0x7f ? std::string(1, c) : "\\x" + hex(uc);
    throw LexError(Span{file_, start, here_}, "unexpected character '" + shown + "'");
  }

  Token string_literal(Position start) {
    advance();
    std::string value;
    for (;;) {
      if (at_end() || peek() == '\n')
        throw LexError(Span{file_, start, here_}, "unterminated string literal");
      char c = advance();
      if (c == '"') break;
      if (c == '\\') {
        if (at_end()) throw LexError(Span{file_, start, here_}, "unterminated string literal");
        Position esc = last_;
        char e = advance();
        switch (e) {
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case '\\': value += '\\'; break;
          case '"': value += '"'; break;
          default:
            throw LexError(Span{file_, esc, here_}, std::string("unknown escape '\\") + e + "'");
        }
      } else {
        value += c;
      }
    }
    return make(TokenKind::StrLit, start, value);
  }

  static std::string hex(unsigned v) {
    const char* digits = "0123456789abcdef";
    return {digits[(v >> 4) & 0xf], digits[v & 0xf]};
  }

  std::string_view src_;
  std::string file_;
  std::size_t pos_ = 0;
  Position here_{};
  Position last_{};
};

inline std::vector<Token> tokenize(std::string_view source, std::string file = "<input>") {
  return Lexer(source, std::move(file)).run();
}

}  // namespace minijif
