#include "lexer.hpp"

#include <cctype>
#include <map>

#include "errors.hpp"

namespace chtest {

namespace {

const std::map<std::string, Tok> kKeywords = {
    {"class", Tok::KwClass},   {"extends", Tok::KwExtends},
    {"int", Tok::KwInt},       {"bool", Tok::KwBool},
    {"void", Tok::KwVoid},     {"if", Tok::KwIf},
    {"else", Tok::KwElse},     {"while", Tok::KwWhile},
    {"return", Tok::KwReturn}, {"assert", Tok::KwAssert},
    {"new", Tok::KwNew},       {"this", Tok::KwThis},
    {"super", Tok::KwSuper},   {"true", Tok::KwTrue},
    {"false", Tok::KwFalse},   {"null", Tok::KwNull},
};

[[noreturn]] void fail(const std::string &file, int line, int col,
                       const std::string &what) {
  throw Error(ErrorCode::ParseFailed, file + ":" + std::to_string(line) + ":" +
                                          std::to_string(col) + ": " + what);
}

} // namespace

std::vector<Token> lex(const std::string &source, const std::string &file) {
  std::vector<Token> out;
  size_t pos = 0;
  int line = 1, col = 1;

  auto peek = [&](size_t ahead = 0) -> char {
    return pos + ahead < source.size() ? source[pos + ahead] : '\0';
  };
  auto advance = [&]() {
    if (source[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  };
  auto push = [&](Tok kind, std::string text, int tl, int tc) {
    out.push_back({kind, std::move(text), 0, tl, tc});
  };

  while (pos < source.size()) {
    char c = peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      continue;
    }
    if (c == '/' && peek(1) == '/') {
      while (pos < source.size() && peek() != '\n')
        advance();
      continue;
    }
    if (c == '/' && peek(1) == '*') {
      int sl = line, sc = col;
      advance();
      advance();
      while (pos < source.size() && !(peek() == '*' && peek(1) == '/'))
        advance();
      if (pos >= source.size())
        fail(file, sl, sc, "unterminated block comment");
      advance();
      advance();
      continue;
    }

    int tl = line, tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (pos < source.size() &&
             (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
        word.push_back(peek());
        advance();
      }
      auto kw = kKeywords.find(word);
      push(kw != kKeywords.end() ? kw->second : Tok::Ident, word, tl, tc);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (pos < source.size() &&
             std::isdigit(static_cast<unsigned char>(peek()))) {
        digits.push_back(peek());
        advance();
      }
      Token t{Tok::IntLit, digits, 0, tl, tc};
      try {
        t.intValue = std::stoll(digits);
      } catch (const std::out_of_range &) {
        fail(file, tl, tc, "integer literal out of range: " + digits);
      }
      out.push_back(std::move(t));
      continue;
    }

    auto two = [&](char second, Tok both, Tok single) {
      advance();
      if (peek() == second) {
        advance();
        push(both, {c, second}, tl, tc);
      } else {
        push(single, {c}, tl, tc);
      }
    };

    switch (c) {
    case '{': advance(); push(Tok::LBrace, "{", tl, tc); break;
    case '}': advance(); push(Tok::RBrace, "}", tl, tc); break;
    case '(': advance(); push(Tok::LParen, "(", tl, tc); break;
    case ')': advance(); push(Tok::RParen, ")", tl, tc); break;
    case ',': advance(); push(Tok::Comma, ",", tl, tc); break;
    case ';': advance(); push(Tok::Semi, ";", tl, tc); break;
    case '.': advance(); push(Tok::Dot, ".", tl, tc); break;
    case '+': advance(); push(Tok::Plus, "+", tl, tc); break;
    case '-': advance(); push(Tok::Minus, "-", tl, tc); break;
    case '*': advance(); push(Tok::Star, "*", tl, tc); break;
    case '/': advance(); push(Tok::Slash, "/", tl, tc); break;
    case '=': two('=', Tok::EqEq, Tok::Assign); break;
    case '!': two('=', Tok::NotEq, Tok::Bang); break;
    case '<': two('=', Tok::Le, Tok::Lt); break;
    case '>': two('=', Tok::Ge, Tok::Gt); break;
    case '&':
      advance();
      if (peek() != '&')
        fail(file, tl, tc, "expected '&&'");
      advance();
      push(Tok::AndAnd, "&&", tl, tc);
      break;
    case '|':
      advance();
      if (peek() != '|')
        fail(file, tl, tc, "expected '||'");
      advance();
      push(Tok::OrOr, "||", tl, tc);
      break;
    default:
      fail(file, tl, tc, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::Eof, "", 0, line, col});
  return out;
}

} // namespace chtest
