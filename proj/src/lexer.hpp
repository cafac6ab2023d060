#pragma once

#include <string>
#include <vector>

namespace chtest {

enum class Tok {
  Ident,
  IntLit,
  KwClass,
  KwExtends,
  KwInt,
  KwBool,
  KwVoid,
  KwIf,
  KwElse,
  KwWhile,
  KwReturn,
  KwAssert,
  KwNew,
  KwThis,
  KwSuper,
  KwTrue,
  KwFalse,
  KwNull,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  Semi,
  Dot,
  Assign,
  EqEq,
  NotEq,
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  Star,
  Slash,
  Bang,
  AndAnd,
  OrOr,
  Eof
};

struct Token {
  Tok kind;
  std::string text;
  long long intValue = 0;
  int line = 1;
  int col = 1;
};

// Throws Error(ParseFailed) with file:line:col on bad input.
std::vector<Token> lex(const std::string &source, const std::string &file);

} // namespace chtest
