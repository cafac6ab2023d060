#include "parser.hpp"

#include "errors.hpp"
#include "lexer.hpp"

namespace chtest {

namespace {

class Parser {
public:
  Parser(std::vector<Token> tokens, std::string file)
      : toks_(std::move(tokens)), file_(std::move(file)) {}

  std::vector<ClassDecl> parseAll() {
    std::vector<ClassDecl> classes;
    while (!at(Tok::Eof))
      classes.push_back(parseClass());
    return classes;
  }

private:
  std::vector<Token> toks_;
  std::string file_;
  size_t pos_ = 0;

  const Token &cur() const { return toks_[pos_]; }
  const Token &ahead(size_t n) const {
    size_t i = pos_ + n;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k) const { return cur().kind == k; }
  Span spanHere() const { return {cur().line, cur().col}; }

  [[noreturn]] void fail(const std::string &what) const {
    const Token &t = cur();
    throw Error(ErrorCode::ParseFailed,
                file_ + ":" + std::to_string(t.line) + ":" +
                    std::to_string(t.col) + ": " + what +
                    (t.kind == Tok::Eof ? " (at end of file)"
                                        : " (at '" + t.text + "')"));
  }

  Token expect(Tok k, const std::string &what) {
    if (!at(k))
      fail("expected " + what);
    return toks_[pos_++];
  }
  bool accept(Tok k) {
    if (!at(k))
      return false;
    ++pos_;
    return true;
  }

  bool atType() const {
    return at(Tok::KwInt) || at(Tok::KwBool) || at(Tok::Ident);
  }

  TypeRef parseType() {
    if (accept(Tok::KwInt))
      return {TypeKind::Int, ""};
    if (accept(Tok::KwBool))
      return {TypeKind::Bool, ""};
    Token t = expect(Tok::Ident, "a type name");
    return {TypeKind::Class, t.text};
  }

  ClassDecl parseClass() {
    ClassDecl cls;
    cls.span = spanHere();
    expect(Tok::KwClass, "'class'");
    cls.name = expect(Tok::Ident, "a class name").text;
    if (accept(Tok::KwExtends))
      cls.superclass = expect(Tok::Ident, "a superclass name").text;
    expect(Tok::LBrace, "'{'");
    while (!accept(Tok::RBrace))
      parseMember(cls);
    return cls;
  }

  void parseMember(ClassDecl &cls) {
    Span span = spanHere();
    // A name directly followed by '(' is a constructor; everything else
    // starts with a type.
    if (at(Tok::Ident) && ahead(1).kind == Tok::LParen) {
      MethodDecl m;
      m.span = span;
      m.name = expect(Tok::Ident, "a constructor name").text;
      m.isConstructor = true;
      m.returnType = {TypeKind::Void, ""};
      parseParams(m);
      if (at(Tok::Semi))
        fail("constructor requires a body");
      parseBlock(m.body);
      cls.methods.push_back(std::move(m));
      return;
    }

    TypeRef type =
        accept(Tok::KwVoid) ? TypeRef{TypeKind::Void, ""} : parseType();
    std::string name = expect(Tok::Ident, "a member name").text;
    if (at(Tok::LParen)) {
      MethodDecl m;
      m.span = span;
      m.name = std::move(name);
      m.returnType = type;
      parseParams(m);
      if (accept(Tok::Semi))
        m.isAbstract = true;
      else
        parseBlock(m.body);
      cls.methods.push_back(std::move(m));
    } else {
      if (type.kind == TypeKind::Void)
        fail("fields cannot be void");
      expect(Tok::Semi, "';'");
      cls.fields.push_back({type, std::move(name), span});
    }
  }

  void parseParams(MethodDecl &m) {
    expect(Tok::LParen, "'('");
    if (!accept(Tok::RParen)) {
      do {
        TypeRef t = parseType();
        std::string n = expect(Tok::Ident, "a parameter name").text;
        m.params.push_back({t, std::move(n)});
      } while (accept(Tok::Comma));
      expect(Tok::RParen, "')'");
    }
  }

  void parseBlock(std::vector<std::unique_ptr<Stmt>> &into) {
    expect(Tok::LBrace, "'{'");
    while (!accept(Tok::RBrace))
      into.push_back(parseStmt());
  }

  std::unique_ptr<Stmt> parseStmt() {
    Span span = spanHere();
    if (at(Tok::KwIf))
      return parseIf();
    if (at(Tok::KwWhile)) {
      ++pos_;
      auto s = std::make_unique<Stmt>();
      s->kind = StmtKind::While;
      s->span = span;
      expect(Tok::LParen, "'('");
      s->expr = parseExpr();
      expect(Tok::RParen, "')'");
      parseBlock(s->body);
      return s;
    }
    if (accept(Tok::KwReturn)) {
      auto s = std::make_unique<Stmt>();
      s->kind = StmtKind::Return;
      s->span = span;
      if (!at(Tok::Semi))
        s->expr = parseExpr();
      expect(Tok::Semi, "';'");
      return s;
    }
    if (accept(Tok::KwAssert)) {
      auto s = std::make_unique<Stmt>();
      s->kind = StmtKind::Assert;
      s->span = span;
      s->expr = parseExpr();
      expect(Tok::Semi, "';'");
      return s;
    }
    // Local declaration: primitive type, or two consecutive identifiers.
    if (at(Tok::KwInt) || at(Tok::KwBool) ||
        (at(Tok::Ident) && ahead(1).kind == Tok::Ident)) {
      auto s = std::make_unique<Stmt>();
      s->kind = StmtKind::VarDecl;
      s->span = span;
      s->declType = parseType();
      s->target = expect(Tok::Ident, "a variable name").text;
      if (accept(Tok::Assign))
        s->expr = parseExpr();
      expect(Tok::Semi, "';'");
      return s;
    }
    // Assignment to a name or to this.<field>.
    if (at(Tok::Ident) && ahead(1).kind == Tok::Assign) {
      auto s = std::make_unique<Stmt>();
      s->kind = StmtKind::Assign;
      s->span = span;
      s->target = toks_[pos_].text;
      pos_ += 2;
      s->expr = parseExpr();
      expect(Tok::Semi, "';'");
      return s;
    }
    if (at(Tok::KwThis) && ahead(1).kind == Tok::Dot &&
        ahead(2).kind == Tok::Ident && ahead(3).kind == Tok::Assign) {
      auto s = std::make_unique<Stmt>();
      s->kind = StmtKind::Assign;
      s->span = span;
      s->target = ahead(2).text;
      s->targetIsField = true;
      pos_ += 4;
      s->expr = parseExpr();
      expect(Tok::Semi, "';'");
      return s;
    }
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::ExprStmt;
    s->span = span;
    s->expr = parseExpr();
    expect(Tok::Semi, "';'");
    return s;
  }

  std::unique_ptr<Stmt> parseIf() {
    Span span = spanHere();
    expect(Tok::KwIf, "'if'");
    auto s = std::make_unique<Stmt>();
    s->kind = StmtKind::If;
    s->span = span;
    expect(Tok::LParen, "'('");
    s->expr = parseExpr();
    expect(Tok::RParen, "')'");
    parseBlock(s->body);
    if (accept(Tok::KwElse)) {
      if (at(Tok::KwIf))
        s->elseBody.push_back(parseIf());
      else
        parseBlock(s->elseBody);
    }
    return s;
  }

  std::unique_ptr<Expr> parseExpr() { return parseOr(); }

  std::unique_ptr<Expr> makeBinary(BinOp op, std::unique_ptr<Expr> lhs,
                                   std::unique_ptr<Expr> rhs, Span span) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Binary;
    e->span = span;
    e->binOp = op;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
  }

  std::unique_ptr<Expr> parseOr() {
    auto lhs = parseAnd();
    while (at(Tok::OrOr)) {
      Span span = spanHere();
      ++pos_;
      lhs = makeBinary(BinOp::Or, std::move(lhs), parseAnd(), span);
    }
    return lhs;
  }

  std::unique_ptr<Expr> parseAnd() {
    auto lhs = parseEq();
    while (at(Tok::AndAnd)) {
      Span span = spanHere();
      ++pos_;
      lhs = makeBinary(BinOp::And, std::move(lhs), parseEq(), span);
    }
    return lhs;
  }

  std::unique_ptr<Expr> parseEq() {
    auto lhs = parseRel();
    while (at(Tok::EqEq) || at(Tok::NotEq)) {
      BinOp op = at(Tok::EqEq) ? BinOp::Eq : BinOp::Ne;
      Span span = spanHere();
      ++pos_;
      lhs = makeBinary(op, std::move(lhs), parseRel(), span);
    }
    return lhs;
  }

  std::unique_ptr<Expr> parseRel() {
    auto lhs = parseAdd();
    while (at(Tok::Lt) || at(Tok::Le) || at(Tok::Gt) || at(Tok::Ge)) {
      BinOp op = at(Tok::Lt)   ? BinOp::Lt
                 : at(Tok::Le) ? BinOp::Le
                 : at(Tok::Gt) ? BinOp::Gt
                               : BinOp::Ge;
      Span span = spanHere();
      ++pos_;
      lhs = makeBinary(op, std::move(lhs), parseAdd(), span);
    }
    return lhs;
  }

  std::unique_ptr<Expr> parseAdd() {
    auto lhs = parseMul();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinOp op = at(Tok::Plus) ? BinOp::Add : BinOp::Sub;
      Span span = spanHere();
      ++pos_;
      lhs = makeBinary(op, std::move(lhs), parseMul(), span);
    }
    return lhs;
  }

  std::unique_ptr<Expr> parseMul() {
    auto lhs = parseUnary();
    while (at(Tok::Star) || at(Tok::Slash)) {
      BinOp op = at(Tok::Star) ? BinOp::Mul : BinOp::Div;
      Span span = spanHere();
      ++pos_;
      lhs = makeBinary(op, std::move(lhs), parseUnary(), span);
    }
    return lhs;
  }

  std::unique_ptr<Expr> parseUnary() {
    Span span = spanHere();
    if (accept(Tok::Bang)) {
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Unary;
      e->span = span;
      e->unOp = UnOp::Not;
      e->operand = parseUnary();
      return e;
    }
    if (accept(Tok::Minus)) {
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Unary;
      e->span = span;
      e->unOp = UnOp::Neg;
      e->operand = parseUnary();
      return e;
    }
    return parsePostfix();
  }

  std::unique_ptr<Expr> parsePostfix() {
    auto e = parsePrimary();
    while (at(Tok::Dot)) {
      Span span = spanHere();
      ++pos_;
      std::string name = expect(Tok::Ident, "a method name").text;
      if (!at(Tok::LParen))
        fail("expected '(' (field access is only allowed on 'this')");
      auto call = std::make_unique<Expr>();
      call->kind = ExprKind::Call;
      call->span = span;
      call->name = std::move(name);
      call->receiver = std::move(e);
      parseArgs(call->args);
      e = std::move(call);
    }
    return e;
  }

  void parseArgs(std::vector<std::unique_ptr<Expr>> &into) {
    expect(Tok::LParen, "'('");
    if (!accept(Tok::RParen)) {
      do {
        into.push_back(parseExpr());
      } while (accept(Tok::Comma));
      expect(Tok::RParen, "')'");
    }
  }

  std::unique_ptr<Expr> parsePrimary() {
    Span span = spanHere();
    auto e = std::make_unique<Expr>();
    e->span = span;
    if (at(Tok::IntLit)) {
      e->kind = ExprKind::IntLit;
      e->intValue = cur().intValue;
      ++pos_;
      return e;
    }
    if (accept(Tok::KwTrue)) {
      e->kind = ExprKind::BoolLit;
      e->boolValue = true;
      return e;
    }
    if (accept(Tok::KwFalse)) {
      e->kind = ExprKind::BoolLit;
      e->boolValue = false;
      return e;
    }
    if (accept(Tok::KwNull)) {
      e->kind = ExprKind::NullLit;
      return e;
    }
    if (accept(Tok::KwNew)) {
      e->kind = ExprKind::New;
      e->name = expect(Tok::Ident, "a class name").text;
      parseArgs(e->args);
      return e;
    }
    if (accept(Tok::KwThis)) {
      expect(Tok::Dot, "'.' ('this' is not a value by itself)");
      std::string name = expect(Tok::Ident, "a member name").text;
      if (at(Tok::LParen)) {
        e->kind = ExprKind::Call;
        e->name = std::move(name);
        parseArgs(e->args);
        return e;
      }
      e->kind = ExprKind::ThisField;
      e->name = std::move(name);
      return e;
    }
    if (accept(Tok::KwSuper)) {
      expect(Tok::Dot, "'.'");
      e->kind = ExprKind::Call;
      e->isSuper = true;
      e->name = expect(Tok::Ident, "a method name").text;
      parseArgs(e->args);
      return e;
    }
    if (at(Tok::Ident)) {
      std::string name = cur().text;
      ++pos_;
      if (at(Tok::LParen)) {
        e->kind = ExprKind::Call;
        e->name = std::move(name);
        parseArgs(e->args);
        return e;
      }
      e->kind = ExprKind::VarRef;
      e->name = std::move(name);
      return e;
    }
    if (accept(Tok::LParen)) {
      auto inner = parseExpr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    fail("expected an expression");
  }
};

} // namespace

std::vector<ClassDecl> parseUnit(const std::string &source,
                                 const std::string &file) {
  return Parser(lex(source, file), file).parseAll();
}

} // namespace chtest
