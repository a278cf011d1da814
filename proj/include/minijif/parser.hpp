#pragma once

#include <charconv>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "minijif/ast.hpp"
#include "minijif/lexer.hpp"

namespace minijif {

inline bool is_builtin_name(std::string_view name) {
  return name == "substring" || name == "concat" || name == "length";
}

/// Recursive-descent parser for MiniJif. Aborts with ParseError at the first
/// error.
class Parser {
 public:
  Parser(std::string_view source, std::string file)
      : toks_(tokenize(source, std::move(file))) {}

  ast::Program program() {
    ast::Program prog;
    while (!at(TokenKind::Eof)) prog.decls.push_back(decl());
    return prog;
  }

  ast::LabelRef label_only() {
    auto l = label();
    expect(TokenKind::Eof);
    return l;
  }

  Principal principal_only() {
    auto p = principal();
    expect(TokenKind::Eof);
    return p;
  }

 private:
  using Expected = std::vector<std::string>;

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t ahead = 1) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(TokenKind k) const { return cur().kind == k; }
  bool at_kw(std::string_view kw) const { return cur().is_keyword(kw); }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    prev_end_ = t.span.end;
    return t;
  }
  bool accept(TokenKind k) {
    if (!at(k)) return false;
    take();
    return true;
  }
  bool accept_kw(std::string_view kw) {
    if (!at_kw(kw)) return false;
    take();
    return true;
  }
  [[noreturn]] void fail(Expected expected) const {
    throw ParseError(cur().span, std::move(expected), describe(cur()));
  }
  const Token& expect(TokenKind k) {
    if (!at(k)) fail({describe(k)});
    return take();
  }
  const Token& expect_kw(std::string_view kw) {
    if (!at_kw(kw)) fail({"'" + std::string(kw) + "'"});
    return take();
  }
  std::string ident() { return expect(TokenKind::Ident).text; }

  Span from(const Span& start) const { return Span{start.file, start.start, prev_end_}; }

  void skip_modifiers() {
    while (at_kw("public") || at_kw("private") || at_kw("protected") || at_kw("final") ||
           at_kw("static"))
      take();
  }

  // ---- declarations ----

  ast::Decl decl() {
    Span start = cur().span;
    if (accept_kw("principal")) {
      ast::PrincipalDecl d;
      d.names.push_back(ident());
      while (accept(TokenKind::Comma)) d.names.push_back(ident());
      expect(TokenKind::Semi);
      d.span = from(start);
      return d;
    }
    if (accept_kw("actsfor")) {
      auto sup = principal();
      expect(TokenKind::GreaterEq);
      auto inf = principal();
      expect(TokenKind::Semi);
      return ast::ActsForDecl{sup, inf, from(start)};
    }
    skip_modifiers();
    if (at_kw("class")) return class_decl(start);
    fail({"'principal'", "'actsfor'", "'class'"});
  }

  ast::ClassDecl class_decl(const Span& start) {
    expect_kw("class");
    ast::ClassDecl c;
    c.name = ident();
    if (accept(TokenKind::LBracket)) {
      std::set<std::string> seen;
      do {
        expect_kw("principal");
        const Token& t = expect(TokenKind::Ident);
        if (!seen.insert(t.text).second)
          throw ParseError(t.span, "duplicate principal parameter '" + t.text + "'");
        c.principal_params.push_back(t.text);
      } while (accept(TokenKind::Comma));
      expect(TokenKind::RBracket);
    }
    if (accept_kw("authority")) c.authority = principal_list_in_parens();
    expect(TokenKind::LBrace);
    while (!at(TokenKind::RBrace)) member(c);
    expect(TokenKind::RBrace);
    c.span = from(start);
    return c;
  }

  void member(ast::ClassDecl& c) {
    Span start = cur().span;
    skip_modifiers();
    if (at(TokenKind::Eof)) fail({"'}'"});
    ast::TypeRef type = type_ref();
    std::optional<ast::LabelRef> lbl;
    if (at(TokenKind::LBrace)) lbl = label();
    const Token& name_tok = expect(TokenKind::Ident);
    if (accept(TokenKind::Semi)) {
      if (!lbl) throw ParseError(name_tok.span, "field '" + name_tok.text + "' needs a label");
      c.fields.push_back(ast::FieldDecl{std::move(type), std::move(*lbl), name_tok.text, from(start)});
      return;
    }
    if (!at(TokenKind::LBrace) && !at(TokenKind::LParen)) fail({"';'", "'{'", "'('"});
    ast::MethodDecl m;
    m.return_type = std::move(type);
    m.return_label = std::move(lbl);
    m.name = name_tok.text;
    m.name_span = name_tok.span;
    if (at(TokenKind::LBrace)) m.begin_label = label();
    expect(TokenKind::LParen);
    if (!at(TokenKind::RParen)) {
      do {
        Span ps = cur().span;
        ast::Param p;
        p.type = type_ref();
        if (at(TokenKind::LBrace)) p.label = label();
        p.name = ident();
        p.span = from(ps);
        m.params.push_back(std::move(p));
      } while (accept(TokenKind::Comma));
    }
    expect(TokenKind::RParen);
    if (accept(TokenKind::Colon)) m.end_label = label();
    if (accept_kw("where")) {
      expect_kw("authority");
      m.authority = principal_list_in_parens();
    }
    m.body = block();
    m.span = from(start);
    c.methods.push_back(std::move(m));
  }

  std::vector<Principal> principal_list_in_parens() {
    expect(TokenKind::LParen);
    std::vector<Principal> out;
    do {
      out.push_back(principal());
    } while (accept(TokenKind::Comma));
    expect(TokenKind::RParen);
    return out;
  }

  bool at_type_start() const {
    if (at_kw("int") || at_kw("bool") || at_kw("String") || at_kw("void")) return true;
    if (!at(TokenKind::Ident)) return false;
    auto next = peek().kind;
    return next == TokenKind::LBracket || next == TokenKind::Ident || next == TokenKind::LBrace;
  }

  ast::TypeRef type_ref() {
    Span start = cur().span;
    ast::TypeRef t;
    if (accept_kw("int")) t.kind = ast::TypeRef::Kind::Int;
    else if (accept_kw("bool")) t.kind = ast::TypeRef::Kind::Bool;
    else if (accept_kw("String")) t.kind = ast::TypeRef::Kind::String;
    else if (accept_kw("void")) t.kind = ast::TypeRef::Kind::Void;
    else if (at(TokenKind::Ident)) {
      t.kind = ast::TypeRef::Kind::Class;
      t.class_name = take().text;
      if (accept(TokenKind::LBracket)) {
        do {
          t.principal_args.push_back(principal());
        } while (accept(TokenKind::Comma));
        expect(TokenKind::RBracket);
      }
    } else {
      fail({"type"});
    }
    t.span = from(start);
    return t;
  }

  // ---- labels ----

  Principal principal() {
    if (at(TokenKind::Ident)) return Principal::named(take().text);
    if (accept(TokenKind::Star)) return Principal::top();
    if (accept(TokenKind::Underscore)) return Principal::bottom();
    fail({"principal"});
  }

  ast::LabelRef label() {
    Span start = cur().span;
    expect(TokenKind::LBrace);
    Label l;
    if (!at(TokenKind::RBrace)) l = components(TokenKind::RBrace);
    expect(TokenKind::RBrace);
    return ast::LabelRef{l, from(start)};
  }

  // comp (";" comp)* with an optional trailing ";" before `close`.
  Label components(TokenKind close) {
    Label l = component();
    while (accept(TokenKind::Semi)) {
      if (at(close)) break;
      l = join(l, component());
    }
    return l;
  }

  Label component() {
    Label l = label_atom();
    while (accept_kw("meet")) l = meet(l, label_atom());
    return l;
  }

  Label label_atom() {
    if (accept(TokenKind::LParen)) {
      Label inner = components(TokenKind::RParen);
      expect(TokenKind::RParen);
      return inner;
    }
    if (at(TokenKind::Ident) && !peek().is(TokenKind::Arrow) && !peek().is(TokenKind::LeftArrow))
      return Label::variable(take().text);
    if (!at(TokenKind::Ident) && !at(TokenKind::Star) && !at(TokenKind::Underscore))
      fail({"policy", "label variable", "'('"});
    Principal owner = principal();
    PolicyKind kind;
    if (accept(TokenKind::Arrow)) kind = PolicyKind::Confidentiality;
    else if (accept(TokenKind::LeftArrow)) kind = PolicyKind::Integrity;
    else fail({"'->'", "'<-'"});
    std::vector<Principal> ps{principal()};
    while (accept(TokenKind::Comma)) ps.push_back(principal());
    return Label::policy(kind == PolicyKind::Confidentiality ? Policy::conf(owner, ps)
                                                             : Policy::integ(owner, ps));
  }

  // ---- statements ----

  ast::Block block() {
    Span start = cur().span;
    expect(TokenKind::LBrace);
    ast::Block b;
    while (!at(TokenKind::RBrace)) {
      if (at(TokenKind::Eof)) fail({"'}'"});
      b.stmts.push_back(stmt());
    }
    expect(TokenKind::RBrace);
    b.span = from(start);
    return b;
  }

  ast::Stmt stmt() {
    Span start = cur().span;
    if (accept_kw("if")) {
      expect(TokenKind::LParen);
      ast::If s;
      s.cond = expr();
      expect(TokenKind::RParen);
      s.then_block = block();
      if (accept_kw("else")) {
        if (at_kw("if")) {
          ast::Block b;
          Span es = cur().span;
          b.stmts.push_back(stmt());
          b.span = from(es);
          s.else_block = std::move(b);
        } else {
          s.else_block = block();
        }
      }
      return ast::Stmt{std::move(s), from(start)};
    }
    if (accept_kw("while")) {
      expect(TokenKind::LParen);
      ast::While s;
      s.cond = expr();
      expect(TokenKind::RParen);
      s.body = block();
      return ast::Stmt{std::move(s), from(start)};
    }
    if (accept_kw("return")) {
      ast::Return s;
      if (!at(TokenKind::Semi)) s.value = expr();
      expect(TokenKind::Semi);
      return ast::Stmt{std::move(s), from(start)};
    }
    if (at_type_start()) {
      ast::VarDecl d;
      d.type = type_ref();
      if (at(TokenKind::LBrace)) d.label = label();
      d.name = ident();
      if (accept(TokenKind::Assign)) d.init = expr();
      expect(TokenKind::Semi);
      return ast::Stmt{std::move(d), from(start)};
    }
    auto e = expr();
    if (accept(TokenKind::Assign)) {
      if (!e->as<ast::Var>() && !e->as<ast::FieldAccess>())
        throw ParseError(e->span, "invalid assignment target");
      ast::Assign a{std::move(e), expr()};
      expect(TokenKind::Semi);
      return ast::Stmt{std::move(a), from(start)};
    }
    expect(TokenKind::Semi);
    return ast::Stmt{ast::ExprStmt{std::move(e)}, from(start)};
  }

  // ---- expressions ----

  ast::ExprPtr binary(ast::BinaryOp op, ast::ExprPtr l, ast::ExprPtr r) {
    Span s = cover(l->span, r->span);
    return ast::make_expr(ast::BinOp{op, std::move(l), std::move(r)}, s);
  }

  ast::ExprPtr expr() { return or_expr(); }

  ast::ExprPtr or_expr() {
    auto l = and_expr();
    while (accept(TokenKind::OrOr)) l = binary(ast::BinaryOp::Or, std::move(l), and_expr());
    return l;
  }
  ast::ExprPtr and_expr() {
    auto l = eq_expr();
    while (accept(TokenKind::AndAnd)) l = binary(ast::BinaryOp::And, std::move(l), eq_expr());
    return l;
  }
  ast::ExprPtr eq_expr() {
    auto l = rel_expr();
    for (;;) {
      if (accept(TokenKind::EqEq)) l = binary(ast::BinaryOp::Eq, std::move(l), rel_expr());
      else if (accept(TokenKind::NotEq)) l = binary(ast::BinaryOp::Ne, std::move(l), rel_expr());
      else return l;
    }
  }
  ast::ExprPtr rel_expr() {
    auto l = add_expr();
    for (;;) {
      ast::BinaryOp op;
      if (at(TokenKind::LeftArrow)) {
        // `a<-b` is `a < -b` in expression position.
        Position minus{cur().span.start.line, cur().span.start.column + 1};
        take();
        l = binary(ast::BinaryOp::Lt, std::move(l), add_expr(minus));
        continue;
      }
      if (accept(TokenKind::Less)) op = ast::BinaryOp::Lt;
      else if (accept(TokenKind::LessEq)) op = ast::BinaryOp::Le;
      else if (accept(TokenKind::Greater)) op = ast::BinaryOp::Gt;
      else if (accept(TokenKind::GreaterEq)) op = ast::BinaryOp::Ge;
      else return l;
      l = binary(op, std::move(l), add_expr());
    }
  }
  ast::ExprPtr add_expr(std::optional<Position> negate_first = std::nullopt) {
    auto l = mul_expr(negate_first);
    for (;;) {
      if (accept(TokenKind::Plus)) l = binary(ast::BinaryOp::Add, std::move(l), mul_expr());
      else if (accept(TokenKind::Minus)) l = binary(ast::BinaryOp::Sub, std::move(l), mul_expr());
      else return l;
    }
  }
  ast::ExprPtr mul_expr(std::optional<Position> negate_first = std::nullopt) {
    auto l = unary_expr();
    if (negate_first) {
      Span s{l->span.file, *negate_first, l->span.end};
      l = ast::make_expr(ast::Unary{ast::UnaryOp::Neg, std::move(l)}, s);
    }
    for (;;) {
      if (accept(TokenKind::Star)) l = binary(ast::BinaryOp::Mul, std::move(l), unary_expr());
      else if (accept(TokenKind::Slash)) l = binary(ast::BinaryOp::Div, std::move(l), unary_expr());
      else if (accept(TokenKind::Percent)) l = binary(ast::BinaryOp::Mod, std::move(l), unary_expr());
      else return l;
    }
  }
  ast::ExprPtr unary_expr() {
    Span start = cur().span;
    if (accept(TokenKind::Bang)) {
      auto e = unary_expr();
      return ast::make_expr(ast::Unary{ast::UnaryOp::Not, std::move(e)}, from(start));
    }
    if (accept(TokenKind::Minus)) {
      auto e = unary_expr();
      return ast::make_expr(ast::Unary{ast::UnaryOp::Neg, std::move(e)}, from(start));
    }
    return postfix_expr();
  }
  ast::ExprPtr postfix_expr() {
    Span start = cur().span;
    auto e = primary();
    while (accept(TokenKind::Dot)) {
      std::string name = ident();
      if (at(TokenKind::LParen)) {
        auto args = call_args();
        e = ast::make_expr(ast::Call{std::move(e), name, std::move(args)}, from(start));
      } else {
        e = ast::make_expr(ast::FieldAccess{std::move(e), name}, from(start));
      }
    }
    return e;
  }
  std::vector<ast::ExprPtr> call_args() {
    expect(TokenKind::LParen);
    std::vector<ast::ExprPtr> args;
    if (!at(TokenKind::RParen)) {
      do {
        args.push_back(expr());
      } while (accept(TokenKind::Comma));
    }
    expect(TokenKind::RParen);
    return args;
  }
  ast::ExprPtr primary() {
    Span start = cur().span;
    if (at(TokenKind::IntLit)) {
      const Token& t = take();
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc()) throw ParseError(t.span, "integer literal out of range");
      return ast::make_expr(ast::IntLit{v}, t.span);
    }
    if (at(TokenKind::StrLit)) {
      const Token& t = take();
      return ast::make_expr(ast::StrLit{t.text}, t.span);
    }
    if (accept_kw("true")) return ast::make_expr(ast::BoolLit{true}, start);
    if (accept_kw("false")) return ast::make_expr(ast::BoolLit{false}, start);
    if (accept_kw("this")) return ast::make_expr(ast::Var{"this"}, start);
    if (at(TokenKind::Ident)) {
      std::string name = take().text;
      if (at(TokenKind::LParen)) {
        auto args = call_args();
        if (is_builtin_name(name))
          return ast::make_expr(ast::Builtin{name, std::move(args)}, from(start));
        return ast::make_expr(ast::Call{nullptr, name, std::move(args)}, from(start));
      }
      return ast::make_expr(ast::Var{name}, start);
    }
    if (accept_kw("new")) {
      ast::New n;
      n.class_name = ident();
      if (accept(TokenKind::LBracket)) {
        do {
          n.principal_args.push_back(principal());
        } while (accept(TokenKind::Comma));
        expect(TokenKind::RBracket);
      }
      n.args = call_args();
      return ast::make_expr(std::move(n), from(start));
    }
    if (accept_kw("declassify")) {
      expect(TokenKind::LParen);
      auto value = expr();
      expect(TokenKind::Comma);
      auto from_label = label();
      expect_kw("to");
      auto to_label = label();
      expect(TokenKind::RParen);
      return ast::make_expr(
          ast::Declassify{std::move(value), std::move(from_label), std::move(to_label)},
          from(start));
    }
    if (accept(TokenKind::LParen)) {
      auto e = expr();
      expect(TokenKind::RParen);
      e->span = from(start);
      return e;
    }
    fail({"expression"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Position prev_end_{};
};

inline ast::Program parse_program(std::string_view source, std::string file = "<input>") {
  return Parser(source, std::move(file)).program();
}

inline Label parse_label(std::string_view text) {
  return Parser(text, "<label>").label_only().label;
}

inline Principal parse_principal(std::string_view text) {
  return Parser(text, "<principal>").principal_only();
}

}  // namespace minijif
