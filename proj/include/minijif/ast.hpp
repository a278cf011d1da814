#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "minijif/labels.hpp"
#include "minijif/source.hpp"

namespace minijif::ast {

struct TypeRef {
  enum class Kind { Int, Bool, String, Void, Class };
  Kind kind = Kind::Void;
  std::string class_name;
  std::vector<Principal> principal_args;
  Span span;

  static TypeRef primitive(Kind k) {
    TypeRef t;
    t.kind = k;
    return t;
  }
  std::string to_string() const {
    switch (kind) {
      case Kind::Int: return "int";
      case Kind::Bool: return "bool";
      case Kind::String: return "String";
      case Kind::Void: return "void";
      case Kind::Class: break;
    }
    std::string out = class_name;
    if (!principal_args.empty()) {
      out += "[";
      for (std::size_t i = 0; i < principal_args.size(); ++i) {
        if (i) out += ", ";
        out += principal_args[i].to_string();
      }
      out += "]";
    }
    return out;
  }
  bool same_type(const TypeRef& o) const {
    return kind == o.kind && class_name == o.class_name && principal_args == o.principal_args;
  }
};

/// A label annotation as written in source.
struct LabelRef {
  Label label;
  Span span;
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct IntLit { std::int64_t value; };
struct StrLit { std::string value; };
struct BoolLit { bool value; };
/// A name: local, parameter, implicit-receiver field, or `this`.
struct Var { std::string name; };
struct FieldAccess {
  ExprPtr receiver;
  std::string field;
};
/// `receiver.method(args)`, or `method(args)` on the current object when
/// `receiver` is null.
struct Call {
  ExprPtr receiver;
  std::string method;
  std::vector<ExprPtr> args;
};
struct New {
  std::string class_name;
  std::vector<Principal> principal_args;
  std::vector<ExprPtr> args;
};
struct Declassify {
  ExprPtr value;
  LabelRef from;
  LabelRef to;
};
/// `substring`, `concat` or `length`.
struct Builtin {
  std::string name;
  std::vector<ExprPtr> args;
};

enum class UnaryOp { Not, Neg };
enum class BinaryOp { Or, And, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div, Mod };

struct Unary {
  UnaryOp op;
  ExprPtr operand;
};
struct BinOp {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Expr {
  using Node = std::variant<IntLit, StrLit, BoolLit, Var, FieldAccess, Call, New, Declassify,
                            Builtin, Unary, BinOp>;
  Node node;
  Span span;

  template <typename T>
  const T* as() const { return std::get_if<T>(&node); }
};

template <typename T>
ExprPtr make_expr(T node, Span span) {
  return std::make_unique<Expr>(Expr{std::move(node), std::move(span)});
}

struct Stmt;

struct Block {
  std::vector<Stmt> stmts;
  Span span;
};

struct VarDecl {
  TypeRef type;
  std::optional<LabelRef> label;
  std::string name;
  ExprPtr init;  // may be null
};
struct Assign {
  ExprPtr target;  // Var or FieldAccess
  ExprPtr value;
};
struct If {
  ExprPtr cond;
  Block then_block;
  std::optional<Block> else_block;
};
struct While {
  ExprPtr cond;
  Block body;
};
struct Return { ExprPtr value; };  // value may be null
struct ExprStmt { ExprPtr expr; };

struct Stmt {
  using Node = std::variant<VarDecl, Assign, If, While, Return, ExprStmt>;
  Node node;
  Span span;

  template <typename T>
  const T* as() const { return std::get_if<T>(&node); }
};

struct Param {
  TypeRef type;
  std::optional<LabelRef> label;
  std::string name;
  Span span;
};

struct FieldDecl {
  TypeRef type;
  LabelRef label;
  std::string name;
  Span span;
};

struct MethodDecl {
  TypeRef return_type;
  std::optional<LabelRef> return_label;
  std::string name;
  std::optional<LabelRef> begin_label;
  std::vector<Param> params;
  std::optional<LabelRef> end_label;
  std::vector<Principal> authority;  // `where authority(...)`
  Block body;
  Span span;
  Span name_span;
};

struct ClassDecl {
  std::string name;
  std::vector<std::string> principal_params;
  std::vector<Principal> authority;  // class-level `authority(...)`
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
  Span span;

  const FieldDecl* find_field(const std::string& n) const {
    for (const auto& f : fields)
      if (f.name == n) return &f;
    return nullptr;
  }
  const MethodDecl* find_method(const std::string& n) const {
    for (const auto& m : methods)
      if (m.name == n) return &m;
    return nullptr;
  }
};

struct PrincipalDecl {
  std::vector<std::string> names;
  Span span;
};

struct ActsForDecl {
  Principal superior;
  Principal inferior;
  Span span;
};

using Decl = std::variant<PrincipalDecl, ActsForDecl, ClassDecl>;

struct Program {
  std::vector<Decl> decls;
};

inline const Span& span_of(const Decl& d) {
  return std::visit([](const auto& x) -> const Span& { return x.span; }, d);
}

}  // namespace minijif::ast
