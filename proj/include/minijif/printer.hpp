#pragma once

#include <string>

#include "minijif/ast.hpp"

namespace minijif {

namespace detail {

inline int precedence(ast::BinaryOp op) {
  using B = ast::BinaryOp;
  switch (op) {
    case B::Or: return 1;
    case B::And: return 2;
    case B::Eq:
    case B::Ne: return 3;
    case B::Lt:
    case B::Le:
    case B::Gt:
    case B::Ge: return 4;
    case B::Add:
    case B::Sub: return 5;
    case B::Mul:
    case B::Div:
    case B::Mod: return 6;
  }
  return 0;
}
constexpr int kUnaryPrecedence = 7;
constexpr int kAtomPrecedence = 8;

inline const char* spelling(ast::BinaryOp op) {
  using B = ast::BinaryOp;
  switch (op) {
    case B::Or: return "||";
    case B::And: return "&&";
    case B::Eq: return "==";
    case B::Ne: return "!=";
    case B::Lt: return "<";
    case B::Le: return "<=";
    case B::Gt: return ">";
    case B::Ge: return ">=";
    case B::Add: return "+";
    case B::Sub: return "-";
    case B::Mul: return "*";
    case B::Div: return "/";
    case B::Mod: return "%";
  }
  return "?";
}

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

inline std::string principal_list(const std::vector<Principal>& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ", ";
    out += ps[i].to_string();
  }
  return out;
}

class Printer {
 public:
  std::string program(const ast::Program& p) {
    bool prev_class = false;
    bool first = true;
    for (const auto& d : p.decls) {
      bool is_class = std::holds_alternative<ast::ClassDecl>(d);
      if (!first && (is_class || prev_class)) out_ += "\n";
      first = false;
      prev_class = is_class;
      std::visit([&](const auto& x) { decl(x); }, d);
    }
    return std::move(out_);
  }

  static int expr_precedence(const ast::Expr& e) {
    if (auto b = e.as<ast::BinOp>()) return precedence(b->op);
    if (e.as<ast::Unary>()) return kUnaryPrecedence;
    return kAtomPrecedence;
  }

  static std::string expr(const ast::Expr& e) {
    return std::visit([](const auto& n) { return node(n); }, e.node);
  }

  static std::string type(const ast::TypeRef& t, const std::optional<ast::LabelRef>& l) {
    return t.to_string() + (l ? l->label.to_string() : "");
  }

 private:
  void line(int depth, const std::string& text) {
    out_.append(static_cast<std::size_t>(depth) * 4, ' ');
    out_ += text;
    out_ += "\n";
  }

  void decl(const ast::PrincipalDecl& d) {
    std::string text = "principal ";
    for (std::size_t i = 0; i < d.names.size(); ++i) {
      if (i) text += ", ";
      text += d.names[i];
    }
    line(0, text + ";");
  }
  void decl(const ast::ActsForDecl& d) {
    line(0, "actsfor " + d.superior.to_string() + " >= " + d.inferior.to_string() + ";");
  }
  void decl(const ast::ClassDecl& c) {
    std::string head = "class " + c.name;
    if (!c.principal_params.empty()) {
      head += "[";
      for (std::size_t i = 0; i < c.principal_params.size(); ++i) {
        if (i) head += ", ";
        head += "principal " + c.principal_params[i];
      }
      head += "]";
    }
    if (!c.authority.empty()) head += " authority(" + principal_list(c.authority) + ")";
    line(0, head + " {");
    for (const auto& f : c.fields) line(1, f.type.to_string() + f.label.label.to_string() + " " + f.name + ";");
    for (std::size_t i = 0; i < c.methods.size(); ++i) {
      if (i || !c.fields.empty()) out_ += "\n";
      method(c.methods[i]);
    }
    line(0, "}");
  }

  void method(const ast::MethodDecl& m) {
    std::string head = type(m.return_type, m.return_label) + " " + m.name;
    if (m.begin_label) head += m.begin_label->label.to_string();
    head += "(";
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      if (i) head += ", ";
      head += type(m.params[i].type, m.params[i].label) + " " + m.params[i].name;
    }
    head += ")";
    if (m.end_label) head += " : " + m.end_label->label.to_string();
    if (!m.authority.empty()) head += " where authority(" + principal_list(m.authority) + ")";
    line(1, head + " {");
    stmts(m.body, 2);
    line(1, "}");
  }

  void stmts(const ast::Block& b, int depth) {
    for (const auto& s : b.stmts) stmt(s, depth);
  }

  void stmt(const ast::Stmt& s, int depth) {
    if (auto d = s.as<ast::VarDecl>()) {
      std::string text = type(d->type, d->label) + " " + d->name;
      if (d->init) text += " = " + expr(*d->init);
      line(depth, text + ";");
    } else if (auto a = s.as<ast::Assign>()) {
      line(depth, expr(*a->target) + " = " + expr(*a->value) + ";");
    } else if (auto i = s.as<ast::If>()) {
      if_chain(*i, depth, "if");
    } else if (auto w = s.as<ast::While>()) {
      line(depth, "while (" + expr(*w->cond) + ") {");
      stmts(w->body, depth + 1);
      line(depth, "}");
    } else if (auto r = s.as<ast::Return>()) {
      line(depth, r->value ? "return " + expr(*r->value) + ";" : "return;");
    } else if (auto e = s.as<ast::ExprStmt>()) {
      line(depth, expr(*e->expr) + ";");
    }
  }

  void if_chain(const ast::If& i, int depth, const std::string& keyword) {
    line(depth, keyword + " (" + expr(*i.cond) + ") {");
    stmts(i.then_block, depth + 1);
    if (!i.else_block) {
      line(depth, "}");
      return;
    }
    const auto& eb = *i.else_block;
    if (eb.stmts.size() == 1 && eb.stmts[0].as<ast::If>()) {
      if_chain(*eb.stmts[0].as<ast::If>(), depth, "} else if");
      return;
    }
    line(depth, "} else {");
    stmts(eb, depth + 1);
    line(depth, "}");
  }

  static std::string args(const std::vector<ast::ExprPtr>& as) {
    std::string out = "(";
    for (std::size_t i = 0; i < as.size(); ++i) {
      if (i) out += ", ";
      out += expr(*as[i]);
    }
    return out + ")";
  }

  static std::string operand(const ast::Expr& e, int min_prec) {
    std::string text = expr(e);
    return expr_precedence(e) < min_prec ? "(" + text + ")" : text;
  }

  static std::string node(const ast::IntLit& n) { return std::to_string(n.value); }
  static std::string node(const ast::StrLit& n) { return quote(n.value); }
  static std::string node(const ast::BoolLit& n) { return n.value ? "true" : "false"; }
  static std::string node(const ast::Var& n) { return n.name; }
  static std::string node(const ast::FieldAccess& n) {
    return operand(*n.receiver, kAtomPrecedence) + "." + n.field;
  }
  static std::string node(const ast::Call& n) {
    std::string head = n.receiver ? operand(*n.receiver, kAtomPrecedence) + "." : "";
    return head + n.method + args(n.args);
  }
  static std::string node(const ast::New& n) {
    std::string out = "new " + n.class_name;
    if (!n.principal_args.empty()) out += "[" + principal_list(n.principal_args) + "]";
    return out + args(n.args);
  }
  static std::string node(const ast::Declassify& n) {
    return "declassify(" + expr(*n.value) + ", " + n.from.label.to_string() + " to " +
           n.to.label.to_string() + ")";
  }
  static std::string node(const ast::Builtin& n) { return n.name + args(n.args); }
  static std::string node(const ast::Unary& n) {
    // Nested unary operators are parenthesized so `- -x` never prints as `--x`.
    std::string text = expr(*n.operand);
    if (expr_precedence(*n.operand) < kAtomPrecedence) text = "(" + text + ")";
    return (n.op == ast::UnaryOp::Not ? "!" : "-") + text;
  }
  static std::string node(const ast::BinOp& n) {
    int p = precedence(n.op);
    return operand(*n.lhs, p) + " " + spelling(n.op) + " " + operand(*n.rhs, p + 1);
  }

  std::string out_;
};

}  // namespace detail

inline std::string pretty_print(const ast::Program& p) { return detail::Printer().program(p); }

inline std::string pretty_print(const ast::Expr& e) { return detail::Printer::expr(e); }

inline std::string pretty_print(const Label& l) { return l.to_string(); }

// ---- structural equality, ignoring spans ----

namespace detail {

inline bool same(const ast::Expr& a, const ast::Expr& b);

inline bool same(const ast::ExprPtr& a, const ast::ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return same(*a, *b);
}

inline bool same(const std::vector<ast::ExprPtr>& a, const std::vector<ast::ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(a[i], b[i])) return false;
  return true;
}

inline bool same(const std::optional<ast::LabelRef>& a, const std::optional<ast::LabelRef>& b) {
  if (!a || !b) return !a && !b;
  return a->label == b->label;
}

inline bool same_node(const ast::IntLit& a, const ast::IntLit& b) { return a.value == b.value; }
inline bool same_node(const ast::StrLit& a, const ast::StrLit& b) { return a.value == b.value; }
inline bool same_node(const ast::BoolLit& a, const ast::BoolLit& b) { return a.value == b.value; }
inline bool same_node(const ast::Var& a, const ast::Var& b) { return a.name == b.name; }
inline bool same_node(const ast::FieldAccess& a, const ast::FieldAccess& b) {
  return a.field == b.field && same(a.receiver, b.receiver);
}
inline bool same_node(const ast::Call& a, const ast::Call& b) {
  return a.method == b.method && same(a.receiver, b.receiver) && same(a.args, b.args);
}
inline bool same_node(const ast::New& a, const ast::New& b) {
  return a.class_name == b.class_name && a.principal_args == b.principal_args &&
         same(a.args, b.args);
}
inline bool same_node(const ast::Declassify& a, const ast::Declassify& b) {
  return a.from.label == b.from.label && a.to.label == b.to.label && same(a.value, b.value);
}
inline bool same_node(const ast::Builtin& a, const ast::Builtin& b) {
  return a.name == b.name && same(a.args, b.args);
}
inline bool same_node(const ast::Unary& a, const ast::Unary& b) {
  return a.op == b.op && same(a.operand, b.operand);
}
inline bool same_node(const ast::BinOp& a, const ast::BinOp& b) {
  return a.op == b.op && same(a.lhs, b.lhs) && same(a.rhs, b.rhs);
}

inline bool same(const ast::Expr& a, const ast::Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        return same_node(x, std::get<T>(b.node));
      },
      a.node);
}

inline bool same(const ast::Block& a, const ast::Block& b);

inline bool same(const ast::Stmt& a, const ast::Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  if (auto x = a.as<ast::VarDecl>()) {
    auto y = b.as<ast::VarDecl>();
    return x->type.same_type(y->type) && same(x->label, y->label) && x->name == y->name &&
           same(x->init, y->init);
  }
  if (auto x = a.as<ast::Assign>()) {
    auto y = b.as<ast::Assign>();
    return same(x->target, y->target) && same(x->value, y->value);
  }
  if (auto x = a.as<ast::If>()) {
    auto y = b.as<ast::If>();
    if (!same(x->cond, y->cond) || !same(x->then_block, y->then_block)) return false;
    if (!x->else_block || !y->else_block) return !x->else_block && !y->else_block;
    return same(*x->else_block, *y->else_block);
  }
  if (auto x = a.as<ast::While>()) {
    auto y = b.as<ast::While>();
    return same(x->cond, y->cond) && same(x->body, y->body);
  }
  if (auto x = a.as<ast::Return>()) return same(x->value, b.as<ast::Return>()->value);
  return same(a.as<ast::ExprStmt>()->expr, b.as<ast::ExprStmt>()->expr);
}

inline bool same(const ast::Block& a, const ast::Block& b) {
  if (a.stmts.size() != b.stmts.size()) return false;
  for (std::size_t i = 0; i < a.stmts.size(); ++i)
    if (!same(a.stmts[i], b.stmts[i])) return false;
  return true;
}

inline bool same(const ast::MethodDecl& a, const ast::MethodDecl& b) {
  if (!a.return_type.same_type(b.return_type) || !same(a.return_label, b.return_label) ||
      a.name != b.name || !same(a.begin_label, b.begin_label) ||
      !same(a.end_label, b.end_label) || a.authority != b.authority ||
      a.params.size() != b.params.size())
    return false;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    const auto& p = a.params[i];
    const auto& q = b.params[i];
    if (!p.type.same_type(q.type) || !same(p.label, q.label) || p.name != q.name) return false;
  }
  return same(a.body, b.body);
}

inline bool same(const ast::ClassDecl& a, const ast::ClassDecl& b) {
  if (a.name != b.name || a.principal_params != b.principal_params ||
      a.authority != b.authority || a.fields.size() != b.fields.size() ||
      a.methods.size() != b.methods.size())
    return false;
  for (std::size_t i = 0; i < a.fields.size(); ++i) {
    const auto& f = a.fields[i];
    const auto& g = b.fields[i];
    if (!f.type.same_type(g.type) || !(f.label.label == g.label.label) || f.name != g.name)
      return false;
  }
  for (std::size_t i = 0; i < a.methods.size(); ++i)
    if (!same(a.methods[i], b.methods[i])) return false;
  return true;
}

}  // namespace detail

/// Structural equality modulo spans.
inline bool ast_equal(const ast::Program& a, const ast::Program& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i) {
    const auto& x = a.decls[i];
    const auto& y = b.decls[i];
    if (x.index() != y.index()) return false;
    if (auto p = std::get_if<ast::PrincipalDecl>(&x)) {
      if (p->names != std::get<ast::PrincipalDecl>(y).names) return false;
    } else if (auto f = std::get_if<ast::ActsForDecl>(&x)) {
      const auto& g = std::get<ast::ActsForDecl>(y);
      if (!(f->superior == g.superior) || !(f->inferior == g.inferior)) return false;
    } else if (!detail::same(std::get<ast::ClassDecl>(x), std::get<ast::ClassDecl>(y))) {
      return false;
    }
  }
  return true;
}

inline bool ast_equal(const ast::Expr& a, const ast::Expr& b) { return detail::same(a, b); }

}  // namespace minijif
