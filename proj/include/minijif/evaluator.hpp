#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "minijif/ast.hpp"

namespace minijif {

class FuelExhausted : public std::runtime_error {
 public:
  FuelExhausted() : std::runtime_error("evaluation ran out of fuel") {}
};

class EvalTypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Value = std::variant<std::int64_t, bool, std::string>;
using Environment = std::map<std::string, Value>;

struct EvalOptions {
  std::string method;  // empty: the first method of the first class
  std::uint64_t fuel = 100000;  // statements and loop iterations
};

namespace detail {

/// Reference interpreter for class-free method bodies. Arithmetic wraps on
/// overflow; division and remainder by zero yield 0; `substring` clamps.
class Evaluator {
 public:
  explicit Evaluator(std::uint64_t fuel) : fuel_(fuel) {}

  /// Runs `m` with `inputs` bound to its parameters. Returns the final values
  /// of the parameters and top-level locals, plus `return` when a value was
  /// returned.
  Environment run(const ast::MethodDecl& m, const Environment& inputs) {
    scopes_.emplace_back();
    for (const auto& p : m.params) {
      auto it = inputs.find(p.name);
      if (it == inputs.end()) throw EvalTypeError("missing input '" + p.name + "'");
      scopes_.back()[p.name] = it->second;
    }
    auto frame_index = scopes_.size();
    bool returned = false;
    try {
      run_stmts(m.body);
    } catch (const ReturnSignal& r) {
      returned = true;
      returned_ = r.value;
    }
    Environment out;
    for (std::size_t i = 0; i < frame_index; ++i)
      for (const auto& [k, v] : scopes_[i]) out[k] = v;
    // Top-level locals are recorded as the body scope exits.
    for (const auto& [k, v] : body_scope_) out[k] = v;
    if (returned && returned_) out["return"] = *returned_;
    return out;
  }

 private:
  struct ReturnSignal {
    std::optional<Value> value;
  };

  void burn() {
    if (fuel_ == 0) throw FuelExhausted();
    --fuel_;
  }

  Value* lookup(const std::string& name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  void run_stmts(const ast::Block& b) {
    scopes_.emplace_back();
    bool top = scopes_.size() == 2;
    try {
      for (const auto& s : b.stmts) stmt(s);
    } catch (...) {
      if (top) body_scope_ = scopes_.back();
      scopes_.pop_back();
      throw;
    }
    if (top) body_scope_ = scopes_.back();
    scopes_.pop_back();
  }

  void stmt(const ast::Stmt& s) {
    burn();
    if (auto d = s.as<ast::VarDecl>()) {
      Value v = d->init ? eval(*d->init) : default_value(d->type);
      scopes_.back()[d->name] = std::move(v);
    } else if (auto a = s.as<ast::Assign>()) {
      auto v = a->target->as<ast::Var>();
      if (!v) throw EvalTypeError("field assignment is not supported by the evaluator");
      Value* slot = lookup(v->name);
      if (!slot) throw EvalTypeError("unknown variable '" + v->name + "'");
      *slot = eval(*a->value);
    } else if (auto i = s.as<ast::If>()) {
      if (as_bool(eval(*i->cond))) run_stmts(i->then_block);
      else if (i->else_block) run_stmts(*i->else_block);
    } else if (auto w = s.as<ast::While>()) {
      while (as_bool(eval(*w->cond))) {
        burn();
        run_stmts(w->body);
      }
    } else if (auto r = s.as<ast::Return>()) {
      ReturnSignal sig;
      if (r->value) sig.value = eval(*r->value);
      throw sig;
    } else if (auto e = s.as<ast::ExprStmt>()) {
      eval(*e->expr);
    }
  }

  static Value default_value(const ast::TypeRef& t) {
    switch (t.kind) {
      case ast::TypeRef::Kind::Int: return std::int64_t{0};
      case ast::TypeRef::Kind::Bool: return false;
      case ast::TypeRef::Kind::String: return std::string();
      default: throw EvalTypeError("type '" + t.to_string() + "' is not supported by the evaluator");
    }
  }

  static std::int64_t as_int(const Value& v) {
    if (auto i = std::get_if<std::int64_t>(&v)) return *i;
    throw EvalTypeError("expected int");
  }
  static bool as_bool(const Value& v) {
    if (auto b = std::get_if<bool>(&v)) return *b;
    throw EvalTypeError("expected bool");
  }
  static const std::string& as_str(const Value& v) {
    if (auto s = std::get_if<std::string>(&v)) return *s;
    throw EvalTypeError("expected String");
  }

  static std::int64_t wrap(std::uint64_t u) { return static_cast<std::int64_t>(u); }

  Value eval(const ast::Expr& e) {
    if (auto n = e.as<ast::IntLit>()) return n->value;
    if (auto n = e.as<ast::StrLit>()) return n->value;
    if (auto n = e.as<ast::BoolLit>()) return n->value;
    if (auto n = e.as<ast::Var>()) {
      Value* slot = lookup(n->name);
      if (!slot) throw EvalTypeError("unknown variable '" + n->name + "'");
      return *slot;
    }
    if (auto d = e.as<ast::Declassify>()) return eval(*d->value);
    if (auto b = e.as<ast::Builtin>()) return builtin(*b);
    if (auto u = e.as<ast::Unary>()) {
      Value v = eval(*u->operand);
      if (u->op == ast::UnaryOp::Not) return !as_bool(v);
      return wrap(0 - static_cast<std::uint64_t>(as_int(v)));
    }
    if (auto b = e.as<ast::BinOp>()) return binop(*b);
    throw EvalTypeError("objects are not supported by the evaluator");
  }

  Value builtin(const ast::Builtin& b) {
    std::vector<Value> args;
    for (const auto& a : b.args) args.push_back(eval(*a));
    if (b.name == "length" && args.size() == 1)
      return static_cast<std::int64_t>(as_str(args[0]).size());
    if (b.name == "concat" && args.size() == 2) return as_str(args[0]) + as_str(args[1]);
    if (b.name == "substring" && args.size() == 3) {
      const auto& s = as_str(args[0]);
      auto n = static_cast<std::int64_t>(s.size());
      auto begin = std::clamp(as_int(args[1]), std::int64_t{0}, n);
      auto end = std::clamp(as_int(args[2]), begin, n);
      return s.substr(static_cast<std::size_t>(begin), static_cast<std::size_t>(end - begin));
    }
    throw EvalTypeError("bad call to builtin '" + b.name + "'");
  }

  Value binop(const ast::BinOp& b) {
    using B = ast::BinaryOp;
    if (b.op == B::And) return as_bool(eval(*b.lhs)) && as_bool(eval(*b.rhs));
    if (b.op == B::Or) return as_bool(eval(*b.lhs)) || as_bool(eval(*b.rhs));
    Value l = eval(*b.lhs);
    Value r = eval(*b.rhs);
    switch (b.op) {
      case B::Eq:
        if (l.index() != r.index()) throw EvalTypeError("comparison of mismatched types");
        return l == r;
      case B::Ne:
        if (l.index() != r.index()) throw EvalTypeError("comparison of mismatched types");
        return l != r;
      default: break;
    }
    auto x = as_int(l);
    auto y = as_int(r);
    auto ux = static_cast<std::uint64_t>(x);
    auto uy = static_cast<std::uint64_t>(y);
    switch (b.op) {
      case B::Lt: return x < y;
      case B::Le: return x <= y;
      case B::Gt: return x > y;
      case B::Ge: return x >= y;
      case B::Add: return wrap(ux + uy);
      case B::Sub: return wrap(ux - uy);
      case B::Mul: return wrap(ux * uy);
      case B::Div:
        if (y == 0 || (y == -1 && x == INT64_MIN)) return y == 0 ? std::int64_t{0} : x;
        return x / y;
      case B::Mod:
        if (y == 0 || y == -1) return std::int64_t{0};
        return x % y;
      default: break;
    }
    throw EvalTypeError("unsupported operator");
  }

  std::uint64_t fuel_;
  std::vector<std::map<std::string, Value>> scopes_;
  std::map<std::string, Value> body_scope_;
  std::optional<Value> returned_;
};

}  // namespace detail

/// Evaluates a class-free method (ints, bools, strings, if/while) on the given
/// inputs. Throws FuelExhausted or EvalTypeError.
inline Environment evaluate_program(const ast::Program& prog, const Environment& inputs,
                                    const EvalOptions& options = {}) {
  for (const auto& d : prog.decls) {
    const auto* c = std::get_if<ast::ClassDecl>(&d);
    if (!c) continue;
    for (const auto& m : c->methods)
      if (options.method.empty() || m.name == options.method)
        return detail::Evaluator(options.fuel).run(m, inputs);
  }
  throw EvalTypeError(options.method.empty() ? "program has no method"
                                             : "no method named '" + options.method + "'");
}

}  // namespace minijif
