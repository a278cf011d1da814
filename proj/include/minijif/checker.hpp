#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "minijif/ast.hpp"
#include "minijif/diagnostics.hpp"
#include "minijif/labels.hpp"
#include "minijif/principals.hpp"

namespace minijif {

/// Who vouches for authority that the program itself cannot justify.
struct TrustConfig {
  /// Entry classes (no principal parameters, no class-level authority clause)
  /// may claim the authority of every declared principal.
  bool grant_main_authority = true;
  /// Delegations added on top of the program's own `actsfor` declarations.
  std::vector<std::pair<Principal, Principal>> extra_delegations;
};

/// The program-counter label in effect at one statement.
struct PcSample {
  Span span;
  int depth;
  Label pc;
};

struct CheckOptions {
  std::vector<PcSample>* pc_trace = nullptr;
};

namespace detail {

using Substitution = std::map<std::string, Principal>;

inline Principal substitute(const Principal& p, const Substitution& sigma) {
  if (!p.is_named()) return p;
  auto it = sigma.find(p.name());
  return it == sigma.end() ? p : it->second;
}

inline ast::TypeRef substitute(ast::TypeRef t, const Substitution& sigma) {
  for (auto& a : t.principal_args) a = substitute(a, sigma);
  return t;
}

/// Label variables are rejected where declared; uses elsewhere see the public
/// label so checking can continue.
inline Label usable(const Label& l) { return l.has_variables() ? Label() : l; }

inline std::string labels_text(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}

class ProgramChecker {
 public:
  ProgramChecker(const ast::Program& prog, const TrustConfig& trust, CheckOptions options)
      : prog_(prog), trust_(trust), options_(options) {}

  std::vector<Diagnostic> run() {
    build_hierarchy();
    for (const auto& d : prog_.decls) {
      if (auto c = std::get_if<ast::ClassDecl>(&d)) {
        if (!classes_.emplace(c->name, c).second)
          report(DiagCode::Type, c->span, "class '" + c->name + "' is defined more than once");
      }
    }
    for (const auto& d : prog_.decls)
      if (auto c = std::get_if<ast::ClassDecl>(&d)) check_class(*c);
    sort_diagnostics(diags_);
    return std::move(diags_);
  }

 private:
  struct Local {
    ast::TypeRef type;
    Label label;
  };

  struct ExprInfo {
    std::optional<ast::TypeRef> type;  // nullopt after an error, to avoid cascades
    Label label;
  };

  struct Context {
    const ast::ClassDecl* cls;
    const ast::MethodDecl* method;
    const PrincipalHierarchy* h;
    std::vector<Principal> authority;
    Label pc;
    std::vector<std::map<std::string, Local>> scopes;
    int depth = 0;
  };

  void report(DiagCode code, const Span& span, std::string message,
              std::optional<Label> from = std::nullopt, std::optional<Label> to = std::nullopt) {
    Diagnostic d{code, span, std::nullopt, std::nullopt, std::move(message)};
    if (from) d.from = from->to_string();
    if (to) d.to = to->to_string();
    diags_.push_back(std::move(d));
  }

  void build_hierarchy() {
    for (const auto& d : prog_.decls)
      if (auto p = std::get_if<ast::PrincipalDecl>(&d))
        for (const auto& n : p->names) base_ = base_.with_principal(n);
    for (const auto& d : prog_.decls) {
      auto a = std::get_if<ast::ActsForDecl>(&d);
      if (!a) continue;
      bool ok = true;
      for (const auto* p : {&a->superior, &a->inferior}) {
        if (!base_.is_declared(*p)) {
          report(DiagCode::Undef, a->span, "undeclared principal '" + p->to_string() + "'");
          ok = false;
        }
      }
      if (ok) base_ = base_.with_delegation(a->superior, a->inferior);
    }
    for (const auto& [sup, inf] : trust_.extra_delegations) {
      for (const auto* p : {&sup, &inf})
        if (!base_.is_declared(*p))
          throw std::invalid_argument("trusted delegation mentions undeclared principal '" +
                                      p->to_string() + "'");
      base_ = base_.with_delegation(sup, inf);
    }
  }

  // ---- declarations ----

  bool validate_principal(const Principal& p, const PrincipalHierarchy& h, const Span& span) {
    if (h.is_declared(p)) return true;
    report(DiagCode::Undef, span, "undeclared principal '" + p.to_string() + "'");
    return false;
  }

  /// Reports undeclared principals. Label variables are the caller's concern.
  void validate_label(const ast::LabelRef& l, const PrincipalHierarchy& h) {
    for (const auto& p : l.label.principals()) validate_principal(p, h, l.span);
  }

  bool validate_type(const ast::TypeRef& t, const PrincipalHierarchy& h, bool allow_void) {
    if (t.kind == ast::TypeRef::Kind::Void && !allow_void) {
      report(DiagCode::Type, t.span, "'void' is not a value type");
      return false;
    }
    if (t.kind != ast::TypeRef::Kind::Class) return true;
    auto it = classes_.find(t.class_name);
    if (it == classes_.end()) {
      report(DiagCode::Undef, t.span, "unknown class '" + t.class_name + "'");
      return false;
    }
    bool ok = true;
    if (it->second->principal_params.size() != t.principal_args.size()) {
      report(DiagCode::Arity, t.span,
             "class '" + t.class_name + "' takes " +
                 std::to_string(it->second->principal_params.size()) +
                 " principal argument(s), got " + std::to_string(t.principal_args.size()));
      ok = false;
    }
    for (const auto& p : t.principal_args) ok = validate_principal(p, h, t.span) && ok;
    return ok;
  }

  void check_class(const ast::ClassDecl& c) {
    PrincipalHierarchy h = base_;
    for (const auto& p : c.principal_params) h = h.with_principal(p);

    for (const auto& a : c.authority) validate_principal(a, h, c.span);
    std::vector<Principal> grants = c.authority;
    if (c.principal_params.empty() && c.authority.empty() && trust_.grant_main_authority)
      grants.assign(base_.declared().begin(), base_.declared().end());

    std::set<std::string> names;
    for (const auto& f : c.fields) {
      if (!names.insert(f.name).second)
        report(DiagCode::Type, f.span, "field '" + f.name + "' is declared more than once");
      validate_type(f.type, h, false);
      validate_label(f.label, h);
      if (f.label.label.has_variables())
        report(DiagCode::Unsupported, f.label.span,
               "label variables are not supported (" + labels_text(f.label.label.variables()) + ")");
    }
    names.clear();
    for (const auto& m : c.methods) {
      if (!names.insert(m.name).second)
        report(DiagCode::Type, m.name_span, "method '" + m.name + "' is defined more than once");
      check_method(c, m, h, grants);
    }
  }

  static bool signature_has_variables(const ast::MethodDecl& m, const ast::LabelRef** where) {
    auto probe = [&](const std::optional<ast::LabelRef>& l) {
      if (l && l->label.has_variables() && !*where) *where = &*l;
    };
    probe(m.return_label);
    probe(m.begin_label);
    for (const auto& p : m.params) probe(p.label);
    probe(m.end_label);
    return *where != nullptr;
  }

  void check_method(const ast::ClassDecl& c, const ast::MethodDecl& m, const PrincipalHierarchy& h,
                    const std::vector<Principal>& grants) {
    const ast::LabelRef* var_label = nullptr;
    if (signature_has_variables(m, &var_label)) {
      report(DiagCode::Unsupported, var_label->span,
             "method '" + m.name + "' uses label variables (" +
                 labels_text(var_label->label.variables()) + "), which are not supported");
      return;
    }
    for (const auto* l : {&m.return_label, &m.begin_label, &m.end_label})
      if (*l) validate_label(**l, h);
    validate_type(m.return_type, h, true);

    Context ctx;
    ctx.cls = &c;
    ctx.method = &m;
    ctx.h = &h;
    std::vector<std::string> missing;
    for (const auto& a : m.authority) {
      if (!validate_principal(a, h, m.name_span)) continue;
      bool held = false;
      for (const auto& g : grants) held = held || h.acts_for(g, a);
      if (held) ctx.authority.push_back(a);
      else missing.push_back(a.to_string());
    }
    if (!missing.empty())
      report(DiagCode::AuthClaim, m.name_span,
             "method '" + m.name + "' claims authority of " + labels_text(missing) +
                 " not granted to class '" + c.name + "'");

    ctx.pc = m.begin_label ? m.begin_label->label : Label();
    ctx.scopes.emplace_back();
    for (const auto& p : m.params) {
      validate_type(p.type, h, false);
      if (p.label) validate_label(*p.label, h);
      if (ctx.scopes.back().count(p.name))
        report(DiagCode::Type, p.span, "parameter '" + p.name + "' is declared more than once");
      ctx.scopes.back()[p.name] = Local{p.type, p.label ? p.label->label : Label()};
    }
    check_block(ctx, m.body);

    bool ends_in_return = !m.body.stmts.empty() && m.body.stmts.back().as<ast::Return>();
    if (m.end_label && !ends_in_return && !flows_to(ctx.pc, m.end_label->label, h)) {
      Span close{m.body.span.file, m.body.span.end, m.body.span.end};
      close.start.column = std::max(1, close.start.column - 1);
      report(DiagCode::PcEnd, close,
             "program counter at the end of '" + m.name + "' is more restrictive than its end-label",
             ctx.pc, m.end_label->label);
    }
  }

  // ---- statements ----

  void check_block(Context& ctx, const ast::Block& b) {
    ctx.scopes.emplace_back();
    for (const auto& s : b.stmts) check_stmt(ctx, s);
    ctx.scopes.pop_back();
  }

  void flow_into(Context& ctx, const Label& value, const Label& target, const Span& span,
                 const std::string& what) {
    const auto& h = *ctx.h;
    if (!flows_to(value, target, h)) {
      report(DiagCode::Flow, span,
             "label of the value is more restrictive than the label of " + what, value, target);
      return;
    }
    Label with_pc = join(value, ctx.pc);
    if (!flows_to(with_pc, target, h))
      report(DiagCode::FlowImplicit, span,
             "program counter is more restrictive than the label of " + what +
                 " (implicit flow)",
             with_pc, target);
  }

  void expect_type(const ExprInfo& info, const ast::TypeRef& want, const Span& span,
                   const std::string& what) {
    if (!info.type || info.type->same_type(want)) return;
    report(DiagCode::Type, span,
           what + " has type '" + info.type->to_string() + "', expected '" + want.to_string() + "'");
  }

  void check_stmt(Context& ctx, const ast::Stmt& s) {
    if (options_.pc_trace) options_.pc_trace->push_back(PcSample{s.span, ctx.depth, ctx.pc});

    if (auto d = s.as<ast::VarDecl>()) {
      bool type_ok = validate_type(d->type, *ctx.h, false);
      std::optional<ExprInfo> init;
      if (d->init) init = check_expr(ctx, *d->init);
      if (init && type_ok) expect_type(*init, d->type, d->init->span, "initializer of '" + d->name + "'");
      Label label;
      if (d->label) {
        validate_label(*d->label, *ctx.h);
        if (d->label->label.has_variables()) {
          report(DiagCode::Unsupported, d->label->span,
                 "label variables are not supported (" + labels_text(d->label->label.variables()) + ")");
          label = ctx.pc;
        } else {
          label = d->label->label;
          if (init) flow_into(ctx, init->label, label, s.span, "local variable '" + d->name + "'");
        }
      } else {
        label = init ? join(init->label, ctx.pc) : ctx.pc;
      }
      if (ctx.scopes.back().count(d->name))
        report(DiagCode::Type, s.span, "variable '" + d->name + "' is already declared in this scope");
      ctx.scopes.back()[d->name] = Local{d->type, label};
    } else if (auto a = s.as<ast::Assign>()) {
      check_assign(ctx, *a, s.span);
    } else if (auto i = s.as<ast::If>()) {
      auto cond = check_expr(ctx, *i->cond);
      expect_type(cond, ast::TypeRef::primitive(ast::TypeRef::Kind::Bool), i->cond->span, "condition");
      Label saved = ctx.pc;
      ctx.pc = join(ctx.pc, cond.label);
      ++ctx.depth;
      check_block(ctx, i->then_block);
      if (i->else_block) check_block(ctx, *i->else_block);
      --ctx.depth;
      ctx.pc = saved;
    } else if (auto w = s.as<ast::While>()) {
      auto cond = check_expr(ctx, *w->cond);
      expect_type(cond, ast::TypeRef::primitive(ast::TypeRef::Kind::Bool), w->cond->span, "condition");
      Label saved = ctx.pc;
      ctx.pc = join(ctx.pc, cond.label);
      ++ctx.depth;
      check_block(ctx, w->body);
      --ctx.depth;
      ctx.pc = saved;
    } else if (auto r = s.as<ast::Return>()) {
      check_return(ctx, *r, s.span);
    } else if (auto e = s.as<ast::ExprStmt>()) {
      check_expr(ctx, *e->expr);
    }
  }

  const Local* lookup_local(const Context& ctx, const std::string& name) const {
    for (auto it = ctx.scopes.rbegin(); it != ctx.scopes.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  void check_assign(Context& ctx, const ast::Assign& a, const Span& span) {
    auto value = check_expr(ctx, *a.value);
    if (auto v = a.target->as<ast::Var>()) {
      if (v->name == "this") {
        report(DiagCode::Type, a.target->span, "cannot assign to 'this'");
        return;
      }
      if (const Local* local = lookup_local(ctx, v->name)) {
        expect_type(value, local->type, a.value->span, "assigned value");
        flow_into(ctx, value.label, local->label, span, "variable '" + v->name + "'");
        return;
      }
      if (const auto* f = ctx.cls->find_field(v->name)) {
        expect_type(value, f->type, a.value->span, "assigned value");
        flow_into(ctx, value.label, usable(f->label.label), span, "field '" + v->name + "'");
        return;
      }
      report(DiagCode::Undef, a.target->span, "unknown variable '" + v->name + "'");
      return;
    }
    const auto& fa = *a.target->as<ast::FieldAccess>();
    auto recv = check_expr(ctx, *fa.receiver);
    auto target = resolve_field(ctx, recv, fa.field, a.target->span);
    if (!target) return;
    expect_type(value, target->first, a.value->span, "assigned value");
    flow_into(ctx, join(value.label, recv.label), target->second, span, "field '" + fa.field + "'");
  }

  void check_return(Context& ctx, const ast::Return& r, const Span& span) {
    const auto& m = *ctx.method;
    const auto& h = *ctx.h;
    bool is_void = m.return_type.kind == ast::TypeRef::Kind::Void;
    if (r.value) {
      auto info = check_expr(ctx, *r.value);
      if (is_void) {
        report(DiagCode::Type, r.value->span, "void method '" + m.name + "' cannot return a value");
      } else {
        expect_type(info, m.return_type, r.value->span, "returned value");
        Label target = m.return_label ? m.return_label->label : Label();
        if (!flows_to(info.label, target, h))
          report(DiagCode::Flow, span,
                 "label of the returned value is more restrictive than the return label of '" +
                     m.name + "'",
                 info.label, target);
        else if (Label with_pc = join(info.label, ctx.pc); !flows_to(with_pc, target, h))
          report(DiagCode::Flow, span,
                 "program counter at this return is more restrictive than the return label of '" +
                     m.name + "'",
                 with_pc, target);
      }
    } else if (!is_void) {
      report(DiagCode::Type, span, "method '" + m.name + "' must return a value");
    }
    if (m.end_label && !flows_to(ctx.pc, m.end_label->label, h))
      report(DiagCode::PcEnd, span,
             "program counter at this return is more restrictive than the end-label of '" +
                 m.name + "'",
             ctx.pc, m.end_label->label);
  }

  // ---- expressions ----

  static ast::TypeRef prim(ast::TypeRef::Kind k) { return ast::TypeRef::primitive(k); }

  static ast::TypeRef this_type(const ast::ClassDecl& c) {
    ast::TypeRef t;
    t.kind = ast::TypeRef::Kind::Class;
    t.class_name = c.name;
    for (const auto& p : c.principal_params) t.principal_args.push_back(Principal::named(p));
    t.span = c.span;
    return t;
  }

  /// Resolves the class behind a receiver type and its parameter substitution.
  const ast::ClassDecl* receiver_class(const ExprInfo& recv, const Span& span, Substitution& sigma) {
    if (!recv.type) return nullptr;
    if (recv.type->kind != ast::TypeRef::Kind::Class) {
      report(DiagCode::Type, span, "type '" + recv.type->to_string() + "' has no members");
      return nullptr;
    }
    auto it = classes_.find(recv.type->class_name);
    if (it == classes_.end()) return nullptr;
    const auto& params = it->second->principal_params;
    for (std::size_t i = 0; i < params.size() && i < recv.type->principal_args.size(); ++i)
      sigma.emplace(params[i], recv.type->principal_args[i]);
    return it->second;
  }

  /// Field type and label after substitution.
  std::optional<std::pair<ast::TypeRef, Label>> resolve_field(Context&, const ExprInfo& recv,
                                                              const std::string& name,
                                                              const Span& span) {
    Substitution sigma;
    const auto* cls = receiver_class(recv, span, sigma);
    if (!cls) return std::nullopt;
    const auto* f = cls->find_field(name);
    if (!f) {
      report(DiagCode::Undef, span, "class '" + cls->name + "' has no field '" + name + "'");
      return std::nullopt;
    }
    return std::make_pair(substitute(f->type, sigma), usable(f->label.label).substitute(sigma));
  }

  ExprInfo check_expr(Context& ctx, const ast::Expr& e) {
    using K = ast::TypeRef::Kind;
    if (e.as<ast::IntLit>()) return {prim(K::Int), Label()};
    if (e.as<ast::StrLit>()) return {prim(K::String), Label()};
    if (e.as<ast::BoolLit>()) return {prim(K::Bool), Label()};
    if (auto v = e.as<ast::Var>()) {
      if (v->name == "this") return {this_type(*ctx.cls), Label()};
      if (const Local* local = lookup_local(ctx, v->name)) return {local->type, local->label};
      if (const auto* f = ctx.cls->find_field(v->name)) return {f->type, usable(f->label.label)};
      report(DiagCode::Undef, e.span, "unknown variable '" + v->name + "'");
      return {std::nullopt, Label()};
    }
    if (auto fa = e.as<ast::FieldAccess>()) {
      auto recv = check_expr(ctx, *fa->receiver);
      auto field = resolve_field(ctx, recv, fa->field, e.span);
      if (!field) return {std::nullopt, recv.label};
      return {field->first, join(recv.label, field->second)};
    }
    if (auto c = e.as<ast::Call>()) return check_call(ctx, *c, e.span);
    if (auto n = e.as<ast::New>()) return check_new(ctx, *n, e.span);
    if (auto d = e.as<ast::Declassify>()) return check_declassify(ctx, *d, e.span);
    if (auto b = e.as<ast::Builtin>()) return check_builtin(ctx, *b, e.span);
    if (auto u = e.as<ast::Unary>()) {
      auto operand = check_expr(ctx, *u->operand);
      auto want = prim(u->op == ast::UnaryOp::Not ? K::Bool : K::Int);
      expect_type(operand, want, u->operand->span, "operand");
      return {want, operand.label};
    }
    const auto& b = *e.as<ast::BinOp>();
    auto l = check_expr(ctx, *b.lhs);
    auto r = check_expr(ctx, *b.rhs);
    Label label = join(l.label, r.label);
    using B = ast::BinaryOp;
    switch (b.op) {
      case B::And:
      case B::Or:
        expect_type(l, prim(K::Bool), b.lhs->span, "operand");
        expect_type(r, prim(K::Bool), b.rhs->span, "operand");
        return {prim(K::Bool), label};
      case B::Eq:
      case B::Ne:
        if (l.type && r.type) {
          if (l.type->kind == K::Class || l.type->kind == K::Void)
            report(DiagCode::Type, b.lhs->span,
                   "cannot compare values of type '" + l.type->to_string() + "'");
          else
            expect_type(r, *l.type, b.rhs->span, "operand");
        }
        return {prim(K::Bool), label};
      case B::Lt:
      case B::Le:
      case B::Gt:
      case B::Ge:
        expect_type(l, prim(K::Int), b.lhs->span, "operand");
        expect_type(r, prim(K::Int), b.rhs->span, "operand");
        return {prim(K::Bool), label};
      default:
        expect_type(l, prim(K::Int), b.lhs->span, "operand");
        expect_type(r, prim(K::Int), b.rhs->span, "operand");
        return {prim(K::Int), label};
    }
  }

  ExprInfo check_call(Context& ctx, const ast::Call& c, const Span& span) {
    const auto& h = *ctx.h;
    ExprInfo recv{this_type(*ctx.cls), Label()};
    if (c.receiver) recv = check_expr(ctx, *c.receiver);
    std::vector<ExprInfo> args;
    for (const auto& a : c.args) args.push_back(check_expr(ctx, *a));

    Substitution sigma;
    const auto* cls = receiver_class(recv, span, sigma);
    if (!cls) return {std::nullopt, recv.label};
    const auto* callee = cls->find_method(c.method);
    if (!callee) {
      report(DiagCode::UnknownMethod, span,
             "class '" + cls->name + "' has no method '" + c.method + "'");
      return {std::nullopt, recv.label};
    }
    auto result_type = substitute(callee->return_type, sigma);
    const ast::LabelRef* var_label = nullptr;
    if (signature_has_variables(*callee, &var_label)) return {result_type, recv.label};

    if (args.size() != callee->params.size()) {
      report(DiagCode::Arity, span,
             "method '" + c.method + "' takes " + std::to_string(callee->params.size()) +
                 " argument(s), got " + std::to_string(args.size()));
    }
    Label begin = callee->begin_label ? callee->begin_label->label.substitute(sigma) : Label();
    if (!flows_to(ctx.pc, begin, h))
      report(DiagCode::PcCall, span,
             "program counter at the call is more restrictive than the begin-label of '" +
                 c.method + "'",
             ctx.pc, begin);
    for (std::size_t i = 0; i < args.size() && i < callee->params.size(); ++i) {
      const auto& p = callee->params[i];
      expect_type(args[i], substitute(p.type, sigma), c.args[i]->span,
                  "argument '" + p.name + "'");
      Label target = p.label ? p.label->label.substitute(sigma) : Label();
      Label value = join(args[i].label, ctx.pc);
      if (!flows_to(value, target, h))
        report(DiagCode::Flow, c.args[i]->span,
               "label of argument '" + p.name + "' is more restrictive than the parameter label",
               value, target);
    }
    Label ret = callee->return_label ? callee->return_label->label.substitute(sigma) : Label();
    return {result_type, join(ret, recv.label)};
  }

  ExprInfo check_new(Context& ctx, const ast::New& n, const Span& span) {
    std::vector<ExprInfo> args;
    for (const auto& a : n.args) args.push_back(check_expr(ctx, *a));
    ast::TypeRef t;
    t.kind = ast::TypeRef::Kind::Class;
    t.class_name = n.class_name;
    t.principal_args = n.principal_args;
    t.span = span;
    if (!validate_type(t, *ctx.h, false)) return {std::nullopt, Label()};

    const auto* cls = classes_.at(n.class_name);
    Substitution sigma;
    for (std::size_t i = 0; i < cls->principal_params.size(); ++i)
      sigma.emplace(cls->principal_params[i], n.principal_args[i]);
    if (args.size() != cls->fields.size())
      report(DiagCode::Arity, span,
             "constructor of '" + cls->name + "' takes " + std::to_string(cls->fields.size()) +
                 " argument(s), got " + std::to_string(args.size()));
    for (std::size_t i = 0; i < args.size() && i < cls->fields.size(); ++i) {
      const auto& f = cls->fields[i];
      expect_type(args[i], substitute(f.type, sigma), n.args[i]->span, "field '" + f.name + "'");
      flow_into(ctx, args[i].label, usable(f.label.label).substitute(sigma), n.args[i]->span,
                "field '" + f.name + "'");
    }
    return {t, Label()};
  }

  ExprInfo check_declassify(Context& ctx, const ast::Declassify& d, const Span& span) {
    const auto& h = *ctx.h;
    auto value = check_expr(ctx, *d.value);
    validate_label(d.from, h);
    validate_label(d.to, h);
    for (const auto* l : {&d.from, &d.to}) {
      if (l->label.has_variables()) {
        report(DiagCode::Unsupported, l->span,
               "label variables are not supported (" + labels_text(l->label.variables()) + ")");
        return {value.type, value.label};
      }
    }
    const Label& from = d.from.label;
    const Label& to = d.to.label;
    if (!flows_to(value.label, from, h))
      report(DiagCode::DeclFrom, span,
             "label of the declassified value is not covered by the from-label", value.label, from);

    if (!flows_to(from, to, h)) {
      // Every confidentiality policy the destination no longer enforces must
      // be owned by a principal the method acts for.
      const auto readers_to = interpret_label(to, h).readers;
      std::vector<std::string> missing;
      from.for_each_policy([&](const Policy& p) {
        if (p.kind != PolicyKind::Confidentiality) return;
        auto enforced = interpret_conf(p, h);
        if (std::includes(enforced.begin(), enforced.end(), readers_to.begin(), readers_to.end()))
          return;
        bool held = false;
        for (const auto& a : ctx.authority) held = held || h.acts_for(a, p.owner);
        auto name = p.owner.to_string();
        if (!held && std::find(missing.begin(), missing.end(), name) == missing.end())
          missing.push_back(name);
      });
      if (!missing.empty())
        report(DiagCode::DeclAuth, span,
               "declassification requires the authority of " + labels_text(missing), from, to);
      if (!integrity_flows_to(from, to, h))
        report(DiagCode::DeclInteg, span,
               "declassification cannot strengthen integrity; use of the to-label would admit "
               "fewer writers",
               from, to);
    }
    return {value.type, to};
  }

  ExprInfo check_builtin(Context& ctx, const ast::Builtin& b, const Span& span) {
    using K = ast::TypeRef::Kind;
    std::vector<ExprInfo> args;
    Label label;
    for (const auto& a : b.args) {
      args.push_back(check_expr(ctx, *a));
      label = join(label, args.back().label);
    }
    std::vector<K> want;
    K result = K::String;
    if (b.name == "substring") want = {K::String, K::Int, K::Int};
    else if (b.name == "concat") want = {K::String, K::String};
    else {
      want = {K::String};
      result = K::Int;
    }
    if (args.size() != want.size())
      report(DiagCode::Arity, span,
             "'" + b.name + "' takes " + std::to_string(want.size()) + " argument(s), got " +
                 std::to_string(args.size()));
    for (std::size_t i = 0; i < args.size() && i < want.size(); ++i)
      expect_type(args[i], prim(want[i]), b.args[i]->span, "argument " + std::to_string(i + 1));
    return {prim(result), label};
  }

  const ast::Program& prog_;
  const TrustConfig& trust_;
  CheckOptions options_;
  PrincipalHierarchy base_;
  std::map<std::string, const ast::ClassDecl*> classes_;
  std::vector<Diagnostic> diags_;
};

}  // namespace detail

/// Checks every class and method. The result is empty iff the program is
/// accepted, and is sorted by source position.
///
/// Throws std::invalid_argument when `trust` names principals the program
/// does not declare.
inline std::vector<Diagnostic> check_program(const ast::Program& prog, const TrustConfig& trust = {},
                                             CheckOptions options = {}) {
  return detail::ProgramChecker(prog, trust, options).run();
}

}  // namespace minijif
