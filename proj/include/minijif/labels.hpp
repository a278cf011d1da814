#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "minijif/principals.hpp"

namespace minijif {

enum class PolicyKind { Confidentiality, Integrity };

/// `owner -> readers` or `owner <- writers`.
struct Policy {
  PolicyKind kind = PolicyKind::Confidentiality;
  Principal owner = Principal::bottom();
  std::vector<Principal> principals;  // readers or writers, nonempty

  static Policy conf(Principal owner, std::vector<Principal> readers) {
    return make(PolicyKind::Confidentiality, std::move(owner), std::move(readers));
  }
  static Policy integ(Principal owner, std::vector<Principal> writers) {
    return make(PolicyKind::Integrity, std::move(owner), std::move(writers));
  }

  std::string to_string() const {
    std::string out = owner.to_string();
    out += kind == PolicyKind::Confidentiality ? "->" : "<-";
    for (std::size_t i = 0; i < principals.size(); ++i) {
      if (i) out += ", ";
      out += principals[i].to_string();
    }
    return out;
  }

  friend bool operator==(const Policy&, const Policy&) = default;

 private:
  static Policy make(PolicyKind kind, Principal owner, std::vector<Principal> ps) {
    if (ps.empty()) throw std::invalid_argument("policy needs at least one principal");
    Policy p;
    p.kind = kind;
    p.owner = std::move(owner);
    p.principals = std::move(ps);
    return p;
  }
};

class UnsupportedLabel : public std::runtime_error {
 public:
  explicit UnsupportedLabel(const std::string& var)
      : std::runtime_error("label variable '" + var + "' is not supported") {}
};

class Label;
namespace detail {
struct LabelNode;
}

/// A syntactic label expression. The empty label is the public, trusted
/// label. Nodes are shared and immutable, so copies are cheap.
class Label {
 public:
  enum class Op { Empty, Leaf, Join, Meet, Var };

  Label() = default;

  static Label policy(Policy p);
  static Label conf(Principal owner, std::vector<Principal> readers) {
    return policy(Policy::conf(std::move(owner), std::move(readers)));
  }
  static Label integ(Principal owner, std::vector<Principal> writers) {
    return policy(Policy::integ(std::move(owner), std::move(writers)));
  }
  /// A free label variable such as the `L` in `{L}`.
  static Label variable(std::string name);

  friend Label join(const Label& a, const Label& b);
  friend Label meet(const Label& a, const Label& b);

  Op op() const;
  bool is_empty() const { return op() == Op::Empty; }
  const Policy& leaf() const;
  const std::string& var_name() const;
  const Label& lhs() const;
  const Label& rhs() const;

  template <typename Fn>
  void for_each_policy(Fn&& fn) const {
    switch (op()) {
      case Op::Leaf: fn(leaf()); break;
      case Op::Join:
      case Op::Meet:
        lhs().for_each_policy(fn);
        rhs().for_each_policy(fn);
        break;
      default: break;
    }
  }

  bool has_variables() const {
    switch (op()) {
      case Op::Var: return true;
      case Op::Join:
      case Op::Meet: return lhs().has_variables() || rhs().has_variables();
      default: return false;
    }
  }

  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    collect_vars(out);
    return out;
  }

  /// Every principal mentioned as an owner, reader or writer.
  PrincipalSet principals() const {
    PrincipalSet out;
    for_each_policy([&](const Policy& p) {
      out.insert(p.owner);
      out.insert(p.principals.begin(), p.principals.end());
    });
    return out;
  }

  /// Renames named principals; used to instantiate class principal parameters.
  Label substitute(const std::map<std::string, Principal>& sigma) const {
    if (sigma.empty()) return *this;
    auto rename = [&](const Principal& p) {
      if (!p.is_named()) return p;
      auto it = sigma.find(p.name());
      return it == sigma.end() ? p : it->second;
    };
    switch (op()) {
      case Op::Empty:
      case Op::Var: return *this;
      case Op::Leaf: {
        Policy p = leaf();
        p.owner = rename(p.owner);
        for (auto& q : p.principals) q = rename(q);
        return policy(std::move(p));
      }
      case Op::Join: return join(lhs().substitute(sigma), rhs().substitute(sigma));
      case Op::Meet: return meet(lhs().substitute(sigma), rhs().substitute(sigma));
    }
    return *this;
  }

  std::string to_string() const {
    if (is_empty()) return "{}";
    return "{" + components_text() + "}";
  }

  friend bool operator==(const Label& a, const Label& b) {
    if (a.node_ == b.node_) return true;
    if (a.op() != b.op()) return false;
    switch (a.op()) {
      case Op::Empty: return true;
      case Op::Leaf: return a.leaf() == b.leaf();
      case Op::Var: return a.var_name() == b.var_name();
      case Op::Join:
      case Op::Meet: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
    return false;
  }

 private:
  explicit Label(std::shared_ptr<const detail::LabelNode> n) : node_(std::move(n)) {}

  static Label binary(Op op, const Label& a, const Label& b);

  void collect_vars(std::vector<std::string>& out) const {
    if (op() == Op::Var) {
      if (std::find(out.begin(), out.end(), var_name()) == out.end()) out.push_back(var_name());
    } else if (op() == Op::Join || op() == Op::Meet) {
      lhs().collect_vars(out);
      rhs().collect_vars(out);
    }
  }

  // `a; b; c` at the top, `x meet y` inside a component, parentheses where a
  // join sits under a meet.
  std::string components_text() const {
    if (op() == Op::Join) return lhs().components_text() + "; " + rhs().components_text();
    return meet_text();
  }
  std::string meet_text() const {
    switch (op()) {
      case Op::Meet: return lhs().meet_text() + " meet " + rhs().meet_text();
      case Op::Leaf: return leaf().to_string();
      case Op::Var: return var_name();
      case Op::Join: return "(" + components_text() + ")";
      case Op::Empty: return "()";
    }
    return {};
  }

  std::shared_ptr<const detail::LabelNode> node_;
};

namespace detail {
struct LabelNode {
  Label::Op op = Label::Op::Empty;
  Policy policy;
  std::string var;
  Label lhs, rhs;
};
}  // namespace detail

inline Label::Op Label::op() const { return node_ ? node_->op : Op::Empty; }
inline const Policy& Label::leaf() const { return node_->policy; }
inline const std::string& Label::var_name() const { return node_->var; }
inline const Label& Label::lhs() const { return node_->lhs; }
inline const Label& Label::rhs() const { return node_->rhs; }

inline Label Label::policy(Policy p) {
  auto n = std::make_shared<detail::LabelNode>();
  n->op = Op::Leaf;
  n->policy = std::move(p);
  return Label(std::move(n));
}

inline Label Label::variable(std::string name) {
  auto n = std::make_shared<detail::LabelNode>();
  n->op = Op::Var;
  n->var = std::move(name);
  return Label(std::move(n));
}

inline Label Label::binary(Op op, const Label& a, const Label& b) {
  auto n = std::make_shared<detail::LabelNode>();
  n->op = op;
  n->lhs = a;
  n->rhs = b;
  return Label(std::move(n));
}

/// Least upper bound. Empty operands and exact duplicates collapse.
inline Label join(const Label& a, const Label& b) {
  if (a.is_empty()) return b;
  if (b.is_empty() || a == b) return a;
  return Label::binary(Label::Op::Join, a, b);
}

/// Greatest lower bound. The empty label is the bottom of the order, so it
/// absorbs.
inline Label meet(const Label& a, const Label& b) {
  if (a.is_empty() || b.is_empty()) return Label();
  if (a == b) return a;
  return Label::binary(Label::Op::Meet, a, b);
}

inline std::string to_string(const Label& l) { return l.to_string(); }

/// Effective reader and writer sets of a label under a hierarchy.
struct SemLabel {
  PrincipalSet readers;
  PrincipalSet writers;
  friend bool operator==(const SemLabel&, const SemLabel&) = default;
};

namespace detail {

inline PrincipalSet policy_members(const Policy& p, const PrincipalHierarchy& h) {
  PrincipalSet out;
  for (const auto& q : h.all_principals()) {
    bool member = h.acts_for(q, p.owner);
    for (auto it = p.principals.begin(); !member && it != p.principals.end(); ++it)
      member = h.acts_for(q, *it);
    if (member) out.insert(q);
  }
  return out;
}

inline PrincipalSet set_union(const PrincipalSet& a, const PrincipalSet& b) {
  PrincipalSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline PrincipalSet set_intersection(const PrincipalSet& a, const PrincipalSet& b) {
  PrincipalSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

}  // namespace detail

inline PrincipalSet interpret_conf(const Policy& p, const PrincipalHierarchy& h) {
  return detail::policy_members(p, h);
}

inline PrincipalSet interpret_integ(const Policy& p, const PrincipalHierarchy& h) {
  return detail::policy_members(p, h);
}

/// Throws UnsupportedLabel on label variables.
inline SemLabel interpret_label(const Label& l, const PrincipalHierarchy& h) {
  const auto all = all_principals(h);
  switch (l.op()) {
    case Label::Op::Empty: return {all, {Principal::top()}};
    case Label::Op::Leaf:
      if (l.leaf().kind == PolicyKind::Confidentiality) return {interpret_conf(l.leaf(), h), all};
      return {all, interpret_integ(l.leaf(), h)};
    case Label::Op::Join: {
      auto a = interpret_label(l.lhs(), h);
      auto b = interpret_label(l.rhs(), h);
      return {detail::set_intersection(a.readers, b.readers),
              detail::set_union(a.writers, b.writers)};
    }
    case Label::Op::Meet: {
      auto a = interpret_label(l.lhs(), h);
      auto b = interpret_label(l.rhs(), h);
      return {detail::set_union(a.readers, b.readers),
              detail::set_intersection(a.writers, b.writers)};
    }
    case Label::Op::Var: throw UnsupportedLabel(l.var_name());
  }
  return {};
}

/// Flow order on interpreted labels: the destination may only drop readers and
/// admit more writers.
inline bool flows_to(const SemLabel& from, const SemLabel& to) {
  return std::includes(from.readers.begin(), from.readers.end(), to.readers.begin(),
                       to.readers.end()) &&
         std::includes(to.writers.begin(), to.writers.end(), from.writers.begin(),
                       from.writers.end());
}

inline bool flows_to(const Label& from, const Label& to, const PrincipalHierarchy& h) {
  if (from == to) return true;
  return flows_to(interpret_label(from, h), interpret_label(to, h));
}

/// Writer-set half of the flow order.
inline bool integrity_flows_to(const Label& from, const Label& to, const PrincipalHierarchy& h) {
  auto a = interpret_label(from, h);
  auto b = interpret_label(to, h);
  return std::includes(b.writers.begin(), b.writers.end(), a.writers.begin(), a.writers.end());
}

inline bool equivalent(const Label& a, const Label& b, const PrincipalHierarchy& h) {
  return flows_to(a, b, h) && flows_to(b, a, h);
}

}  // namespace minijif
