#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace minijif {

class InvalidIdentifier : public std::invalid_argument {
 public:
  explicit InvalidIdentifier(const std::string& name)
      : std::invalid_argument("invalid identifier '" + name + "'") {}
};

class UnknownPrincipal : public std::invalid_argument {
 public:
  explicit UnknownPrincipal(const std::string& name)
      : std::invalid_argument("unknown principal '" + name + "'") {}
};

/// Words that can never name a principal, a variable or a class.
inline bool is_keyword(std::string_view word) {
  static const std::set<std::string_view> kKeywords = {
      "class",  "principal", "actsfor", "authority", "where",   "if",
      "else",   "while",     "return",  "new",       "declassify",
      "to",     "meet",      "true",    "false",     "this",    "int",
      "bool",   "String",    "void",    "public",    "private", "protected",
      "final",  "static"};
  return kKeywords.count(word) != 0;
}

/// Identifier grammar: a letter or underscore followed by letters, digits or
/// underscores, excluding the lone `_` (bottom) and keywords.
inline bool is_valid_identifier(std::string_view name) {
  if (name.empty() || name == "_") return false;
  auto head = static_cast<unsigned char>(name.front());
  if (!std::isalpha(head) && head != '_') return false;
  for (char c : name) {
    auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && u != '_') return false;
  }
  return !is_keyword(name);
}

/// A principal: a named entity, or one of the distinguished top (`*`) and
/// bottom (`_`) principals.
class Principal {
 public:
  enum class Kind { Named, Top, Bottom };

  static Principal top() { return Principal(Kind::Top, {}); }
  static Principal bottom() { return Principal(Kind::Bottom, {}); }
  static Principal named(std::string name) {
    if (!is_valid_identifier(name)) throw InvalidIdentifier(name);
    return Principal(Kind::Named, std::move(name));
  }

  /// Parses the surface token: `*`, `_` or an identifier.
  static Principal from_token(std::string_view token) {
    if (token == "*") return top();
    if (token == "_") return bottom();
    return named(std::string(token));
  }

  Kind kind() const { return kind_; }
  bool is_top() const { return kind_ == Kind::Top; }
  bool is_bottom() const { return kind_ == Kind::Bottom; }
  bool is_named() const { return kind_ == Kind::Named; }
  const std::string& name() const { return name_; }

  std::string to_string() const {
    switch (kind_) {
      case Kind::Top: return "*";
      case Kind::Bottom: return "_";
      case Kind::Named: break;
    }
    return name_;
  }

  // Named principals sort by name, ahead of top and bottom.
  friend auto operator<=>(const Principal& a, const Principal& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    return a.name_ <=> b.name_;
  }
  friend bool operator==(const Principal&, const Principal&) = default;

 private:
  Principal(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_;
  std::string name_;
};

using PrincipalSet = std::set<Principal>;

inline std::string to_string(const PrincipalSet& set) {
  std::string out = "{";
  bool first = true;
  for (const auto& p : set) {
    if (!first) out += ", ";
    first = false;
    out += p.to_string();
  }
  return out + "}";
}

/// Declared principals plus delegation edges. `superior` acts for `inferior`.
///
/// Immutable once built: every modifying operation returns a new hierarchy.
/// The acts-for closure over the closed universe is recomputed eagerly, so
/// queries are table lookups.
class PrincipalHierarchy {
 public:
  using Edge = std::pair<Principal, Principal>;

  PrincipalHierarchy() { rebuild(); }

  [[nodiscard]] PrincipalHierarchy with_principal(const std::string& name) const {
    if (!is_valid_identifier(name)) throw InvalidIdentifier(name);
    PrincipalHierarchy next = *this;
    if (next.declared_.insert(Principal::named(name)).second) next.rebuild();
    return next;
  }

  [[nodiscard]] PrincipalHierarchy with_delegation(const Principal& superior,
                                                   const Principal& inferior) const {
    require_known(superior);
    require_known(inferior);
    PrincipalHierarchy next = *this;
    if (next.delegations_.insert({superior, inferior}).second) next.rebuild();
    return next;
  }

  bool is_declared(const Principal& p) const {
    return !p.is_named() || declared_.count(p) != 0;
  }

  /// Total: principals outside the universe are unrelated named principals,
  /// still subject to the top and bottom axioms.
  bool acts_for(const Principal& p, const Principal& q) const {
    if (p == q || p.is_top() || q.is_bottom()) return true;
    auto pi = index_.find(p);
    auto qi = index_.find(q);
    if (pi == index_.end() || qi == index_.end()) return false;
    return closure_[pi->second * universe_.size() + qi->second];
  }

  const PrincipalSet& declared() const { return declared_; }
  const std::set<Edge>& delegations() const { return delegations_; }

  /// declared ∪ {top, bottom}
  const std::vector<Principal>& all_principals() const { return universe_; }

  friend bool operator==(const PrincipalHierarchy& a, const PrincipalHierarchy& b) {
    return a.declared_ == b.declared_ && a.delegations_ == b.delegations_;
  }

 private:
  void require_known(const Principal& p) const {
    if (!is_declared(p)) throw UnknownPrincipal(p.to_string());
  }

  void rebuild() {
    universe_.assign(declared_.begin(), declared_.end());
    universe_.push_back(Principal::top());
    universe_.push_back(Principal::bottom());
    index_.clear();
    for (std::size_t i = 0; i < universe_.size(); ++i) index_[universe_[i]] = i;

    const std::size_t n = universe_.size();
    closure_.assign(n * n, false);
    const std::size_t top = index_.at(Principal::top());
    const std::size_t bottom = index_.at(Principal::bottom());
    for (std::size_t i = 0; i < n; ++i) {
      closure_[i * n + i] = true;
      closure_[top * n + i] = true;
      closure_[i * n + bottom] = true;
    }
    for (const auto& [sup, inf] : delegations_) {
      closure_[index_.at(sup) * n + index_.at(inf)] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (closure_[i * n + k])
          for (std::size_t j = 0; j < n; ++j)
            if (closure_[k * n + j]) closure_[i * n + j] = true;
  }

  PrincipalSet declared_;
  std::set<Edge> delegations_;
  std::vector<Principal> universe_;
  std::map<Principal, std::size_t> index_;
  std::vector<bool> closure_;
};

inline PrincipalHierarchy declare_principal(const PrincipalHierarchy& h,
                                            const std::string& name) {
  return h.with_principal(name);
}

inline PrincipalHierarchy add_delegation(const PrincipalHierarchy& h,
                                         const Principal& superior,
                                         const Principal& inferior) {
  return h.with_delegation(superior, inferior);
}

inline bool acts_for(const PrincipalHierarchy& h, const Principal& p, const Principal& q) {
  return h.acts_for(p, q);
}

inline PrincipalSet all_principals(const PrincipalHierarchy& h) {
  const auto& u = h.all_principals();
  return PrincipalSet(u.begin(), u.end());
}

class HierarchyFormatError : public std::runtime_error {
 public:
  HierarchyFormatError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Reads the line-oriented hierarchy format:
///
///     # comment
///     principal Alice
///     actsfor Alice >= Bob
inline PrincipalHierarchy parse_hierarchy(std::string_view text) {
  PrincipalHierarchy h;
  std::vector<std::pair<int, std::pair<std::string, std::string>>> edges;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    std::vector<std::string> w;
    for (std::string s; words >> s;) w.push_back(s);
    if (w.empty()) continue;
    if (w[0] == "principal" && w.size() == 2) {
      if (!is_valid_identifier(w[1]))
        throw HierarchyFormatError(line_no, "invalid principal name '" + w[1] + "'");
      h = h.with_principal(w[1]);
    } else if (w[0] == "actsfor" && w.size() == 4 && w[2] == ">=") {
      edges.push_back({line_no, {w[1], w[3]}});
    } else {
      throw HierarchyFormatError(line_no, "expected 'principal <name>' or "
                                          "'actsfor <superior> >= <inferior>'");
    }
  }
  // Delegations may mention principals declared further down.
  for (const auto& [ln, edge] : edges) {
    try {
      h = h.with_delegation(Principal::from_token(edge.first),
                            Principal::from_token(edge.second));
    } catch (const std::invalid_argument& e) {
      throw HierarchyFormatError(ln, e.what());
    }
  }
  return h;
}

inline std::string to_text(const PrincipalHierarchy& h) {
  std::string out;
  for (const auto& p : h.declared()) out += "principal " + p.name() + "\n";
  for (const auto& [sup, inf] : h.delegations())
    out += "actsfor " + sup.to_string() + " >= " + inf.to_string() + "\n";
  return out;
}

}  // namespace minijif
