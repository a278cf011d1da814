#pragma once

// Random class-free MiniJif programs for differential noninterference runs.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "minijif/evaluator.hpp"

namespace gen {

struct VarInfo {
  std::string name;
  bool is_bool;
  bool secret;
};

// Parameters first, then locals declared at the top of the body.
inline const std::vector<VarInfo>& variables() {
  static const std::vector<VarInfo> vars = {
      {"secret", false, true}, {"flag", true, true}, {"pub", false, false},
      {"x", false, false},     {"y", false, false},  {"h", false, true},
      {"b", true, false},
  };
  return vars;
}

inline bool is_output(const std::string& name) {
  for (const auto& v : variables())
    if (v.name == name) return !v.secret;
  return false;
}

class ProgramGenerator {
 public:
  explicit ProgramGenerator(std::uint32_t seed) : rng_(seed) {}

  std::string next() {
    out_.clear();
    out_ += "principal A;\n\nclass P {\n";
    out_ += "    void run{}(int{A->*} secret, bool{A->*} flag, int{} pub) {\n";
    out_ += "        int{} x = " + std::to_string(small()) + ";\n";
    out_ += "        int{} y = 0;\n";
    out_ += "        int{A->*} h = 1;\n";
    out_ += "        bool{} b = false;\n";
    int n = between(1, 6);
    for (int i = 0; i < n; ++i) stmt(2, 2);
    out_ += "    }\n}\n";
    return out_;
  }

  /// Inputs that agree on the public parameter and differ in the secrets.
  std::pair<minijif::Environment, minijif::Environment> input_pair() {
    std::int64_t pub = between(-3, 9);
    minijif::Environment a{{"secret", std::int64_t{between(-5, 5)}}, {"flag", coin()}, {"pub", pub}};
    minijif::Environment b{{"secret", std::int64_t{between(6, 20)}}, {"flag", coin()}, {"pub", pub}};
    return {a, b};
  }

 private:
  int between(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  int small() { return between(0, 5); }

  void indent(int depth) { out_.append(static_cast<std::size_t>(8 + 4 * (2 - depth)), ' '); }

  const VarInfo& pick_var(bool want_bool, bool allow_secret) {
    std::vector<const VarInfo*> c;
    for (const auto& v : variables())
      if (v.is_bool == want_bool && (allow_secret || !v.secret)) c.push_back(&v);
    return *c[static_cast<std::size_t>(between(0, static_cast<int>(c.size()) - 1))];
  }

  std::string int_expr(int depth, bool allow_secret) {
    if (depth == 0 || coin(0.4)) {
      if (coin(0.4)) return std::to_string(small());
      return pick_var(false, allow_secret).name;
    }
    static const char* ops[] = {"+", "-", "*", "/", "%"};
    std::string op = ops[between(0, 4)];
    return "(" + int_expr(depth - 1, allow_secret) + " " + op + " " + int_expr(depth - 1, allow_secret) + ")";
  }

  std::string bool_expr(int depth, bool allow_secret) {
    int r = between(0, 9);
    if (depth == 0 || r < 3) {
      if (r == 0) return coin() ? "true" : "false";
      return pick_var(true, allow_secret).name;
    }
    if (r < 7) {
      static const char* cmp[] = {"<", "<=", ">", ">=", "==", "!="};
      return int_expr(1, allow_secret) + " " + cmp[between(0, 5)] + " " + int_expr(1, allow_secret);
    }
    if (r < 9) {
      std::string op = coin() ? " && " : " || ";
      return "(" + bool_expr(depth - 1, allow_secret) + op + bool_expr(depth - 1, allow_secret) + ")";
    }
    return "!(" + bool_expr(depth - 1, allow_secret) + ")";
  }

  void block(int depth, int fuel) {
    out_ += " {\n";
    int n = between(1, 3);
    for (int i = 0; i < n; ++i) stmt(depth - 1, fuel - 1);
    indent(depth);
    out_ += "}";
  }

  // Secret-tainted reads appear often enough that many programs are
  // rejected; the rest exercise both explicit and implicit paths.
  void stmt(int depth, int fuel) {
    int r = between(0, 9);
    if (depth > 0 && fuel > 0 && r >= 7) {
      indent(depth);
      if (r == 9 && coin(0.5)) {
        // Bounded loop: a fresh guard on a counter variable.
        const auto& v = pick_var(false, coin(0.3));
        out_ += "while (" + v.name + " < " + std::to_string(between(2, 8)) + ")";
        out_ += " {\n";
        stmt(depth - 1, fuel - 1);
        indent(depth - 1);
        out_ += v.name + " = " + v.name + " + 1;\n";
        indent(depth);
        out_ += "}\n";
        return;
      }
      out_ += "if (" + bool_expr(2, coin(0.4)) + ")";
      block(depth, fuel);
      if (coin()) {
        out_ += " else";
        block(depth, fuel);
      }
      out_ += "\n";
      return;
    }
    bool want_bool = coin(0.2);
    const auto& target = pick_var(want_bool, true);
    bool allow_secret = target.secret || coin(0.25);
    indent(depth);
    out_ += target.name + " = " +
            (want_bool ? bool_expr(2, allow_secret) : int_expr(2, allow_secret)) + ";\n";
  }

  std::mt19937 rng_;
  std::string out_;
};

}  // namespace gen
