#include <gtest/gtest.h>

#include "minijif/evaluator.hpp"
#include "minijif/parser.hpp"

using namespace minijif;

namespace {

Environment run(const std::string& body, Environment inputs = {}, std::string params = "") {
  auto prog = parse_program("class C {\n    void m{}(" + params + ") {\n" + body + "\n    }\n}\n");
  return evaluate_program(prog, inputs);
}

}  // namespace

TEST(Evaluator, Arithmetic) {
  auto env = run("int x = 0; x = 1 + 2;");
  EXPECT_EQ(env.at("x"), Value{std::int64_t{3}});
}

TEST(Evaluator, IfTrueTakesThen) {
  auto env = run("int y = 0; if (true) { y = 1; } else { y = 2; }");
  EXPECT_EQ(env.at("y"), Value{std::int64_t{1}});
}

TEST(Evaluator, Loop) {
  auto env = run("int i = 0; int s = 0; while (i < 5) { s = s + i; i = i + 1; }");
  EXPECT_EQ(env.at("s"), Value{std::int64_t{10}});
}

TEST(Evaluator, TotalArithmetic) {
  auto env = run("int a = 7 / 0; int b = 7 % 0; int c = 9223372036854775807 + 1; int d = -7 / 2;");
  EXPECT_EQ(env.at("a"), Value{std::int64_t{0}});
  EXPECT_EQ(env.at("b"), Value{std::int64_t{0}});
  EXPECT_EQ(env.at("c"), Value{INT64_MIN});
  EXPECT_EQ(env.at("d"), Value{std::int64_t{-3}});
}

TEST(Evaluator, Strings) {
  auto env = run(
      "String s = substring(\"4444333322221111\", 0, 6); String t = substring(\"abc\", 2, 99);"
      " int n = length(concat(s, t));");
  EXPECT_EQ(env.at("s"), Value{std::string("444433")});
  EXPECT_EQ(env.at("t"), Value{std::string("c")});
  EXPECT_EQ(env.at("n"), Value{std::int64_t{7}});
}

TEST(Evaluator, ParametersAndReturn) {
  auto prog = parse_program("class C {\n int f{}(int a, bool b) { if (b) { return a * 2; } return a; }\n}\n");
  auto env = evaluate_program(prog, {{"a", std::int64_t{4}}, {"b", true}});
  EXPECT_EQ(env.at("return"), Value{std::int64_t{8}});
  EXPECT_EQ(env.at("a"), Value{std::int64_t{4}});
}

TEST(Evaluator, FuelRunsOut) {
  EXPECT_THROW(run("int i = 0; while (true) { i = i + 1; }"), FuelExhausted);
}

TEST(Evaluator, TypeErrors) {
  EXPECT_THROW(run("int i = 0; if (i) { i = 1; }"), EvalTypeError);
  EXPECT_THROW(run("int i = 0;", {}, "int x"), EvalTypeError);
}

TEST(Evaluator, Declassify) {
  auto env = run("int x = declassify(5, {} to {});");
  EXPECT_EQ(env.at("x"), Value{std::int64_t{5}});
}
