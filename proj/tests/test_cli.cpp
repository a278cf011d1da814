#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "minijif/driver.hpp"

using namespace minijif;
namespace fs = std::filesystem;

namespace {

const fs::path kCorpus = MINIJIF_CORPUS_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run check(std::vector<std::string> files, bool json = false, bool no_trust = false) {
  CheckArgs a;
  a.files = std::move(files);
  a.json = json;
  a.no_trust_main = no_trust;
  std::ostringstream out, err;
  int code = cmd_check(a, out, err);
  return {code, out.str(), err.str()};
}

Run query(const std::string& op, std::vector<std::string> args, std::optional<std::string> h = {}) {
  std::ostringstream out, err;
  int code = cmd_query(op, args, h, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("minijif-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                         "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path_ / name) << text; }

 private:
  fs::path path_;
};

std::string p(const char* name) { return (kCorpus / name).string(); }

}  // namespace

TEST(CheckCommand, CleanFileExitsZero) {
  auto r = check({p("booking_ok.mjif")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "");
}

TEST(CheckCommand, DiagnosticsExitOne) {
  auto r = check({p("booking_no_declassify.mjif")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("booking_no_declassify.mjif:14:9: E-FLOW:"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("    from: {Owner->*}\n    to:   {Owner->Operator}\n"), std::string::npos) << r.out;
}

TEST(CheckCommand, MissingFileExitsTwo) {
  auto r = check({"missing.mjif"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("missing.mjif"), std::string::npos);
}

TEST(CheckCommand, ParseErrorExitsTwo) {
  TempDir d;
  d.write("bad.mjif", "class X [");
  EXPECT_EQ(check({(d.path() / "bad.mjif").string()}).code, 2);
  d.write("lex.mjif", "@");
  EXPECT_EQ(check({(d.path() / "lex.mjif").string()}).code, 2);
}

TEST(CheckCommand, NoTrustMain) {
  auto r = check({p("booking_ok.mjif")}, false, true);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("E-AUTH-CLAIM"), std::string::npos);
}

TEST(CheckCommand, JsonIsValidAndStable) {
  std::vector<std::string> files = {p("explicit_flow.mjif"), p("booking_ok.mjif"), p("pc_end.mjif")};
  auto a = check(files, true);
  auto b = check({files[2], files[0], files[1]}, true);
  EXPECT_EQ(a.code, 1);
  EXPECT_EQ(a.out, b.out);
  auto j = nlohmann::json::parse(a.out);
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 6u);
  for (const auto& d : j) {
    EXPECT_TRUE(parse_code(d.at("code").get<std::string>()));
    EXPECT_TRUE(d.at("span").at("start").at("line").is_number_integer());
    EXPECT_TRUE(d.at("from").is_string() || d.at("from").is_null());
    EXPECT_TRUE(d.at("message").is_string());
  }
  EXPECT_EQ(j[0]["span"]["file"], files[0]);
  EXPECT_EQ(check({p("booking_ok.mjif")}, true).out, "[]\n");
}

TEST(CheckCommand, MaxErrors) {
  CheckArgs a;
  a.files = {p("explicit_flow.mjif")};
  a.max_errors = 1;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_check(a, out, err), 1);
  auto text = out.str();
  ASSERT_NE(text.find("E-FLOW"), std::string::npos);
  EXPECT_EQ(text.find("E-FLOW", text.find("E-FLOW") + 1), std::string::npos);
}

TEST(CheckCommand, HierarchyFlag) {
  TempDir d;
  d.write("h.txt", "principal Alice\nprincipal Bob\nactsfor Alice >= Bob\n");
  CheckArgs a;
  a.files = {p("delegation.mjif")};
  a.hierarchy = (d.path() / "h.txt").string();
  std::ostringstream out, err;
  EXPECT_EQ(cmd_check(a, out, err), 0) << out.str() << err.str();
  a.hierarchy = (d.path() / "none.txt").string();
  EXPECT_EQ(cmd_check(a, out, err), 2);
}

TEST(QueryCommand, Leq) {
  auto r = query("leq", {"{Owner->Operator}", "{Owner->*}"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "true\n");
  EXPECT_EQ(query("leq", {"{Owner->*}", "{Owner->Operator}"}).out, "false\n");
}

TEST(QueryCommand, TopActsForAlice) {
  auto r = query("actsfor", {"*", "Alice"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "true\n");
  EXPECT_EQ(query("actsfor", {"Alice", "Bob"}).out, "false\n");
}

TEST(QueryCommand, Readers) {
  EXPECT_EQ(query("readers", {"{Alice->_}"}).out, "{Alice, *, _}\n");
  EXPECT_EQ(query("writers", {"{Alice<-*}"}).out, "{Alice, *}\n");
}

TEST(QueryCommand, JoinMeet) {
  EXPECT_EQ(query("join", {"{Chuck->*}", "{Alice->Chuck}"}).out, "{Chuck->*; Alice->Chuck}\n");
  EXPECT_EQ(query("meet", {"{Alice->Chuck}", "{Bob->Chuck}"}).out, "{Alice->Chuck meet Bob->Chuck}\n");
}

TEST(QueryCommand, WithHierarchyFile) {
  TempDir d;
  d.write("h.txt", "principal Alice\nprincipal Bob\nprincipal Carol\nactsfor Carol >= Bob\n");
  auto h = (d.path() / "h.txt").string();
  EXPECT_EQ(query("actsfor", {"Carol", "Bob"}, h).out, "true\n");
  EXPECT_EQ(query("readers", {"{Alice->Bob}"}, h).out, "{Alice, Bob, Carol, *}\n");
}

TEST(QueryCommand, Failures) {
  EXPECT_EQ(query("leq", {"{A->}", "{}"}).code, 2);
  EXPECT_EQ(query("leq", {"{}"}).code, 2);
  EXPECT_EQ(query("frobnicate", {"{}"}).code, 2);
  EXPECT_EQ(query("readers", {"{L}"}).code, 2);
}

TEST(CorpusCommand, ShippedCorpusPasses) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_corpus(kCorpus.string(), out, err), 0) << out.str();
}

TEST(CorpusCommand, TamperedExpectationFails) {
  TempDir d;
  fs::copy_file(kCorpus / "booking_no_declassify.mjif", d.path() / "a.mjif");
  d.write("a.expect", "E-FLOW 13\n");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_corpus(d.path().string(), out, err), 1);
  EXPECT_NE(out.str().find("FAIL"), std::string::npos);
}

TEST(CorpusCommand, EmptyDirectoryWarns) {
  TempDir d;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_corpus(d.path().string(), out, err), 0);
  EXPECT_NE(err.str().find("warning"), std::string::npos);
}

TEST(CorpusCommand, MissingSidecarAndBadDirectory) {
  TempDir d;
  d.write("a.mjif", "principal A;\n");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_corpus(d.path().string(), out, err), 1);
  EXPECT_EQ(cmd_corpus((d.path() / "nope").string(), out, err), 2);
}

TEST(ExpectFormat, Parses) {
  auto e = parse_expect("# header\n@option no-trust-main\nE-FLOW 3  # trailing\n\nE-TYPE 1\n");
  EXPECT_TRUE(e.no_trust_main);
  EXPECT_EQ(e.diagnostics, (std::vector<Expectation>{{"E-FLOW", 3}, {"E-TYPE", 1}}));
  EXPECT_THROW(parse_expect("E-NOPE 1\n"), std::runtime_error);
  EXPECT_THROW(parse_expect("E-FLOW x\n"), std::runtime_error);
  EXPECT_THROW(parse_expect("@option other\n"), std::runtime_error);
}

TEST(ExitCodes, HoldAcrossCorpus) {
  for (const auto& f : corpus_files(kCorpus)) {
    auto expect = parse_expect(*read_file(fs::path(f).replace_extension(".expect")));
    auto r = check({f.string()}, false, expect.no_trust_main);
    EXPECT_EQ(r.code, expect.diagnostics.empty() ? 0 : 1) << f;
  }
}
