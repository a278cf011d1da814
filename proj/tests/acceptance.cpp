// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "minijif/driver.hpp"
#include "minijif/evaluator.hpp"
#include "minijif/printer.hpp"
#include "oracle.hpp"
#include "program_gen.hpp"

namespace fs = std::filesystem;
using namespace minijif;

namespace {

const fs::path kCorpus = MINIJIF_CORPUS_DIR;

constexpr double kDemoSeconds = 1.0;
constexpr double kLatticeSeconds = 60.0;
constexpr double kNoninterferenceSeconds = 120.0;
constexpr int kRandomOracleCases = 10000;
constexpr int kNoninterferencePrograms = 1000;

struct Outcome {
  bool ok = true;
  std::string detail;
  Outcome& fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
    return *this;
  }
};

// Line of the first occurrence of `needle`, 0 when absent.
int line_of(const std::string& text, const std::string& needle) {
  auto pos = text.find(needle);
  if (pos == std::string::npos) return 0;
  int line = 1;
  for (std::size_t i = 0; i < pos; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

std::vector<Expectation> diagnose(const fs::path& file, const TrustConfig& trust = {}) {
  auto text = read_file(file);
  std::vector<Expectation> out;
  for (const auto& d : check_source(*text, file.string(), trust))
    out.emplace_back(std::string(code_name(d.code)), d.span.start.line);
  return out;
}

// 1. The demo and its three documented variants.
Outcome demo_reproduction() {
  Outcome o;
  auto expect_exactly = [&](const std::string& name, const std::string& code, const std::string& needle) {
    auto path = kCorpus / name;
    auto text = read_file(path);
    if (!text) {
      o.fail("missing " + name);
      return;
    }
    auto got = diagnose(path);
    std::vector<Expectation> want;
    if (!code.empty()) want.emplace_back(code, line_of(*text, needle));
    if (got != want) o.fail(name + ": unexpected diagnostics (" + std::to_string(got.size()) + ")");
  };
  expect_exactly("booking_ok.mjif", "", "");
  expect_exactly("booking_no_declassify.mjif", "E-FLOW", "return substring(cardNumber");
  expect_exactly("booking_bob_notebook.mjif", "E-FLOW", "bobNotebook =");
  expect_exactly("booking_no_authority.mjif", "E-DECL-AUTH", "declassify(");

  std::ostringstream sink;
  CheckArgs args;
  args.files = {(kCorpus / "booking_ok.mjif").string()};
  if (cmd_check(args, sink, sink) != kExitClean) o.fail("booking_ok.mjif does not exit 0");
  return o;
}

// 2. Lattice laws over every label with at most two confidentiality and two
// integrity policies, for every subset of delegation edges among three named
// principals. Labels are enumerated per semantic class: each class keeps one
// syntactic representative, built by combining representatives of smaller
// classes with join and meet.
Outcome lattice_laws() {
  Outcome o;
  std::vector<std::pair<int, int>> possible;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) possible.emplace_back(a, b);

  for (unsigned subset = 0; subset < (1u << possible.size()); ++subset) {
    oracle::World w;
    w.n = 3;
    for (std::size_t e = 0; e < possible.size(); ++e)
      if (subset & (1u << e)) w.edges.push_back(possible[e]);
    auto h = w.hierarchy();

    std::vector<std::vector<int>> lists;
    for (int a = 0; a < w.size(); ++a) {
      lists.push_back({a});
      for (int b = a + 1; b < w.size(); ++b) lists.push_back({a, b});
    }

    struct Rep {
      oracle::Sem sem;
      Label label;
    };
    // cells[c][i]: representatives built from exactly c confidentiality and
    // i integrity policies.
    std::map<oracle::Sem, Label> cells[3][3];
    cells[0][0][oracle::public_trusted(w)] = Label();
    for (int owner = 0; owner < w.size(); ++owner)
      for (const auto& ms : lists)
        for (bool conf : {true, false}) {
          oracle::Tree t;
          t.kind = oracle::Tree::Kind::Leaf;
          t.policy = {conf, owner, ms};
          cells[conf ? 1 : 0][conf ? 0 : 1].emplace(oracle::eval(t, w), oracle::to_label(t, w));
        }
    for (int total = 2; total <= 4; ++total)
      for (int c = 0; c <= 2; ++c) {
        int i = total - c;
        if (i < 0 || i > 2) continue;
        for (int c1 = 0; c1 <= c; ++c1)
          for (int i1 = 0; i1 <= i; ++i1) {
            int c2 = c - c1, i2 = i - i1;
            if (c1 + i1 == 0 || c2 + i2 == 0) continue;
            for (const auto& [sa, la] : cells[c1][i1])
              for (const auto& [sb, lb] : cells[c2][i2]) {
                cells[c][i].emplace(oracle::sem_join(sa, sb), join(la, lb));
                cells[c][i].emplace(oracle::sem_meet(sa, sb), meet(la, lb));
              }
          }
      }

    std::map<oracle::Sem, Label> classes;
    for (auto& row : cells)
      for (auto& cell : row) classes.insert(cell.begin(), cell.end());
    std::vector<Rep> reps;
    for (const auto& [s, l] : classes) reps.push_back({s, l});

    for (const auto& r : reps)
      if (oracle::from_impl(interpret_label(r.label, h), w) != r.sem)
        return o.fail("interpretation of " + r.label.to_string() + " disagrees");

    const std::size_t n = reps.size();
    std::vector<char> f(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        bool impl = flows_to(reps[i].label, reps[j].label, h);
        if (impl != oracle::flows(reps[i].sem, reps[j].sem))
          return o.fail("flows_to disagrees on " + reps[i].label.to_string() + ", " +
                        reps[j].label.to_string());
        f[i * n + j] = impl;
      }
    for (std::size_t i = 0; i < n; ++i) {
      if (!f[i * n + i]) return o.fail("not reflexive");
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && f[i * n + j] && f[j * n + i]) return o.fail("distinct classes are equivalent");
        if (f[i * n + j] && f[j * n + i] && !equivalent(reps[i].label, reps[j].label, h))
          return o.fail("equivalent() disagrees");
        if (!f[i * n + j]) continue;
        for (std::size_t k = 0; k < n; ++k)
          if (f[j * n + k] && !f[i * n + k]) return o.fail("not transitive");
      }
    }

    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto& a = reps[i];
        const auto& b = reps[j];
        auto jl = join(a.label, b.label);
        auto ml = meet(a.label, b.label);
        if (!flows_to(a.label, jl, h) || !flows_to(b.label, jl, h) || !flows_to(ml, a.label, h) ||
            !flows_to(ml, b.label, h))
          return o.fail("join/meet not a bound of " + a.label.to_string() + ", " + b.label.to_string());
        auto js = oracle::from_impl(interpret_label(jl, h), w);
        auto ms = oracle::from_impl(interpret_label(ml, h), w);
        for (const auto& c : reps) {
          if (oracle::flows(a.sem, c.sem) && oracle::flows(b.sem, c.sem) && !oracle::flows(js, c.sem))
            return o.fail("join is not least");
          if (oracle::flows(c.sem, a.sem) && oracle::flows(c.sem, b.sem) && !oracle::flows(c.sem, ms))
            return o.fail("meet is not greatest");
        }
      }
  }
  return o;
}

// 3. flows_to against the bitmask oracle on random hierarchies and labels.
Outcome random_oracle() {
  Outcome o;
  std::mt19937 rng(20240611);
  for (int c = 0; c < kRandomOracleCases; ++c) {
    int n = std::uniform_int_distribution<int>(1, 5)(rng);
    auto w = oracle::random_world(rng, n, true);
    auto h = w.hierarchy();
    auto t1 = oracle::random_tree(rng, w, 3);
    auto t2 = oracle::random_tree(rng, w, 3);
    auto l1 = oracle::to_label(*t1, w);
    auto l2 = oracle::to_label(*t2, w);
    bool want = oracle::flows(oracle::eval(*t1, w), oracle::eval(*t2, w));
    if (flows_to(l1, l2, h) != want) {
      o.fail("mismatch on " + l1.to_string() + " vs " + l2.to_string());
      break;
    }
  }
  return o;
}

// 4. Acts-for laws for every hierarchy on up to four named principals.
Outcome acts_for_laws() {
  Outcome o;
  for (int n = 0; n <= 4; ++n) {
    std::vector<std::pair<int, int>> possible;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b) possible.emplace_back(a, b);
    for (unsigned subset = 0; subset < (1u << possible.size()); ++subset) {
      oracle::World w;
      w.n = n;
      for (std::size_t e = 0; e < possible.size(); ++e)
        if (subset & (1u << e)) w.edges.push_back(possible[e]);
      auto h = w.hierarchy();
      const int m = w.size();
      auto rel = [&](int p, int q) { return h.acts_for(w.principal(p), w.principal(q)); };
      for (int p = 0; p < m; ++p) {
        if (!rel(p, p)) return o.fail("not reflexive");
        if (!rel(w.top(), p) || !rel(p, w.bottom())) return o.fail("top/bottom law");
        for (int q = 0; q < m; ++q) {
          if (rel(p, q) != w.acts_for(p, q)) return o.fail("disagrees with reachability");
          if (!rel(p, q)) continue;
          for (int r = 0; r < m; ++r)
            if (rel(q, r) && !rel(p, r)) return o.fail("not transitive");
        }
      }
      for (std::size_t e = 0; e < possible.size(); ++e) {
        if (subset & (1u << e)) continue;
        auto bigger = h.with_delegation(w.principal(possible[e].first), w.principal(possible[e].second));
        for (int p = 0; p < m; ++p)
          for (int q = 0; q < m; ++q)
            if (rel(p, q) && !bigger.acts_for(w.principal(p), w.principal(q)))
              return o.fail("adding an edge removed a pair");
      }
    }
  }
  return o;
}

// 5. Accepted programs never let the secret inputs change a public output.
Outcome noninterference(int& accepted_out) {
  Outcome o;
  gen::ProgramGenerator g(7);
  int accepted = 0;
  for (int attempt = 0; attempt < 200000 && accepted < kNoninterferencePrograms; ++attempt) {
    auto src = g.next();
    auto prog = parse_program(src, "<generated>");
    if (!check_program(prog).empty()) continue;
    auto [in1, in2] = g.input_pair();
    Environment out1, out2;
    try {
      out1 = evaluate_program(prog, in1);
      out2 = evaluate_program(prog, in2);
    } catch (const FuelExhausted&) {
      continue;  // termination channels are out of scope
    }
    ++accepted;
    for (const auto& [name, value] : out1)
      if (gen::is_output(name) && out2.at(name) != value) {
        o.fail("public output '" + name + "' depends on the secret in:\n" + src);
        accepted_out = accepted;
        return o;
      }
  }
  accepted_out = accepted;
  if (accepted < kNoninterferencePrograms)
    o.fail("only " + std::to_string(accepted) + " programs accepted");
  return o;
}

// 6. pretty-print then reparse every corpus file.
Outcome round_trip() {
  Outcome o;
  auto files = corpus_files(kCorpus);
  if (files.empty()) o.fail("empty corpus");
  for (const auto& f : files) {
    auto text = read_file(f);
    auto a = parse_program(*text, f.string());
    auto printed = pretty_print(a);
    auto b = parse_program(printed, f.string());
    if (!ast_equal(a, b)) o.fail(f.filename().string() + " does not round-trip");
    if (pretty_print(b) != printed) o.fail(f.filename().string() + " pretty form is not stable");
  }
  return o;
}

// 7. Every diagnostic code is produced, at its sidecar line, by some corpus
// file.
Outcome catalog_coverage() {
  Outcome o;
  std::set<std::string> covered;
  for (const auto& f : corpus_files(kCorpus)) {
    auto r = run_corpus_file(f);
    if (!r.ok) {
      o.fail(f.filename().string() + " does not match its sidecar");
      continue;
    }
    for (const auto& [code, line] : r.actual) covered.insert(code);
  }
  for (auto c : kAllDiagCodes)
    if (!covered.count(std::string(code_name(c)))) o.fail(std::string(code_name(c)) + " never fires");
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto run = [&](int id, const char* title, double limit, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit > 0 && secs >= limit) o.fail("took " + std::to_string(secs) + " s, limit " + std::to_string(limit) + " s");
    std::printf("%s AC%d %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, title, secs,
                o.ok ? "" : ": ", o.detail.c_str());
    if (!o.ok) ++failures;
  };

  int accepted = 0;
  run(1, "demo reproduction", kDemoSeconds, demo_reproduction);
  run(2, "lattice laws, exhaustive", kLatticeSeconds, lattice_laws);
  run(3, "flows_to vs oracle, 10000 random cases", 0, random_oracle);
  run(4, "acts-for laws, |declared| <= 4", 0, acts_for_laws);
  run(5, "differential noninterference, 1000 accepted programs", kNoninterferenceSeconds,
      [&] { return noninterference(accepted); });
  run(6, "corpus round-trip", 0, round_trip);
  run(7, "diagnostic catalog coverage", 0, catalog_coverage);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures ? 1 : 0;
}
