#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "minijif/checker.hpp"
#include "minijif/diagnostics.hpp"
#include "minijif/labels.hpp"
#include "minijif/parser.hpp"
#include "minijif/principals.hpp"

namespace minijif {

enum ExitCode : int { kExitClean = 0, kExitDiagnostics = 1, kExitFailure = 2 };

inline std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

struct CheckArgs {
  std::vector<std::string> files;
  bool json = false;
  std::optional<std::string> hierarchy;
  bool no_trust_main = false;
  std::optional<std::size_t> max_errors;
};

namespace detail {

inline std::optional<PrincipalHierarchy> load_hierarchy(const std::string& path, std::ostream& err) {
  auto text = read_file(path);
  if (!text) {
    err << "error: cannot read hierarchy file '" << path << "'\n";
    return std::nullopt;
  }
  try {
    return parse_hierarchy(*text);
  } catch (const HierarchyFormatError& e) {
    err << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

}  // namespace detail

/// Parses and checks one source text. Throws LexError/ParseError.
inline std::vector<Diagnostic> check_source(std::string_view source, const std::string& file,
                                            const TrustConfig& trust = {}) {
  auto prog = parse_program(source, file);
  return check_program(prog, trust);
}

/// `check`: exit 0 when clean, 1 when any diagnostic, 2 on usage, IO or parse
/// failure.
inline int cmd_check(const CheckArgs& args, std::ostream& out, std::ostream& err) {
  if (args.files.empty()) {
    err << "error: no input files\n";
    return kExitFailure;
  }
  TrustConfig trust;
  trust.grant_main_authority = !args.no_trust_main;
  if (args.hierarchy) {
    auto h = detail::load_hierarchy(*args.hierarchy, err);
    if (!h) return kExitFailure;
    trust.extra_delegations.assign(h->delegations().begin(), h->delegations().end());
  }

  std::vector<std::string> files = args.files;
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());

  std::vector<Diagnostic> all;
  for (const auto& f : files) {
    auto text = read_file(f);
    if (!text) {
      err << "error: cannot read '" << f << "'\n";
      return kExitFailure;
    }
    try {
      auto diags = check_source(*text, f, trust);
      all.insert(all.end(), diags.begin(), diags.end());
    } catch (const LexError& e) {
      err << e.what() << "\n";
      return kExitFailure;
    } catch (const ParseError& e) {
      err << e.what() << "\n";
      return kExitFailure;
    } catch (const std::invalid_argument& e) {
      err << f << ": error: " << e.what() << "\n";
      return kExitFailure;
    }
  }

  bool any = !all.empty();
  if (args.max_errors && all.size() > *args.max_errors) all.resize(*args.max_errors);
  if (args.json) {
    out << render_json(all);
  } else {
    for (const auto& d : all) out << render_human(d);
  }
  return any ? kExitDiagnostics : kExitClean;
}

/// `query <op> <args...>`: acts-for and label-algebra questions. Named
/// principals that the hierarchy does not declare are declared implicitly.
inline int cmd_query(const std::string& op, const std::vector<std::string>& args,
                     const std::optional<std::string>& hierarchy_path, std::ostream& out,
                     std::ostream& err) {
  PrincipalHierarchy h;
  if (hierarchy_path) {
    auto loaded = detail::load_hierarchy(*hierarchy_path, err);
    if (!loaded) return kExitFailure;
    h = *loaded;
  }
  auto arity = [&](std::size_t n) {
    if (args.size() == n) return true;
    err << "error: '" << op << "' takes " << n << " argument(s), got " << args.size() << "\n";
    return false;
  };
  auto declare = [&](const Principal& p) {
    if (p.is_named() && !h.is_declared(p)) h = h.with_principal(p.name());
  };

  try {
    if (op == "actsfor") {
      if (!arity(2)) return kExitFailure;
      auto p = parse_principal(args[0]);
      auto q = parse_principal(args[1]);
      declare(p);
      declare(q);
      out << (h.acts_for(p, q) ? "true" : "false") << "\n";
      return kExitClean;
    }

    std::size_t want = op == "readers" || op == "writers" ? 1 : 2;
    if (op != "leq" && op != "join" && op != "meet" && want == 2) {
      err << "error: unknown query '" << op
          << "' (expected actsfor, leq, join, meet, readers or writers)\n";
      return kExitFailure;
    }
    if (!arity(want)) return kExitFailure;
    std::vector<Label> labels;
    for (const auto& a : args) {
      labels.push_back(parse_label(a));
      if (labels.back().has_variables()) {
        err << "error: label variables are not supported in queries: " << a << "\n";
        return kExitFailure;
      }
      for (const auto& p : labels.back().principals()) declare(p);
    }
    if (op == "leq") out << (flows_to(labels[0], labels[1], h) ? "true" : "false") << "\n";
    else if (op == "join") out << join(labels[0], labels[1]).to_string() << "\n";
    else if (op == "meet") out << meet(labels[0], labels[1]).to_string() << "\n";
    else if (op == "readers") out << to_string(interpret_label(labels[0], h).readers) << "\n";
    else out << to_string(interpret_label(labels[0], h).writers) << "\n";
    return kExitClean;
  } catch (const LexError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitFailure;
}

// ---- corpus runner ----

/// One `<code> <line>` expectation.
using Expectation = std::pair<std::string, int>;

struct ExpectFile {
  std::vector<Expectation> diagnostics;
  bool no_trust_main = false;
};

/// Sidecar format: one `<code> <line>` per line; `#` starts a comment;
/// `@option no-trust-main` checks the file without the entry-class grant.
inline ExpectFile parse_expect(std::string_view text) {
  ExpectFile out;
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
    auto bad = [&](const std::string& why) {
      return std::runtime_error("line " + std::to_string(line_no) + ": " + why);
    };
    if (w[0] == "@option") {
      if (w.size() != 2 || w[1] != "no-trust-main") throw bad("unknown option");
      out.no_trust_main = true;
      continue;
    }
    if (w.size() != 2 || !parse_code(w[0])) throw bad("expected '<code> <line>'");
    int line = 0;
    try {
      std::size_t used = 0;
      line = std::stoi(w[1], &used);
      if (used != w[1].size() || line < 1) throw bad("bad line number");
    } catch (const std::logic_error&) {
      throw bad("bad line number");
    }
    out.diagnostics.emplace_back(w[0], line);
  }
  std::sort(out.diagnostics.begin(), out.diagnostics.end());
  return out;
}

struct CorpusResult {
  std::filesystem::path path;
  bool ok = false;
  std::vector<Expectation> expected;
  std::vector<Expectation> actual;
  std::string error;  // set when the file or its sidecar could not be used
};

inline CorpusResult run_corpus_file(const std::filesystem::path& path) {
  CorpusResult r;
  r.path = path;
  auto sidecar = path;
  sidecar.replace_extension(".expect");
  auto expect_text = read_file(sidecar);
  if (!expect_text) {
    r.error = "missing sidecar " + sidecar.string();
    return r;
  }
  auto source = read_file(path);
  if (!source) {
    r.error = "cannot read file";
    return r;
  }
  try {
    auto expect = parse_expect(*expect_text);
    r.expected = expect.diagnostics;
    TrustConfig trust;
    trust.grant_main_authority = !expect.no_trust_main;
    for (const auto& d : check_source(*source, path.string(), trust))
      r.actual.emplace_back(std::string(code_name(d.code)), d.span.start.line);
  } catch (const std::exception& e) {
    r.error = e.what();
    return r;
  }
  std::sort(r.actual.begin(), r.actual.end());
  r.ok = r.actual == r.expected;
  return r;
}

inline std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".mjif") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

inline int cmd_corpus(const std::string& dir, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    err << "error: '" << dir << "' is not a directory\n";
    return kExitFailure;
  }
  auto files = corpus_files(dir);
  if (files.empty()) {
    err << "warning: no .mjif files under '" << dir << "'\n";
    return kExitClean;
  }
  auto show = [](const std::vector<Expectation>& es) {
    std::string s;
    for (const auto& [code, line] : es) s += (s.empty() ? "" : ", ") + code + "@" + std::to_string(line);
    return s.empty() ? std::string("none") : s;
  };
  int failed = 0;
  for (const auto& f : files) {
    auto r = run_corpus_file(f);
    if (r.ok) {
      out << "PASS " << f.string() << "\n";
      continue;
    }
    ++failed;
    out << "FAIL " << f.string() << "\n";
    if (!r.error.empty()) out << "    " << r.error << "\n";
    else out << "    expected: " << show(r.expected) << "\n    actual:   " << show(r.actual) << "\n";
  }
  out << files.size() - failed << " passed, " << failed << " failed\n";
  return failed ? kExitDiagnostics : kExitClean;
}

}  // namespace minijif
