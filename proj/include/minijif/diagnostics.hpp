#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "minijif/source.hpp"

namespace minijif {

enum class DiagCode {
  Flow,
  FlowImplicit,
  PcCall,
  PcEnd,
  DeclFrom,
  DeclAuth,
  DeclInteg,
  AuthClaim,
  Undef,
  Type,
  Arity,
  UnknownMethod,
  Unsupported,
};

inline constexpr std::array kAllDiagCodes = {
    DiagCode::Flow,      DiagCode::FlowImplicit, DiagCode::PcCall,   DiagCode::PcEnd,
    DiagCode::DeclFrom,  DiagCode::DeclAuth,     DiagCode::DeclInteg, DiagCode::AuthClaim,
    DiagCode::Undef,     DiagCode::Type,         DiagCode::Arity,    DiagCode::UnknownMethod,
    DiagCode::Unsupported,
};

inline std::string_view code_name(DiagCode c) {
  switch (c) {
    case DiagCode::Flow: return "E-FLOW";
    case DiagCode::FlowImplicit: return "E-FLOW-IMPLICIT";
    case DiagCode::PcCall: return "E-PC-CALL";
    case DiagCode::PcEnd: return "E-PC-END";
    case DiagCode::DeclFrom: return "E-DECL-FROM";
    case DiagCode::DeclAuth: return "E-DECL-AUTH";
    case DiagCode::DeclInteg: return "E-DECL-INTEG";
    case DiagCode::AuthClaim: return "E-AUTH-CLAIM";
    case DiagCode::Undef: return "E-UNDEF";
    case DiagCode::Type: return "E-TYPE";
    case DiagCode::Arity: return "E-ARITY";
    case DiagCode::UnknownMethod: return "E-UNKNOWN-METHOD";
    case DiagCode::Unsupported: return "E-UNSUPPORTED";
  }
  return "E-?";
}

inline std::optional<DiagCode> parse_code(std::string_view name) {
  for (auto c : kAllDiagCodes)
    if (code_name(c) == name) return c;
  return std::nullopt;
}

struct Diagnostic {
  DiagCode code;
  Span span;
  std::optional<std::string> from;  // pretty-printed source label
  std::optional<std::string> to;    // pretty-printed destination label
  std::string message;
};

/// Orders by file, then start position. Stable, so diagnostics at the same
/// point keep emission order.
inline void sort_diagnostics(std::vector<Diagnostic>& diags) {
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.span.file != b.span.file) return a.span.file < b.span.file;
    return a.span.start < b.span.start;
  });
}

/// path:line:col: CODE: message, then the two labels on their own lines.
inline std::string render_human(const Diagnostic& d) {
  std::string out = d.span.to_string() + ": " + std::string(code_name(d.code)) + ": " + d.message + "\n";
  if (d.from) out += "    from: " + *d.from + "\n";
  if (d.to) out += "    to:   " + *d.to + "\n";
  return out;
}

inline nlohmann::ordered_json to_json(const Diagnostic& d) {
  auto pos = [](const Position& p) {
    return nlohmann::ordered_json{{"line", p.line}, {"column", p.column}};
  };
  nlohmann::ordered_json j;
  j["code"] = code_name(d.code);
  j["span"] = {{"file", d.span.file}, {"start", pos(d.span.start)}, {"end", pos(d.span.end)}};
  j["from"] = d.from ? nlohmann::ordered_json(*d.from) : nlohmann::ordered_json(nullptr);
  j["to"] = d.to ? nlohmann::ordered_json(*d.to) : nlohmann::ordered_json(nullptr);
  j["message"] = d.message;
  return j;
}

inline std::string render_json(const std::vector<Diagnostic>& diags) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& d : diags) arr.push_back(to_json(d));
  return arr.dump(2) + "\n";
}

}  // namespace minijif
