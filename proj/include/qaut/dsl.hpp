#pragma once

// Line-oriented spec language. Statements end at ';' or at the end of a line; '#' starts a comment.
//
//   document   := { statement }
//   statement  := zeta | block | suites | cap | out
//   zeta       := "zeta" ( "generic" | "root" INT )
//   block      := "block" INT "degrees" INT { INT }
//   suites     := "suites" ( "all" | SUITE { SUITE } )
//   cap        := "cap" INT
//   out        := "out" PATH

#include "qaut/graded_algebra.hpp"
#include "qaut/presentation.hpp"
#include "qaut/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace qaut {

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"generate", "unitarity",     "comult",     "coassoc",       "action",
                                              "bosonise", "qiso-equiv",    "degenerations", "filtration", "lifted-action"};
  return names;
}

struct SpecDocument {
  ZetaMode zeta = ZetaMode::generic();
  std::vector<std::vector<int>> blocks;
  std::vector<std::string> suites = suite_names();  // in canonical order
  int cap = 3;
  std::string out = "out";

  bool all_suites() const { return suites == suite_names(); }
  bool selects(const std::string& s) const { return std::find(suites.begin(), suites.end(), s) != suites.end(); }
  GradingSpec grading() const { return GradingSpec::make(blocks); }

  friend bool operator==(const SpecDocument& a, const SpecDocument& b) {
    return a.zeta.to_string() == b.zeta.to_string() && a.blocks == b.blocks && a.suites == b.suites && a.cap == b.cap && a.out == b.out;
  }
};

// Canonical form: one statement per line, every field explicit.
inline std::string pretty_print(const SpecDocument& d) {
  std::ostringstream os;
  os << "zeta " << d.zeta.to_string() << ";\n";
  for (const auto& b : d.blocks) {
    os << "block " << b.size() << " degrees";
    for (int x : b) os << " " << x;
    os << ";\n";
  }
  os << "suites";
  if (d.all_suites()) {
    os << " all";
  } else {
    for (const auto& s : d.suites) os << " " << s;
  }
  os << ";\n";
  os << "cap " << d.cap << ";\n";
  os << "out " << d.out << ";\n";
  return os.str();
}

inline std::string spec_hash(const SpecDocument& d) { return hex64(fnv1a64(pretty_print(d))); }

enum class DiagnosticCode {
  unexpected_token = 1,   // E001
  unknown_keyword = 2,    // E002
  invalid_integer = 3,    // E003
  unexpected_end = 4,     // E004
  degree_count = 101,     // E101
  duplicate = 102,        // E102
  no_blocks = 103,        // E103
  invalid_root = 104,     // E104
  unknown_suite = 105,    // E105
  invalid_grading = 106,  // E106
  invalid_cap = 107,      // E107
};

struct Diagnostic {
  DiagnosticCode code;
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based
  std::string message;
  std::vector<std::string> expected;

  std::string code_name() const {
    const int c = static_cast<int>(code);
    std::string digits = std::to_string(c);
    return "E" + std::string(3 - std::min<std::size_t>(3, digits.size()), '0') + digits;
  }

  std::string to_string() const {
    std::string s = std::to_string(line) + ":" + std::to_string(column) + ": error " + code_name() + ": " + message;
    if (!expected.empty()) {
      s += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) s += (i ? ", " : "") + expected[i];
      s += ")";
    }
    return s;
  }
};

using ParseResult = std::variant<SpecDocument, Diagnostic>;

namespace detail {

struct Token {
  enum Kind { word, end_statement, end_input } kind;
  std::string text;
  std::size_t line, column;
};

inline std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto push_end = [&](std::size_t l, std::size_t c) {
    if (!out.empty() && out.back().kind == Token::word) out.push_back({Token::end_statement, ";", l, c});
  };
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '\n') {
      push_end(line, col);
      ++line;
      col = 1;
      ++i;
    } else if (ch == '#') {
      while (i < text.size() && text[i] != '\n') ++i, ++col;
    } else if (ch == ';') {
      push_end(line, col);
      ++i, ++col;
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i, ++col;
    } else {
      const std::size_t start = col;
      std::string w;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != ';' && text[i] != '#') w += text[i++], ++col;
      out.push_back({Token::word, w, line, start});
    }
  }
  push_end(line, col);
  out.push_back({Token::end_input, "", line, col});
  return out;
}

inline std::optional<long long> parse_int(const std::string& s) {
  long long v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (!s.empty() && s[0] == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || b == e) return std::nullopt;
  return v;
}

class SpecParser {
 public:
  explicit SpecParser(const std::string& text) : toks_(tokenize(text)) {}

  ParseResult parse() {
    SpecDocument doc;
    std::set<std::string> seen;
    std::optional<Token> first_block;
    while (peek().kind != Token::end_input) {
      const Token kw = next();
      if (kw.kind != Token::word) continue;
      static const std::vector<std::string> keywords{"zeta", "block", "suites", "cap", "out"};
      if (std::find(keywords.begin(), keywords.end(), kw.text) == keywords.end())
        return Diagnostic{DiagnosticCode::unknown_keyword, kw.line, kw.column, "unknown keyword '" + kw.text + "'", keywords};
      if (kw.text != "block" && !seen.insert(kw.text).second)
        return Diagnostic{DiagnosticCode::duplicate, kw.line, kw.column, "duplicate '" + kw.text + "' statement", {}};
      std::optional<Diagnostic> d;
      if (kw.text == "zeta") d = zeta(doc);
      if (kw.text == "block") {
        if (!first_block) first_block = kw;
        d = block(doc, kw);
      }
      if (kw.text == "suites") d = suites(doc);
      if (kw.text == "cap") d = cap(doc);
      if (kw.text == "out") d = out(doc);
      if (d) return *d;
      if (auto e = expect_end()) return *e;
    }
    if (doc.blocks.empty()) {
      const Token& t = peek();
      return Diagnostic{DiagnosticCode::no_blocks, t.line, t.column, "no block declared", {"block"}};
    }
    try {
      (void)doc.grading();
    } catch (const SpecError& e) {
      return Diagnostic{DiagnosticCode::invalid_grading, first_block->line, first_block->column, e.what(), {}};
    }
    return doc;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  static Diagnostic unexpected(const Token& t, std::vector<std::string> expected) {
    if (t.kind != Token::word)
      return {DiagnosticCode::unexpected_end, t.line, t.column, t.kind == Token::end_input ? "unexpected end of input" : "unexpected end of statement",
              std::move(expected)};
    return {DiagnosticCode::unexpected_token, t.line, t.column, "unexpected '" + t.text + "'", std::move(expected)};
  }

  std::optional<Diagnostic> integer(long long& v, const std::string& what) {
    const Token t = next();
    if (t.kind != Token::word) return unexpected(t, {what});
    auto x = parse_int(t.text);
    if (!x) return Diagnostic{DiagnosticCode::invalid_integer, t.line, t.column, "'" + t.text + "' is not an integer", {what}};
    v = *x;
    last_ = t;
    return std::nullopt;
  }

  std::optional<Diagnostic> expect_end() {
    const Token& t = peek();
    if (t.kind == Token::word) return unexpected(t, {"';'", "end of line"});
    if (t.kind == Token::end_statement) ++pos_;
    return std::nullopt;
  }

  std::optional<Diagnostic> zeta(SpecDocument& doc) {
    const Token t = next();
    if (t.kind == Token::word && t.text == "generic") {
      doc.zeta = ZetaMode::generic();
      return std::nullopt;
    }
    if (t.kind != Token::word || t.text != "root") return unexpected(t, {"generic", "root"});
    long long n = 0;
    if (auto d = integer(n, "root order")) return d;
    if (n < 1 || n > 1000000)
      return Diagnostic{DiagnosticCode::invalid_root, last_.line, last_.column, "root order must be between 1 and 1000000", {}};
    doc.zeta = ZetaMode::root_of_unity(static_cast<int>(n));
    return std::nullopt;
  }

  std::optional<Diagnostic> block(SpecDocument& doc, const Token& kw) {
    long long n = 0;
    if (auto d = integer(n, "block size")) return d;
    if (n < 1) return Diagnostic{DiagnosticCode::invalid_integer, last_.line, last_.column, "block size must be positive", {}};
    const Token t = next();
    if (t.kind != Token::word || t.text != "degrees") return unexpected(t, {"degrees"});
    std::vector<int> degrees;
    while (peek().kind == Token::word) {
      long long x = 0;
      if (auto d = integer(x, "degree")) return d;
      degrees.push_back(static_cast<int>(x));
    }
    if (degrees.empty()) return unexpected(peek(), {"degree"});
    if (static_cast<long long>(degrees.size()) != n)
      return Diagnostic{DiagnosticCode::degree_count, kw.line, kw.column,
                        "block of size " + std::to_string(n) + " has " + std::to_string(degrees.size()) + " degrees", {}};
    doc.blocks.push_back(std::move(degrees));
    return std::nullopt;
  }

  std::optional<Diagnostic> suites(SpecDocument& doc) {
    std::vector<std::string> expected{"all"};
    for (const auto& s : suite_names()) expected.push_back(s);
    if (peek().kind != Token::word) return unexpected(peek(), expected);
    if (peek().text == "all") {
      next();
      doc.suites = suite_names();
      return std::nullopt;
    }
    std::set<std::string> chosen;
    while (peek().kind == Token::word) {
      const Token t = next();
      if (std::find(suite_names().begin(), suite_names().end(), t.text) == suite_names().end())
        return Diagnostic{DiagnosticCode::unknown_suite, t.line, t.column, "unknown suite '" + t.text + "'", expected};
      chosen.insert(t.text);
    }
    doc.suites.clear();
    for (const auto& s : suite_names())
      if (chosen.count(s)) doc.suites.push_back(s);
    return std::nullopt;
  }

  std::optional<Diagnostic> cap(SpecDocument& doc) {
    long long k = 0;
    if (auto d = integer(k, "cap")) return d;
    if (k < 1 || k > 8) return Diagnostic{DiagnosticCode::invalid_cap, last_.line, last_.column, "cap must be between 1 and 8", {}};
    doc.cap = static_cast<int>(k);
    return std::nullopt;
  }

  std::optional<Diagnostic> out(SpecDocument& doc) {
    const Token t = next();
    if (t.kind != Token::word) return unexpected(t, {"path"});
    doc.out = t.text;
    return std::nullopt;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Token last_{Token::end_input, "", 0, 0};
};

}  // namespace detail

inline ParseResult parse_spec(const std::string& text) { return detail::SpecParser(text).parse(); }

}  // namespace qaut
