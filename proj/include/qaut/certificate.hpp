#pragma once

// Plain-text certificate bundles: a header naming the presentation and tensor space,
// then one block per certificate with its target terms and combination terms.

#include "qaut/graded_algebra.hpp"
#include "qaut/presentation.hpp"
#include "qaut/reduction.hpp"
#include "qaut/tensor.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qaut {

inline constexpr const char* kToolVersion = "0.1.0";

class CertificateFormatError : public std::runtime_error {
 public:
  CertificateFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("certificate line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct NamedCertificate {
  std::string check;
  Certificate certificate;
};

namespace detail {

inline std::string slot_word_name(const TensorSpace& sp, std::size_t slot, const Word& w) { return sp.slots[slot].name(w); }

inline Word parse_single_word(const SlotAlgebra& slot, const std::string& text) {
  auto words = slot.parse_word(text);
  if (words.size() != 1 || words.front().second != 0) throw std::invalid_argument("not a basis word: " + text);
  return words.front().first;
}

}  // namespace detail

inline std::string certificate_to_text(const Certificate& c, const std::string& check) {
  const TensorSpace& sp = *c.target.space();
  std::ostringstream os;
  os << "certificate " << check << "\n";
  os << "cap " << c.cap << "\n";
  os << "target-terms " << c.target.size() << "\n";
  for (const auto& [k, v] : c.target.terms()) os << "t (" << v.to_string() << ") " << c.target.key_name(k) << "\n";
  os << "terms " << c.terms.size() << "\n";
  for (const auto& t : c.terms) {
    os << "c " << t.relation + 1 << " " << t.slot + 1 << " " << detail::slot_word_name(sp, t.slot, t.left) << " "
       << detail::slot_word_name(sp, t.slot, t.right) << " ";
    if (t.other.empty()) {
      os << "-";
    } else {
      std::size_t q = 0;
      for (std::size_t s = 0; s < sp.size(); ++s) {
        if (s == t.slot) continue;
        os << (q ? "@" : "") << detail::slot_word_name(sp, s, t.other[q]);
        ++q;
      }
    }
    os << " (" << t.coeff.to_string() << ")\n";
  }
  os << "end\n";
  return os.str();
}

struct CertificateBundle {
  PresentationPtr presentation;
  TensorSpacePtr space;
  std::vector<NamedCertificate> certificates;
};

inline std::string bundle_header(const Presentation& p, const TensorSpace& sp) {
  std::ostringstream os;
  os << "qaut-certificates 1\n";
  os << "tool-version " << kToolVersion << "\n";
  os << "presentation " << p.schema << "\n";
  os << "presentation-hash " << presentation_hash(p) << "\n";
  os << "zeta " << p.mode.to_string() << "\n";
  os << "spec " << p.spec.to_string() << "\n";
  os << "slots " << sp.descriptor() << "\n";
  return os.str();
}

inline std::string bundle_to_text(const CertificateBundle& b) {
  std::string out = bundle_header(*b.presentation, *b.space);
  for (const auto& nc : b.certificates) out += certificate_to_text(nc.certificate, nc.check);
  return out;
}

// Parses "block 2 degrees 0 1; block 1 degrees 0;".
inline GradingSpec parse_spec_line(const std::string& text) {
  std::vector<std::vector<int>> blocks;
  for (const auto& part : detail::split_top(text, ';')) {
    std::istringstream is(part);
    std::string kw;
    if (!(is >> kw)) continue;
    int n = 0;
    std::string degrees_kw;
    if (kw != "block" || !(is >> n >> degrees_kw) || degrees_kw != "degrees") throw SpecError("malformed spec line: " + text);
    std::vector<int> d;
    int x;
    while (is >> x) d.push_back(x);
    if (static_cast<int>(d.size()) != n) throw SpecError("degree count does not match block size");
    blocks.push_back(std::move(d));
  }
  return GradingSpec::make(std::move(blocks));
}

inline ZetaMode parse_zeta_line(const std::string& text) {
  if (text == "generic") return ZetaMode::generic();
  if (text.rfind("root ", 0) == 0) return ZetaMode::root_of_unity(std::stoi(text.substr(5)));
  throw SpecError("malformed zeta: " + text);
}

inline TensorSpacePtr space_from_descriptor(const std::string& descriptor, const PresentationPtr& p) {
  std::istringstream is(descriptor);
  std::string mode;
  is >> mode;
  if (mode != "braided" && mode != "ordinary") throw SpecError("unknown tensor mode: " + mode);
  std::vector<SlotAlgebra> slots;
  std::shared_ptr<const GradedAlgebra> alg;
  std::string kind;
  while (is >> kind) {
    if (kind == "presented") {
      slots.push_back(SlotAlgebra::presented(p));
    } else if (kind == "matrix" || kind == "crossed") {
      if (!alg) alg = make_matrix_algebra(p->spec, FunctionalChoice::normalized_trace, p->mode);
      slots.push_back(kind == "matrix" ? SlotAlgebra::matrix(alg) : SlotAlgebra::crossed(alg));
    } else {
      throw SpecError("unknown slot kind: " + kind);
    }
  }
  return make_space(std::move(slots), mode == "braided");
}

inline CertificateBundle parse_bundle(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto next = [&]() -> std::string {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line[0] != '#') return line;
    }
    throw CertificateFormatError(lineno, "unexpected end of file");
  };
  auto field = [&](const std::string& key) {
    const std::string l = next();
    if (l.rfind(key + " ", 0) != 0) throw CertificateFormatError(lineno, "expected '" + key + "'");
    return l.substr(key.size() + 1);
  };
  if (next() != "qaut-certificates 1") throw CertificateFormatError(lineno, "not a certificate bundle");
  field("tool-version");
  const std::string schema = field("presentation");
  const std::string hash = field("presentation-hash");
  const std::size_t hash_line = lineno;
  // Header values are validated where they appear.
  auto header = [&](auto&& parse) {
    try {
      return parse();
    } catch (const CertificateFormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw CertificateFormatError(lineno, e.what());
    }
  };
  const ZetaMode mode = header([&] { return parse_zeta_line(field("zeta")); });
  const GradingSpec spec = header([&] { return parse_spec_line(field("spec")); });
  CertificateBundle b;
  b.presentation = header([&] { return regenerate_presentation(schema, spec, mode); });
  if (presentation_hash(*b.presentation) != hash) throw CertificateFormatError(hash_line, "presentation hash mismatch");
  b.space = header([&] { return space_from_descriptor(field("slots"), b.presentation); });
  const TensorSpace& sp = *b.space;
  while (true) {
    std::string l;
    try {
      l = next();
    } catch (const CertificateFormatError&) {
      break;
    }
    if (l.rfind("certificate ", 0) != 0) throw CertificateFormatError(lineno, "expected 'certificate'");
    NamedCertificate nc;
    nc.check = l.substr(12);
    nc.certificate.presentation = b.presentation;
    nc.certificate.target = TensorElement(b.space);
    try {
      nc.certificate.cap = std::stoi(field("cap"));
      const std::size_t nt = std::stoul(field("target-terms"));
      for (std::size_t i = 0; i < nt; ++i) {
        const std::string t = next();
        if (t.rfind("t ", 0) != 0) throw CertificateFormatError(lineno, "expected target term");
        nc.certificate.target += parse_tensor(b.space, t.substr(2));
      }
      const std::size_t nc_terms = std::stoul(field("terms"));
      for (std::size_t i = 0; i < nc_terms; ++i) {
        const std::string t = next();
        std::istringstream ts(t);
        std::string tag, left, right, other;
        std::size_t rel = 0, slot = 0;
        if (!(ts >> tag >> rel >> slot >> left >> right >> other) || tag != "c") throw CertificateFormatError(lineno, "malformed term");
        std::string rest;
        std::getline(ts, rest);
        rest = detail::trim(rest);
        if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')') throw CertificateFormatError(lineno, "malformed coefficient");
        if (rel == 0 || rel > b.presentation->relations.size() || slot == 0 || slot > sp.size())
          throw CertificateFormatError(lineno, "relation or slot out of range");
        CertificateTerm term;
        term.relation = rel - 1;
        term.slot = slot - 1;
        term.left = detail::parse_single_word(sp.slots[term.slot], left);
        term.right = detail::parse_single_word(sp.slots[term.slot], right);
        if (other != "-") {
          const auto parts = detail::split_top(other, '@');
          std::size_t q = 0;
          for (std::size_t s = 0; s < sp.size(); ++s) {
            if (s == term.slot) continue;
            if (q >= parts.size()) throw CertificateFormatError(lineno, "too few slot words");
            term.other.push_back(detail::parse_single_word(sp.slots[s], parts[q++]));
          }
        }
        if (term.other.size() + 1 != sp.size()) throw CertificateFormatError(lineno, "slot word count mismatch");
        term.coeff = Scalar::parse(rest.substr(1, rest.size() - 2), mode);
        nc.certificate.terms.push_back(std::move(term));
      }
      if (next() != "end") throw CertificateFormatError(lineno, "expected 'end'");
    } catch (const CertificateFormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw CertificateFormatError(lineno, e.what());
    }
    b.certificates.push_back(std::move(nc));
  }
  return b;
}

// A certificate file is a concatenation of bundles.
inline std::vector<CertificateBundle> parse_bundles(const std::string& text) {
  std::vector<CertificateBundle> out;
  std::istringstream in(text);
  std::string line, chunk;
  std::size_t lineno = 0, chunk_start = 1;
  auto flush = [&] {
    if (chunk.find_first_not_of(" \n") == std::string::npos) return;
    try {
      out.push_back(parse_bundle(chunk));
    } catch (const CertificateFormatError& e) {
      throw CertificateFormatError(chunk_start + e.line() - 1, std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line == "qaut-certificates 1" && chunk.find("qaut-certificates 1") != std::string::npos) {
      flush();
      chunk.clear();
      chunk_start = lineno;
    } else if (chunk.empty()) {
      chunk_start = lineno;
    }
    chunk += line + "\n";
  }
  flush();
  return out;
}

}  // namespace qaut
