#pragma once

// Executes a spec document: runs the selected suites and writes dumps, reports and certificates.

#include "qaut/certificate.hpp"
#include "qaut/dsl.hpp"
#include "qaut/filtration.hpp"
#include "qaut/verifier.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace qaut {

enum class ReportFormat { text, machine };

enum ExitCode : int { exit_ok = 0, exit_input_error = 1, exit_inconclusive = 2, exit_violated = 3 };

struct RunOptions {
  unsigned jobs = 1;
  std::optional<int> cap;
  std::optional<std::string> out;
  ReportFormat format = ReportFormat::text;
  int filtration_radius = 3;
  // Progress lines (suite name and wall time); never written to output files.
  std::function<void(const std::string&)> progress;
};

struct RunResult {
  int exit_code = exit_ok;
  std::vector<std::string> files;
  std::vector<VerificationReport> reports;
};

struct OutputHeader {
  std::string spec_hash;
  std::string zeta;
  int cap = 0;

  std::string line() const {
    return std::string("qaut ") + kToolVersion + " spec-hash " + spec_hash + " zeta " + zeta + " cap " + std::to_string(cap);
  }
  nlohmann::ordered_json json() const {
    return {{"tool", "qaut"}, {"version", kToolVersion}, {"spec_hash", spec_hash}, {"zeta", zeta}, {"cap", cap}};
  }
};

inline std::string with_comment_header(const OutputHeader& h, const std::string& body) { return "# " + h.line() + "\n" + body; }

inline std::string report_text(const OutputHeader& h, const VerificationReport& r) { return with_comment_header(h, r.text()); }

inline std::string report_machine(const OutputHeader& h, const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["header"] = h.json();
  j["report"] = r.machine();
  return j.dump(2) + "\n";
}

// Functional used by the action, filtration and lifted-action suites: the normalized trace for one
// block, the unnormalized block delta for direct sums (the one the direct-sum relations preserve).
inline FunctionalChoice default_functional(const GradingSpec& spec) {
  return spec.blocks() == 1 ? FunctionalChoice::normalized_trace : FunctionalChoice::block_delta;
}

inline VerificationReport not_applicable(const std::string& suite, const GradingSpec& spec, ZetaMode mode, const std::string& why) {
  VerificationReport r;
  r.suite = suite;
  r.spec = spec.to_string();
  r.zeta = mode.to_string();
  r.notes.push_back("not applicable: " + why);
  return r;
}

inline VerificationReport run_suite(const std::string& suite, const GradingSpec& spec, ZetaMode mode, int cap, const RunOptions& opt) {
  SuiteOptions so;
  so.cap = cap;
  so.jobs = opt.jobs;
  const auto braided = gen_braided_aut(spec, mode);
  if (suite == "unitarity") return verify_unitarity(braided, so);
  if (suite == "comult") return verify_comult_welldefined(braided, so);
  if (suite == "coassoc") return verify_coassociativity(braided);
  if (suite == "action") return verify_action(braided, make_matrix_algebra(spec, default_functional(spec), mode), so);
  if (suite == "bosonise") {
    const auto bos = gen_bosonisation(*braided);
    VerificationReport r = make_report("bosonise", *bos);
    absorb(r, verify_unitarity(bos, so), "unitarity ");
    absorb(r, verify_comult_welldefined(bos, so), "comult ");
    absorb(r, verify_coassociativity(bos), "coassoc ");
    return r;
  }
  if (suite == "qiso-equiv") {
    if (spec.blocks() != 1) return not_applicable(suite, spec, mode, "the crossed-product symmetry presentation has a single block");
    return verify_qiso_equivalence(spec, mode, so);
  }
  if (suite == "degenerations") return verify_degenerations(spec, mode, so);
  if (suite == "filtration") return verify_filtration(spec, mode, opt.filtration_radius, default_functional(spec), opt.jobs);
  if (suite == "lifted-action") return verify_lifted_action(spec, mode, so, default_functional(spec));
  throw std::invalid_argument("unknown suite " + suite);
}

// Violations dominate inconclusive checks; anything else is success.
inline int exit_code_for(const std::vector<VerificationReport>& reports) {
  bool inconclusive = false, violated = false;
  for (const auto& r : reports) {
    inconclusive = inconclusive || r.count(CheckStatus::inconclusive) > 0;
    violated = violated || r.any_violated();
  }
  return violated ? exit_violated : inconclusive ? exit_inconclusive : exit_ok;
}

inline void write_file(const std::filesystem::path& path, const std::string& content, RunResult& result) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  result.files.push_back(path.string());
}

inline RunResult run(const SpecDocument& doc, const RunOptions& opt = {}) {
  RunResult result;
  const GradingSpec spec = doc.grading();
  const int cap = opt.cap.value_or(doc.cap);
  const std::filesystem::path out = opt.out.value_or(doc.out);
  std::filesystem::create_directories(out);
  const OutputHeader header{spec_hash(doc), doc.zeta.to_string(), cap};
  write_file(out / "spec.txt", with_comment_header(header, pretty_print(doc)), result);

  for (const auto& suite : doc.suites) {
    if (suite == "generate") {
      write_file(out / "presentation.txt", with_comment_header(header, gen_braided_aut(spec, doc.zeta)->dump()), result);
      if (doc.selects("bosonise"))
        write_file(out / "bosonised.txt", with_comment_header(header, gen_bosonisation(*gen_braided_aut(spec, doc.zeta))->dump()), result);
      continue;
    }
    VerificationReport r = run_suite(suite, spec, doc.zeta, cap, opt);
    if (opt.progress) opt.progress(suite + " " + std::to_string(r.checks.size()) + " checks " + std::to_string(r.seconds) + "s");
    if (opt.format == ReportFormat::text)
      write_file(out / (suite + ".report.txt"), report_text(header, r), result);
    else
      write_file(out / (suite + ".report.json"), report_machine(header, r), result);
    if (!r.bundles.empty()) write_file(out / r.certificate_file(), with_comment_header(header, r.certificates_text()), result);
    result.reports.push_back(std::move(r));
  }
  result.exit_code = exit_code_for(result.reports);
  return result;
}

// Replays every certificate of a bundle file, optionally specialised to a root of unity.
struct ReplayOutcome {
  std::size_t bundles = 0, certificates = 0, failures = 0;
  std::vector<std::string> failed;
};

inline ReplayOutcome replay_file_text(const std::string& text, std::optional<int> root = std::nullopt) {
  ReplayOutcome out;
  for (const auto& b : parse_bundles(text)) {
    ++out.bundles;
    for (const auto& nc : b.certificates) {
      ++out.certificates;
      const bool ok = root ? replay_specialized(nc.certificate, ZetaMode::root_of_unity(*root)) : replay(nc.certificate);
      if (!ok) {
        ++out.failures;
        out.failed.push_back(nc.check);
      }
    }
  }
  return out;
}

}  // namespace qaut
