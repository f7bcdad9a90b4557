// qaut: generate presentations, run verification suites, replay certificate files.

#include "qaut/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// Parses the spec file; prints the diagnostic and returns nullopt on error.
std::optional<qaut::SpecDocument> load_spec(const std::string& path) {
  const auto parsed = qaut::parse_spec(read_file(path));
  if (const auto* d = std::get_if<qaut::Diagnostic>(&parsed)) {
    std::cerr << path << ":" << d->to_string() << "\n";
    return std::nullopt;
  }
  return std::get<qaut::SpecDocument>(parsed);
}

void emit(const std::string& content, const std::string& out_dir, const std::string& name) {
  if (out_dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream(std::filesystem::path(out_dir) / name, std::ios::binary) << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Braided quantum automorphism presentations and certificate-backed verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qaut::kToolVersion);

  std::string spec_path, out_dir, format = "text", replay_path;
  int cap = 0, radius = 3, at_root = 0;
  unsigned jobs = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec", spec_path, "spec file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--cap", cap, "per-slot word length cap")->check(CLI::Range(1, 8));
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "machine"}));
  };

  auto* gen = app.add_subcommand("gen", "print the braided presentation");
  add_common(gen);
  auto* bos = app.add_subcommand("bosonise", "print the bosonised presentation");
  add_common(bos);
  auto* verify = app.add_subcommand("verify", "run the suites selected in the spec");
  add_common(verify);
  add_run(verify);
  auto* filt = app.add_subcommand("filtration", "run the filtration and lifted-action suites");
  add_common(filt);
  add_run(filt);
  filt->add_option("--radius", radius, "largest v-power in the filtration sweeps")->check(CLI::Range(0, 16));
  auto* rep = app.add_subcommand("replay", "re-check every certificate in a certificate file");
  rep->add_option("file", replay_path, "certificate file")->required()->check(CLI::ExistingFile);
  rep->add_option("--at", at_root, "specialise to a primitive root of unity of this order first")->check(CLI::Range(1, 1000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? qaut::exit_ok : qaut::exit_input_error;
  }

  try {
    if (*rep) {
      const auto outcome = qaut::replay_file_text(read_file(replay_path), at_root > 0 ? std::optional<int>(at_root) : std::nullopt);
      std::cout << "replayed " << outcome.certificates << " certificates in " << outcome.bundles << " bundles, " << outcome.failures
                << " failed\n";
      for (const auto& f : outcome.failed) std::cout << "failed " << f << "\n";
      return outcome.failures == 0 ? qaut::exit_ok : qaut::exit_violated;
    }

    auto doc = load_spec(spec_path);
    if (!doc) return qaut::exit_input_error;
    const qaut::GradingSpec spec = doc->grading();
    const qaut::OutputHeader header{qaut::spec_hash(*doc), doc->zeta.to_string(), cap > 0 ? cap : doc->cap};

    if (*gen || *bos) {
      auto p = qaut::gen_braided_aut(spec, doc->zeta);
      if (*bos) p = qaut::gen_bosonisation(*p);
      emit(qaut::with_comment_header(header, p->dump()), out_dir, *bos ? "bosonised.txt" : "presentation.txt");
      return qaut::exit_ok;
    }

    qaut::RunOptions opt;
    opt.jobs = jobs;
    if (cap > 0) opt.cap = cap;
    if (!out_dir.empty()) opt.out = out_dir;
    opt.format = format == "machine" ? qaut::ReportFormat::machine : qaut::ReportFormat::text;
    opt.filtration_radius = radius;
    opt.progress = [](const std::string& line) { std::cerr << line << "\n"; };
    if (*filt) doc->suites = {"filtration", "lifted-action"};

    const auto result = qaut::run(*doc, opt);
    for (const auto& r : result.reports) {
      std::cout << r.suite << ": certified " << r.count(qaut::CheckStatus::certified) << " passed " << r.count(qaut::CheckStatus::passed)
                << " inconclusive " << r.count(qaut::CheckStatus::inconclusive) << " violated " << r.count(qaut::CheckStatus::violated)
                << "\n";
    }
    std::cout << "exit " << result.exit_code << "\n";
    return result.exit_code;
  } catch (const qaut::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qaut::exit_input_error;
  } catch (const qaut::CertificateFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qaut::exit_input_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qaut::exit_input_error;
  }
}
