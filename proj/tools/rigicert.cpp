#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rigicert/certify.hpp"
#include "rigicert/corpus.hpp"
#include "rigicert/framework_io.hpp"

namespace {

using namespace rigicert;

// exit statuses: 0 certified rigid, 1 inconclusive/inapplicable, 2 input error
constexpr int kInputError = 2;

std::string stem_of(const std::string& path) {
  const size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const size_t dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

int run_analyze(const std::string& path, const CertifyOptions& opts, const std::string& report_path,
                bool json_stdout) {
  ParsedFramework parsed;
  try {
    parsed = read_framework_file(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }

  CertificateReport rep;
  const auto start = std::chrono::steady_clock::now();
  try {
    rep = full_certification(parsed.framework, opts, parsed.pins);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rep.framework_name = parsed.name.empty() ? stem_of(path) : parsed.name;

  const nlohmann::json jrep = report_to_json(rep, seconds);
  if (json_stdout)
    std::cout << jrep.dump(2) << "\n";
  else
    std::cout << render_report_text(rep);
  if (!report_path.empty()) {
    try {
      write_framework_file(report_path, jrep);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kInputError;
    }
  }
  return verdict_exit_status(rep.verdict);
}

int run_corpus(const std::string& name, const std::string& out_path) {
  if (name == "list") {
    for (const auto& e : canonical_entries()) std::cout << e.name << "\n";
    return 0;
  }
  const CorpusEntry* entry = find_corpus_entry(name);
  if (!entry) {
    const CorpusEntry* nearest = nullptr;
    size_t best = std::string::npos;
    for (const auto& e : canonical_entries()) {
      const size_t d = edit_distance(name, e.name);
      if (!nearest || d < best) {
        nearest = &e;
        best = d;
      }
    }
    std::cerr << "error: no corpus entry named '" << name << "'";
    if (nearest) std::cerr << "; did you mean '" << nearest->name << "'?";
    std::cerr << "\n";
    return kInputError;
  }
  const nlohmann::json j = framework_to_json(entry->framework, entry->name);
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_framework_file(out_path, j);
  return 0;
}

int run_check_equivalence(const std::string& path, const CertifyOptions& opts, double threshold) {
  ParsedFramework parsed;
  try {
    parsed = read_framework_file(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  const Framework& f = parsed.framework;
  try {
    const PinSet pins = parsed.pins ? *parsed.pins : select_pin_set(f);
    const EquivalenceSummary eq = equivalence_report(f, pins, opts.tol_factor);
    const PrestressEvidence pre = prestress_test(f, opts, pins);
    const TransverseEvidence tr = transverse_test(f, opts, pins);
    std::cout << "alpha = " << eq.alpha << "\n";
    std::cout << "residual = " << eq.residual << (eq.degenerate ? " (degenerate)" : "") << "\n";
    std::cout << "prestress_energy = " << pre.energy << "\n";
    std::cout << "transverse_value = " << tr.value << "\n";
    const bool pass = eq.degenerate || eq.residual <= threshold;
    std::cout << (pass ? "PASS" : "FAIL") << " (threshold " << threshold << ")\n";
    return pass ? 0 : 1;
  } catch (const InapplicableError& e) {
    std::cout << "not applicable: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rigidity certificates for bar-and-joint frameworks"};
  app.require_subcommand(1);

  CertifyOptions opts;

  std::string analyze_path, report_path;
  bool json_stdout = false;
  CLI::App* analyze = app.add_subcommand("analyze", "run both rigidity certificates on a file");
  analyze->add_option("input", analyze_path, "framework file")->required();
  analyze->add_option("--report", report_path, "write the structured JSON report to this path");
  analyze->add_flag("--json", json_stdout, "print the structured report to stdout");
  analyze->add_option("--margin", opts.margin,
                      "relative certification margin (default 1e-6)");
  analyze->add_option("--fd-step", opts.fd_step_rel,
                      "finite-difference step relative to the configuration scale (default 1e-6)");
  analyze->add_option("--equivalence-threshold", opts.equivalence_threshold,
                      "residual accepted by the equivalence check (default 1e-8)");
  analyze->add_option("--tol-factor", opts.tol_factor,
                      "multiplier on the rank tolerance max(rows,cols)*eps*sigma_max (default 1)");

  std::string corpus_name, corpus_out;
  CLI::App* corpus = app.add_subcommand("corpus", "emit a canonical example framework");
  corpus->add_option("name", corpus_name, "entry name, or 'list'")->required();
  corpus->add_option("-o,--output", corpus_out, "write to this path instead of stdout");

  std::string check_path;
  double threshold = 1e-8;
  CLI::App* check = app.add_subcommand(
      "check-equivalence", "compare the determinant gradient against the stress form");
  check->add_option("input", check_path, "framework file")->required();
  check->add_option("--threshold", threshold, "pass residual (default 1e-8)");
  check->add_option("--margin", opts.margin, "relative certification margin (default 1e-6)");
  check->add_option("--tol-factor", opts.tol_factor,
                    "multiplier on the rank tolerance (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  if (analyze->parsed()) return run_analyze(analyze_path, opts, report_path, json_stdout);
  if (corpus->parsed()) return run_corpus(corpus_name, corpus_out);
  if (check->parsed()) return run_check_equivalence(check_path, opts, threshold);
  return kInputError;
}
