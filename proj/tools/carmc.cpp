#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "carmc/emit.hpp"
#include "carmc/pipeline.hpp"
#include "carmc/validate.hpp"

namespace fs = std::filesystem;
using namespace carmc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitUsage = 2;

void print(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) std::cerr << d.format() << "\n";
}

int fail(const CompileError& err, const DiagnosticSink& sink) {
  std::vector<Diagnostic> all = sink.all();
  all.insert(all.end(), err.diagnostics().begin(), err.diagnostics().end());
  sort_diagnostics(all);
  print(all);
  return kExitDiagnostics;
}

std::optional<fs::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"carmc: compiles requirements models into class diagrams and state machines"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string annotations;
  std::string process;
  std::string formats = "json,dot,trace";
  std::string out_dir;
  std::string element;
  bool strict = false;
  bool self_loops = false;
  bool dump_order = false;

  auto* validate = app.add_subcommand("validate", "Check a requirements model and report diagnostics");
  validate->add_option("files", files, "Requirements files (.carm)")->required()->check(CLI::ExistingFile);
  validate->add_option("--annotations", annotations, "Analyst decisions file")->check(CLI::ExistingFile);

  auto* derive = app.add_subcommand("derive", "Derive the Object Model and the Dynamic Model");
  derive->add_option("files", files, "Requirements files (.carm)")->required()->check(CLI::ExistingFile);
  derive->add_option("--annotations", annotations, "Analyst decisions file")->check(CLI::ExistingFile);
  derive->add_option("--process", process, "Derive only the extended diagram of this process");
  derive->add_flag("--strict", strict, "Treat analyst-decision fallbacks as errors");
  derive->add_flag("--self-loops", self_loops, "Add edit and shared-service self loops to the STDs");
  derive->add_option("--format", formats, "Comma list of json, dot, trace")->capture_default_str();
  derive->add_option("-o,--out", out_dir, "Output directory (default: $CARMC_OUT_DIR or ./out)");
  derive->add_flag("--dump-order", dump_order, "Print the event processing order");

  auto* trace = app.add_subcommand("trace", "Print the trace links touching an element");
  trace->add_option("element", element, "Requirements path or derived element path")->required();
  trace->add_option("files", files, "Requirements files (.carm)")->required()->check(CLI::ExistingFile);
  trace->add_option("--annotations", annotations, "Analyst decisions file")->check(CLI::ExistingFile);
  trace->add_option("--process", process, "Derive only the extended diagram of this process");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::vector<fs::path> paths(files.begin(), files.end());
  DiagnosticSink sink;

  if (validate->parsed()) {
    try {
      RequirementsModel model = load_model(paths, optional_path(annotations), sink);
      std::vector<Diagnostic> all = sink.all();
      const auto found = validate_model(model);
      all.insert(all.end(), found.begin(), found.end());
      sort_diagnostics(all);
      print(all);
      const bool errors = std::any_of(all.begin(), all.end(), [](const Diagnostic& d) {
        return d.severity == Severity::error;
      });
      return errors ? kExitDiagnostics : kExitOk;
    } catch (const CompileError& err) {
      return fail(err, sink);
    }
  }

  PipelineOptions options;
  options.derive.strict = strict;
  options.derive.self_loops = self_loops;
  if (!process.empty()) options.process = process;

  EmitConfig cfg;
  if (derive->parsed()) {
    auto parsed = parse_formats(formats);
    if (!parsed) {
      std::cerr << "error: --format takes a comma list of json, dot, trace\n";
      return kExitUsage;
    }
    cfg.formats = *parsed;
    if (!out_dir.empty()) {
      cfg.out_dir = out_dir;
    } else if (const char* env = std::getenv("CARMC_OUT_DIR"); env && *env) {
      cfg.out_dir = env;
    }
  }

  try {
    RequirementsModel model = load_model(paths, optional_path(annotations), sink);
    if (options.process && !model.find_process(*options.process)) {
      print(sink.sorted());
      std::cerr << "error: no process with id '" << *options.process << "'\n";
      return kExitUsage;
    }
    PipelineResult result = run_pipeline(std::move(model), options, sink);
    if (trace->parsed()) {
      print(sink.sorted());
      for (const auto& l : result.trace.touching(element)) {
        std::cout << l.rule << "\t" << l.source << "\t" << l.derived << "\n";
      }
      return kExitOk;
    }
    emit_model(result.om, result.stds, result.trace, cfg);
    print(sink.sorted());
    if (dump_order) {
      for (const auto& id : result.order) std::cout << id << "\n";
    }
    return kExitOk;
  } catch (const CompileError& err) {
    return fail(err, sink);
  }
}
