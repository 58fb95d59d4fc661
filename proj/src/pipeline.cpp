#include "carmc/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "carmc/validate.hpp"

namespace carmc {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CompileError(SourceLoc{path.string(), 0, 0}, codes::kIo,
                       "cannot read " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

RequirementsModel load_model(const std::vector<std::filesystem::path>& files,
                             const std::optional<std::filesystem::path>& annotations,
                             DiagnosticSink& sink) {
  std::vector<Source> sources;
  for (const auto& f : files) sources.push_back(Source{f.string(), read_file(f)});
  RequirementsModel model = parse_sources(sources, sink);
  if (annotations) {
    model.annotations.merge(parse_annotations(read_file(*annotations), annotations->string()));
  }
  return model;
}

PipelineResult run_pipeline(RequirementsModel model, const PipelineOptions& options,
                            DiagnosticSink& sink) {
  std::vector<Diagnostic> errors;
  for (auto& d : validate_model(model)) {
    if (d.severity == Severity::error) {
      errors.push_back(std::move(d));
    } else {
      sink.add(d.severity, d.loc, d.code, d.message);
    }
  }
  if (!errors.empty()) throw CompileError(std::move(errors));

  PipelineResult r;
  r.model = std::move(model);
  r.graph = options.process ? extend_diagram(r.model, *options.process)
                            : full_diagram(r.model);
  r.order = sort_events(r.graph);
  ObjectModelResult om = derive_object_model(r.model, r.order, options.derive, sink);
  r.om = std::move(om.om);
  r.trace = std::move(om.trace);
  r.stds = derive_dynamic_model(r.model, r.om, r.graph, r.trace, options.derive, sink);
  return r;
}

}  // namespace carmc
