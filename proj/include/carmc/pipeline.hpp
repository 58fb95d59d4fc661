#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "carmc/carm_io.hpp"
#include "carmc/diagnostics.hpp"
#include "carmc/dynamic_model.hpp"
#include "carmc/event_graph.hpp"
#include "carmc/model.hpp"
#include "carmc/om_derive.hpp"

// parse -> validate -> extend -> sort -> derive, as one call.
namespace carmc {

struct PipelineOptions {
  DeriveOptions derive;
  /// Restrict derivation to the extended diagram of one process.
  std::optional<std::string> process;
};

struct PipelineResult {
  RequirementsModel model;
  EventGraph graph;
  std::vector<std::string> order;
  ObjectModel om;
  TraceMap trace;
  std::vector<StateTransitionDiagram> stds;
};

/// Reads `.carm` files and an optional annotations file into one model.
/// Throws CompileError (CARM-IO) for unreadable files.
RequirementsModel load_model(const std::vector<std::filesystem::path>& files,
                             const std::optional<std::filesystem::path>& annotations,
                             DiagnosticSink& sink);

/// Throws CompileError carrying every validation error, or the first
/// derivation error.
PipelineResult run_pipeline(RequirementsModel model, const PipelineOptions& options,
                            DiagnosticSink& sink);

}  // namespace carmc
