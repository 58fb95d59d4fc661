#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "carmc/dynamic_model.hpp"
#include "carmc/object_model.hpp"

// Output files:
//   model.json         classes, relationships, transactions (keys sorted)
//   classes.dot        class diagram, one record node per class
//   std_<CLASS>.dot    one state transition diagram per class
//   trace.tsv          `rule<TAB>source<TAB>derived`, sorted
namespace carmc {

enum class Format { model_json, class_dot, std_dot, trace_report };

/// "json", "dot" (class and STD diagrams), "trace", or a Format name.
std::optional<std::set<Format>> parse_formats(std::string_view list);

struct EmitConfig {
  std::set<Format> formats = {Format::model_json, Format::class_dot, Format::std_dot,
                              Format::trace_report};
  std::filesystem::path out_dir = "out";
};

std::string model_to_json(const ObjectModel& om);
/// Inverse of model_to_json. Throws CompileError (CARM-IO) on malformed input.
ObjectModel model_from_json(std::string_view text);

std::string class_diagram_dot(const ObjectModel& om);
std::string std_to_dot(const StateTransitionDiagram& std);
std::string trace_to_tsv(const TraceMap& trace);

/// Writes the selected formats into cfg.out_dir (created if missing), each
/// file through a temporary and a rename. Returns the written paths.
/// Throws CompileError (CARM-IO) when a file cannot be written.
std::vector<std::filesystem::path> emit_model(const ObjectModel& om,
                                              const std::vector<StateTransitionDiagram>& stds,
                                              const TraceMap& trace, const EmitConfig& cfg);

}  // namespace carmc
