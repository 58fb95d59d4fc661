#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "carmc/model.hpp"
#include "carmc/object_model.hpp"

// Communicative event diagrams as graphs: cross-process extension, event
// ordering and per-class sub-diagrams.
namespace carmc {

struct EventEdge {
  std::string from;  // event id or kStartNode
  std::string to;
  MergeKind merge = MergeKind::plain;
  bool loopback = false;

  auto operator<=>(const EventEdge&) const = default;
  bool operator==(const EventEdge&) const = default;
};

/// Nodes are event ids; the start node is implicit and only appears as the
/// source of edges. End nodes are dropped.
struct EventGraph {
  std::set<std::string> events;
  std::set<EventEdge> edges;

  bool contains(std::string_view id) const { return events.count(std::string(id)) > 0; }
  /// Non-loopback event predecessors of `id` (the start node excluded).
  std::vector<std::string> precedents(std::string_view id) const;
  /// Non-loopback incoming edges of `id`, start edges included.
  std::vector<EventEdge> incoming(std::string_view id) const;
  bool operator==(const EventGraph&) const = default;
};

/// Events of `process_id` plus, transitively, every event that precedes an
/// included one. Throws CompileError (OM1) for an unknown process or a
/// precedence naming an event absent from the model.
EventGraph extend_diagram(const RequirementsModel& model, std::string_view process_id);

/// The same closure starting from an arbitrary event set.
EventGraph extend_events(const RequirementsModel& model, std::set<std::string> seed);

/// Every event of every process.
EventGraph full_diagram(const RequirementsModel& model);

/// Kahn's algorithm over the non-loopback edges, ties broken by ascending
/// event id. Throws CompileError (OM3) naming the events left on a cycle.
std::vector<std::string> sort_events(const EventGraph& graph);

/// The graph restricted to the events that created or extended `cls`,
/// loopbacks removed, with a start edge into each event left without a
/// precedent. Throws CompileError (DM1) when the trace does not know `cls`.
EventGraph sub_diagram_for_class(const EventGraph& graph, const TraceMap& trace,
                                 std::string_view cls);

}  // namespace carmc
