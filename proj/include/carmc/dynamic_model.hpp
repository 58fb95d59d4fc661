#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carmc/diagnostics.hpp"
#include "carmc/event_graph.hpp"
#include "carmc/model.hpp"
#include "carmc/object_model.hpp"
#include "carmc/om_derive.hpp"

// OO-Method Dynamic Model: one state transition diagram per class.
namespace carmc {

inline constexpr std::string_view kPreCreation = "Pre_creation";
inline constexpr std::string_view kDefaultTransitionMessage =
    "This action cannot be executed";

enum class StateKind { pre_creation, intermediate, auxiliary };

const char* to_string(StateKind kind);

struct State {
  std::string name;
  StateKind kind = StateKind::intermediate;

  bool operator==(const State&) const = default;
};

struct Transition {
  std::string from;
  std::string to;
  std::string service;
  std::optional<std::string> condition;  // over service arguments
  std::vector<std::string> agents;
  std::string message;  // shown when the condition blocks the transition

  /// "service" or "service when condition".
  std::string label() const;
  bool operator==(const Transition&) const = default;
};

struct StateTransitionDiagram {
  std::string class_name;
  std::vector<State> states;
  std::vector<Transition> transitions;

  const State* find_state(std::string_view name) const;
  bool operator==(const StateTransitionDiagram&) const = default;
};

/// What an event does to one class: the service labelling its transitions
/// and the agents allowed to trigger it.
struct EventReaction {
  std::string service;
  std::vector<std::string> agents;
};

struct VariantReaction {
  std::string id;
  std::string condition;  // already rendered over argument names
};

/// Builds one STD step by step. Each transform records the states it traced
/// to the event so later events can depart from them.
class StdBuilder {
 public:
  /// Creates the STD with its pre-creation state, traced to the start node.
  StdBuilder(std::string class_name, TraceMap& trace);

  /// Plain or or-merged event: one `<id>ed` state and one transition per
  /// precedent trace state. No precedents means departing from the
  /// pre-creation state.
  void transform_event(const std::string& event, const std::vector<std::string>& precedents,
                       const EventReaction& reaction);

  /// One `<variant>ed` state per variant and one conditioned transition per
  /// (precedent trace state, variant).
  void transform_specialized(const std::string& event,
                             const std::vector<std::string>& precedents,
                             const EventReaction& reaction,
                             const std::vector<VariantReaction>& variants);

  /// Subset lattice over the and-joined precedents, then a final transition
  /// from the full set into the event's state (or its variant states).
  /// Throws CompileError (DM4) when the precedents do not depart from one
  /// common state.
  void transform_and_join(const std::string& event,
                          const std::vector<std::string>& precedents,
                          const EventReaction& reaction,
                          const std::map<std::string, EventReaction>& precedent_reactions,
                          const std::vector<VariantReaction>& variants = {});

  /// Edit/shared-service self loop on `state`.
  void add_self_loop(const std::string& state, const std::string& source,
                     const EventReaction& reaction);

  const std::vector<std::string>& trace_states(const std::string& event) const;
  bool processed(const std::string& event) const { return states_of_.count(event) > 0; }
  const StateTransitionDiagram& diagram() const { return std_; }
  StateTransitionDiagram finish() && { return std::move(std_); }

 private:
  void add_state(const std::string& name, StateKind kind, const std::string& rule,
                 const std::string& source, const std::string& event);
  void add_transition(Transition t, const std::string& rule, const std::string& source,
                      const std::string& event);
  std::vector<std::string> source_states(const std::string& event,
                                         const std::vector<std::string>& precedents) const;
  void connect(const std::string& event, const std::vector<std::string>& from,
               const EventReaction& reaction, const std::vector<VariantReaction>& variants,
               const std::string& rule);

  StateTransitionDiagram std_;
  TraceMap& trace_;
  std::map<std::string, std::vector<std::string>> states_of_;
};

/// Name of the lattice state for a set of occurred events: sorted ids joined
/// by '+' with the "ed" suffix.
std::string lattice_state_name(std::vector<std::string> events);

/// One STD per class, in class order. Appends state and transition links to
/// `trace`. Throws CompileError (DM2/DM3/DM4) when an event of a class
/// sub-diagram has no usable service, a condition names a field without a
/// derived argument, or an and-join has no common root.
std::vector<StateTransitionDiagram> derive_dynamic_model(
    const RequirementsModel& model, const ObjectModel& om, const EventGraph& graph,
    TraceMap& trace, const DeriveOptions& options, DiagnosticSink& sink);

}  // namespace carmc
