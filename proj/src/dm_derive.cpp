#include "carmc/dynamic_model.hpp"

#include <algorithm>
#include <set>

#include "carmc/condition.hpp"
#include "carmc/names.hpp"

namespace carmc {

const char* to_string(StateKind kind) {
  switch (kind) {
    case StateKind::pre_creation: return "pre_creation";
    case StateKind::intermediate: return "intermediate";
    case StateKind::auxiliary: return "auxiliary";
  }
  return "?";
}

std::string Transition::label() const {
  return condition ? service + " when " + *condition : service;
}

const State* StateTransitionDiagram::find_state(std::string_view name) const {
  for (const auto& s : states) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::string lattice_state_name(std::vector<std::string> events) {
  std::sort(events.begin(), events.end());
  std::string out;
  for (const auto& e : events) out += (out.empty() ? "" : "+") + e;
  return out + "ed";
}

// -- StdBuilder -------------------------------------------------------------

StdBuilder::StdBuilder(std::string class_name, TraceMap& trace) : trace_(trace) {
  std_.class_name = std::move(class_name);
  trace_.add(TraceLink{"DM2", std::string(kStartNode), paths::std_diagram(std_.class_name),
                       TraceKind::diagram, "", std_.class_name, std_.class_name});
  add_state(std::string(kPreCreation), StateKind::pre_creation, "DM2",
            std::string(kStartNode), "");
}

void StdBuilder::add_state(const std::string& name, StateKind kind,
                           const std::string& rule, const std::string& source,
                           const std::string& event) {
  if (std_.find_state(name)) return;
  std_.states.push_back(State{name, kind});
  trace_.add(TraceLink{rule, source, paths::state(std_.class_name, name),
                       TraceKind::state, event, std_.class_name, name});
}

void StdBuilder::add_transition(Transition t, const std::string& rule,
                                const std::string& source, const std::string& event) {
  for (const auto& existing : std_.transitions) {
    if (existing.from == t.from && existing.to == t.to &&
        existing.service == t.service && existing.condition == t.condition) {
      return;
    }
  }
  trace_.add(TraceLink{rule, source,
                       paths::transition(std_.class_name, t.from, t.to, t.service),
                       TraceKind::transition, event, std_.class_name, t.service});
  std_.transitions.push_back(std::move(t));
}

const std::vector<std::string>& StdBuilder::trace_states(const std::string& event) const {
  static const std::vector<std::string> kNone;
  auto it = states_of_.find(event);
  return it == states_of_.end() ? kNone : it->second;
}

std::vector<std::string> StdBuilder::source_states(
    const std::string& event, const std::vector<std::string>& precedents) const {
  if (precedents.empty()) return {std::string(kPreCreation)};
  std::vector<std::string> out;
  for (const auto& p : precedents) {
    if (!processed(p)) {
      throw CompileError(SourceLoc{}, "DM2",
                         "precedent " + p + " of " + event +
                             " has no state yet in the STD of " + std_.class_name);
    }
    for (const auto& s : trace_states(p)) {
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
  }
  return out;
}

void StdBuilder::connect(const std::string& event, const std::vector<std::string>& from,
                         const EventReaction& reaction,
                         const std::vector<VariantReaction>& variants,
                         const std::string& rule) {
  std::vector<std::string>& mine = states_of_[event];
  if (variants.empty()) {
    const std::string target = event + "ed";
    add_state(target, StateKind::intermediate, rule, event, event);
    mine.push_back(target);
    for (const auto& f : from) {
      add_transition(Transition{f, target, reaction.service, std::nullopt,
                                reaction.agents, ""},
                     rule, event, event);
    }
    return;
  }
  for (const auto& v : variants) {
    const std::string target = v.id + "ed";
    const std::string source = event + "[" + v.id + "]";
    add_state(target, StateKind::intermediate, "DM3", source, event);
    mine.push_back(target);
    for (const auto& f : from) {
      add_transition(Transition{f, target, reaction.service, v.condition, reaction.agents,
                                std::string(kDefaultTransitionMessage)},
                     "DM3", source, event);
    }
  }
}

void StdBuilder::transform_event(const std::string& event,
                                 const std::vector<std::string>& precedents,
                                 const EventReaction& reaction) {
  connect(event, source_states(event, precedents), reaction, {}, "DM2E");
}

void StdBuilder::transform_specialized(const std::string& event,
                                       const std::vector<std::string>& precedents,
                                       const EventReaction& reaction,
                                       const std::vector<VariantReaction>& variants) {
  connect(event, source_states(event, precedents), reaction, variants, "DM3");
}

void StdBuilder::transform_and_join(
    const std::string& event, const std::vector<std::string>& precedents,
    const EventReaction& reaction,
    const std::map<std::string, EventReaction>& precedent_reactions,
    const std::vector<VariantReaction>& variants) {
  if (precedents.size() < 2) {
    connect(event, source_states(event, precedents), reaction, variants,
            variants.empty() ? "DM2E" : "DM3");
    return;
  }
  std::vector<std::string> joined = precedents;
  std::sort(joined.begin(), joined.end());
  joined.erase(std::unique(joined.begin(), joined.end()), joined.end());
  if (joined.size() > 16) {
    throw CompileError(SourceLoc{}, "DM4",
                       "and-join into " + event + " has too many precedents (" +
                           std::to_string(joined.size()) + ")");
  }

  // Root: the one state every joined precedent departs from.
  std::map<std::string, std::string> single;
  std::set<std::string> roots;
  for (const auto& p : joined) {
    if (!processed(p)) {
      throw CompileError(SourceLoc{}, "DM2",
                         "precedent " + p + " of " + event +
                             " has no state yet in the STD of " + std_.class_name);
    }
    const auto& states = trace_states(p);
    if (states.size() != 1) {
      throw CompileError(SourceLoc{}, "DM4",
                         "and-joined precedent " + p + " of " + event +
                             " ends in several states");
    }
    single[p] = states.front();
    for (const auto& t : std_.transitions) {
      if (t.to == states.front() && t.from != t.to) roots.insert(t.from);
    }
    if (!precedent_reactions.count(p)) {
      throw CompileError(SourceLoc{}, "DM4",
                         "and-joined precedent " + p + " of " + event +
                             " maps to no service of " + std_.class_name);
    }
  }
  if (roots.size() != 1) {
    std::string listed;
    for (const auto& r : roots) listed += (listed.empty() ? "" : ", ") + r;
    throw CompileError(SourceLoc{}, "DM4",
                       "the precedents and-joined into " + event +
                           " do not depart from one common state (" + listed + ")");
  }
  const std::string root = *roots.begin();

  const std::size_t k = joined.size();
  auto state_of = [&](unsigned mask) -> std::string {
    if (mask == 0) return root;
    std::vector<std::string> members;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (1u << i)) members.push_back(joined[i]);
    }
    if (members.size() == 1) return single[members.front()];
    const std::string name = lattice_state_name(members);
    add_state(name, StateKind::auxiliary, "DM4", event, event);
    return name;
  };
  const unsigned full = (1u << k) - 1;
  for (unsigned mask = 0; mask < full; ++mask) {
    const std::string from = state_of(mask);
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (1u << i)) continue;
      const EventReaction& r = precedent_reactions.at(joined[i]);
      add_transition(
          Transition{from, state_of(mask | (1u << i)), r.service, std::nullopt, r.agents, ""},
          "DM4", event, event);
    }
  }
  connect(event, {state_of(full)}, reaction, variants, "DM4");
}

void StdBuilder::add_self_loop(const std::string& state, const std::string& source,
                               const EventReaction& reaction) {
  add_transition(Transition{state, state, reaction.service, std::nullopt,
                            reaction.agents, ""},
                 "DM-LOOP", source, source);
}

// -- Whole-model derivation -------------------------------------------------

namespace {

std::optional<EventReaction> reaction_for(const ObjectModel& om, const TraceMap& trace,
                                          const Class& cls, const std::string& event) {
  for (const auto& l : trace.links()) {
    if (l.kind != TraceKind::transaction || l.event != event || l.owner != cls.name) {
      continue;
    }
    EventReaction r{l.element, {}};
    if (const Transaction* t = om.find_transaction(cls.name, l.element)) {
      for (const auto& c : t->component_services) {
        if (const Service* s = cls.find_service(c)) {
          for (const auto& a : s->agents) {
            if (std::find(r.agents.begin(), r.agents.end(), a) == r.agents.end()) {
              r.agents.push_back(a);
            }
          }
        }
      }
    }
    return r;
  }
  const Service* best = nullptr;
  auto rank = [](ServiceKind k) {
    switch (k) {
      case ServiceKind::end_of_editing: return 4;
      case ServiceKind::creation: return 3;
      case ServiceKind::edit: return 2;
      case ServiceKind::shared_insert: return 1;
      default: return 0;
    }
  };
  for (const auto& l : trace.links()) {
    if (l.kind != TraceKind::service || l.event != event || l.owner != cls.name) continue;
    const Service* s = cls.find_service(l.element);
    if (s && rank(s->kind) > 0 && (!best || rank(s->kind) > rank(best->kind))) best = s;
  }
  if (!best) return std::nullopt;
  return EventReaction{best->name, best->agents};
}

std::vector<VariantReaction> render_variants(const CommunicativeEvent& ev,
                                             const TraceMap& trace, const std::string& cls,
                                             const std::string& service) {
  std::vector<std::string> fields;
  for (const auto& v : walk_message(ev)) {
    if (v.member && !v.substructure) fields.push_back(v.member->name());
  }
  auto argument_for = [&](const std::string& field) {
    const TraceLink* fallback_same_class = nullptr;
    const TraceLink* fallback_any = nullptr;
    for (const auto& l : trace.links()) {
      if (l.kind != TraceKind::argument || l.event != ev.id) continue;
      const auto slash = l.source.rfind('/');
      if (slash == std::string::npos ||
          !names::iequals(names::squeeze(l.source.substr(slash + 1)),
                          names::squeeze(field))) {
        continue;
      }
      if (l.owner == cls && l.derived == paths::argument(cls, service, l.element)) {
        return l.element;
      }
      if (l.owner == cls && !fallback_same_class) fallback_same_class = &l;
      if (!fallback_any) fallback_any = &l;
    }
    if (fallback_same_class) return fallback_same_class->element;
    if (fallback_any) return fallback_any->element;
    throw CompileError(ev.loc, "DM3",
                       "field '" + field + "' in a condition of " + ev.id +
                           " has no derived service argument");
  };
  std::vector<VariantReaction> out;
  for (const auto& var : ev.variants) {
    const auto pieces = parse_condition(var.condition, fields);
    for (const auto& p : pieces) {
      if (p.kind == ConditionPiece::Kind::unknown) {
        throw CompileError(var.loc, "DM3",
                           "condition of variant '" + var.id + "' names '" + p.text +
                               "', which is not a field of " + ev.id);
      }
    }
    out.push_back(VariantReaction{var.id, render_condition(pieces, argument_for)});
  }
  return out;
}

}  // namespace

std::vector<StateTransitionDiagram> derive_dynamic_model(
    const RequirementsModel& model, const ObjectModel& om, const EventGraph& graph,
    TraceMap& trace, const DeriveOptions& options, DiagnosticSink& sink) {
  std::vector<StateTransitionDiagram> out;
  for (const auto& cls : om.classes) {
    const EventGraph sub = sub_diagram_for_class(graph, trace, cls.name);
    for (const auto& e : graph.edges) {
      if (e.loopback && sub.contains(e.from) && sub.contains(e.to)) {
        sink.warning(SourceLoc{}, "DM1",
                     "loopback " + e.from + " -> " + e.to + " is left out of the STD of " +
                         cls.name);
      }
    }
    // Events are looked up in the trace snapshot taken before this class
    // adds its own links.
    const TraceMap om_trace = trace;
    StdBuilder builder(cls.name, trace);
    auto reaction = [&](const std::string& event) {
      auto r = reaction_for(om, om_trace, cls, event);
      if (!r) {
        throw CompileError(SourceLoc{}, "DM2",
                           "event " + event + " maps to no service of class " + cls.name);
      }
      return *r;
    };
    for (const auto& event : sort_events(sub)) {
      const EventReaction r = reaction(event);
      const CommunicativeEvent* ev = model.find_event(event);
      std::vector<VariantReaction> variants;
      if (ev && ev->specialized()) variants = render_variants(*ev, om_trace, cls.name, r.service);
      const auto precedents = sub.precedents(event);
      const auto incoming = sub.incoming(event);
      const bool and_join = precedents.size() >= 2 && !incoming.empty() &&
                            incoming.front().merge == MergeKind::and_join;
      if (and_join) {
        std::map<std::string, EventReaction> prior;
        for (const auto& p : precedents) prior.emplace(p, reaction(p));
        builder.transform_and_join(event, precedents, r, prior, variants);
      } else if (!variants.empty()) {
        builder.transform_specialized(event, precedents, r, variants);
      } else {
        builder.transform_event(event, precedents, r);
      }
    }
    if (options.self_loops) {
      for (const auto& svc : cls.services) {
        if (svc.kind == ServiceKind::creation || svc.kind == ServiceKind::end_of_editing) {
          continue;
        }
        std::string introduced_by;
        for (const auto& l : om_trace.links()) {
          if (l.kind == TraceKind::service && l.derived == paths::service(cls.name, svc.name)) {
            introduced_by = l.event;
            break;
          }
        }
        std::vector<std::string> states = builder.trace_states(introduced_by);
        if (states.empty()) {
          for (const auto& s : builder.diagram().states) {
            if (s.kind == StateKind::intermediate) states.push_back(s.name);
          }
        }
        for (const auto& s : states) {
          builder.add_self_loop(s, introduced_by, EventReaction{svc.name, svc.agents});
        }
      }
    }
    out.push_back(std::move(builder).finish());
  }
  return out;
}

}  // namespace carmc
