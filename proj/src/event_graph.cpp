#include "carmc/event_graph.hpp"

#include <algorithm>
#include <map>

namespace carmc {

std::vector<std::string> EventGraph::precedents(std::string_view id) const {
  std::vector<std::string> out;
  for (const auto& e : edges) {
    if (e.to == id && !e.loopback && e.from != kStartNode) out.push_back(e.from);
  }
  return out;
}

std::vector<EventEdge> EventGraph::incoming(std::string_view id) const {
  std::vector<EventEdge> out;
  for (const auto& e : edges) {
    if (e.to == id && !e.loopback) out.push_back(e);
  }
  return out;
}

namespace {

void attach_start(EventGraph& g) {
  for (const auto& id : g.events) {
    if (g.incoming(id).empty()) {
      g.edges.insert(EventEdge{std::string(kStartNode), id, MergeKind::plain, false});
    }
  }
}

}  // namespace

EventGraph extend_events(const RequirementsModel& model, std::set<std::string> seed) {
  const auto precedences = model.all_precedences();
  for (const auto* p : precedences) {
    for (const std::string* end : {&p->from, &p->to}) {
      if (*end == kStartNode || *end == kEndNode) continue;
      if (!model.find_event(*end)) {
        throw CompileError(p->loc, "OM1",
                           "precedence " + p->from + " -> " + p->to +
                               " names an event that exists in no process: '" +
                               *end + "'");
      }
    }
  }

  EventGraph g;
  g.events = std::move(seed);
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto* p : precedences) {
      if (p->loopback || p->from_start() || p->to_end()) continue;
      if (g.contains(p->to) && g.events.insert(p->from).second) grew = true;
    }
  }
  for (const auto* p : precedences) {
    if (p->to_end()) continue;
    if (p->from_start()) {
      if (g.contains(p->to) && !p->loopback) {
        g.edges.insert(EventEdge{p->from, p->to, p->merge, false});
      }
      continue;
    }
    if (g.contains(p->from) && g.contains(p->to)) {
      g.edges.insert(EventEdge{p->from, p->to, p->merge, p->loopback});
    }
  }
  attach_start(g);
  return g;
}

EventGraph extend_diagram(const RequirementsModel& model, std::string_view process_id) {
  const BusinessProcess* proc = model.find_process(process_id);
  if (!proc) {
    throw CompileError(SourceLoc{}, "OM1",
                       "no business process with id '" + std::string(process_id) + "'");
  }
  std::set<std::string> seed;
  for (const auto& ev : proc->events) seed.insert(ev.id);
  return extend_events(model, std::move(seed));
}

EventGraph full_diagram(const RequirementsModel& model) {
  std::set<std::string> seed;
  for (const auto* ev : model.all_events()) seed.insert(ev->id);
  return extend_events(model, std::move(seed));
}

std::vector<std::string> sort_events(const EventGraph& graph) {
  std::map<std::string, int> in_degree;
  std::map<std::string, std::vector<std::string>> successors;
  for (const auto& id : graph.events) in_degree[id] = 0;
  for (const auto& e : graph.edges) {
    if (e.loopback || e.from == kStartNode) continue;
    if (!graph.contains(e.from) || !graph.contains(e.to)) continue;
    ++in_degree[e.to];
    successors[e.from].push_back(e.to);
  }
  std::set<std::string> ready;
  for (const auto& [id, d] : in_degree) {
    if (d == 0) ready.insert(id);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string next = *ready.begin();
    ready.erase(ready.begin());
    for (const auto& s : successors[next]) {
      if (--in_degree[s] == 0) ready.insert(s);
    }
    order.push_back(std::move(next));
  }
  if (order.size() != graph.events.size()) {
    std::string left;
    for (const auto& [id, d] : in_degree) {
      if (d > 0) left += (left.empty() ? "" : ", ") + id;
    }
    throw CompileError(SourceLoc{}, "OM3",
                       "precedences form a cycle through " + left +
                           " after removing loopbacks");
  }
  return order;
}

EventGraph sub_diagram_for_class(const EventGraph& graph, const TraceMap& trace,
                                 std::string_view cls) {
  if (!trace.knows_class(cls)) {
    throw CompileError(SourceLoc{}, "DM1",
                       "no class named '" + std::string(cls) + "' was derived");
  }
  EventGraph sub;
  for (const auto& id : trace.events_for_class(cls)) {
    if (graph.contains(id)) sub.events.insert(id);
  }
  // Precedence through removed events is kept: each event is linked to its
  // nearest retained ancestors.
  for (const auto& id : sub.events) {
    const auto direct = graph.incoming(id);
    const MergeKind merge = direct.empty() ? MergeKind::plain : direct.front().merge;
    std::set<std::string> visited;
    std::vector<std::string> stack = graph.precedents(id);
    while (!stack.empty()) {
      std::string cur = std::move(stack.back());
      stack.pop_back();
      if (!visited.insert(cur).second) continue;
      if (sub.contains(cur)) {
        sub.edges.insert(EventEdge{cur, id, merge, false});
      } else {
        for (auto& p : graph.precedents(cur)) stack.push_back(std::move(p));
      }
    }
  }
  attach_start(sub);
  return sub;
}

}  // namespace carmc
