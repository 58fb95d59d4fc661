#include "carmc/validate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "carmc/annotations.hpp"
#include "carmc/condition.hpp"
#include "carmc/names.hpp"
#include "carmc/object_model.hpp"
#include "carmc/om_derive.hpp"

namespace carmc {

namespace {

bool is_event(const RequirementsModel& model, const std::string& id) {
  return model.find_event(id) != nullptr;
}

void check_duplicate_events(const RequirementsModel& model, DiagnosticSink& sink) {
  std::map<std::string, const CommunicativeEvent*> seen;
  for (const auto& proc : model.processes) {
    for (const auto& ev : proc.events) {
      auto [it, fresh] = seen.emplace(ev.id, &ev);
      if (!fresh) {
        sink.error(ev.loc, codes::kDuplicateEvent,
                   "event id '" + ev.id + "' is already declared at line " +
                       std::to_string(it->second->loc.line));
      }
    }
  }
}

void check_business_objects(const RequirementsModel& model, DiagnosticSink& sink) {
  for (const auto* ev : model.all_events()) {
    for (const auto& v : walk_message(*ev)) {
      const ReferenceField* rf = v.member ? v.member->reference_field() : nullptr;
      if (rf && !model.declares_business_object(rf->domain)) {
        sink.error(rf->loc, codes::kUnknownObject,
                   "reference field '" + rf->name + "' names undeclared business object '" +
                       rf->domain + "'");
      }
    }
  }
}

void check_merge_kinds(const RequirementsModel& model, DiagnosticSink& sink) {
  std::map<std::string, const PrecedenceRelation*> first;
  for (const auto* p : model.all_precedences()) {
    if (p->loopback || p->to_end()) continue;
    auto [it, fresh] = first.emplace(p->to, p);
    if (!fresh && it->second->merge != p->merge) {
      sink.error(p->loc, codes::kMergeKind,
                 "incoming precedences of '" + p->to + "' mix merge kinds '" +
                     to_string(it->second->merge) + "' and '" + to_string(p->merge) + "'");
    }
  }
}

void check_prefixes(const RequirementsModel& model, DiagnosticSink& sink) {
  for (const auto& proc : model.processes) {
    for (const auto& ev : proc.events) {
      if (ev.id.rfind(proc.id, 0) != 0) {
        sink.error(ev.loc, codes::kPrefix,
                   "event '" + ev.id + "' does not carry the prefix of process '" +
                       proc.id + "'");
      }
    }
  }
}

void check_endpoints(const RequirementsModel& model, DiagnosticSink& sink) {
  for (const auto* p : model.all_precedences()) {
    if (p->from == kEndNode) {
      sink.error(p->loc, "OM1", "the end node cannot precede an event");
    } else if (!p->from_start() && !is_event(model, p->from)) {
      sink.error(p->loc, "OM1",
                 "precedence " + p->from + " -> " + p->to + " names unknown event '" +
                     p->from + "'");
    }
    if (p->to == kStartNode) {
      sink.error(p->loc, "OM1", "the start node cannot follow an event");
    } else if (!p->to_end() && !is_event(model, p->to)) {
      sink.error(p->loc, "OM1",
                 "precedence " + p->from + " -> " + p->to + " names unknown event '" +
                     p->to + "'");
    }
  }
}

// Tarjan's strongly connected components over the non-loopback edges.
void check_cycles(const RequirementsModel& model, DiagnosticSink& sink) {
  std::map<std::string, std::vector<const PrecedenceRelation*>> out;
  for (const auto* p : model.all_precedences()) {
    if (p->loopback || p->from_start() || p->to_end()) continue;
    if (!is_event(model, p->from) || !is_event(model, p->to)) continue;
    out[p->from].push_back(p);
  }
  std::map<std::string, int> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  int counter = 0;
  std::function<void(const std::string&)> connect = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto* e : out[v]) {
      if (!index.count(e->to)) {
        connect(e->to);
        low[v] = std::min(low[v], low[e->to]);
      } else if (on_stack.count(e->to)) {
        low[v] = std::min(low[v], index[e->to]);
      }
    }
    if (low[v] != index[v]) return;
    std::set<std::string> component;
    while (true) {
      std::string w = stack.back();
      stack.pop_back();
      on_stack.erase(w);
      component.insert(w);
      if (w == v) break;
    }
    const PrecedenceRelation* witness = nullptr;
    for (const auto& n : component) {
      for (const auto* e : out[n]) {
        if (component.count(e->to) && (!witness || e->loc.line < witness->loc.line)) {
          witness = e;
        }
      }
    }
    if (!witness) return;  // a single event without a self edge
    std::string listed;
    for (const auto& n : component) listed += (listed.empty() ? "" : ", ") + n;
    sink.error(witness->loc, "OM3",
               "precedences form a cycle through " + listed +
                   "; mark the returning precedence as a loopback");
  };
  std::vector<std::string> nodes;
  for (const auto* ev : model.all_events()) nodes.push_back(ev->id);
  std::sort(nodes.begin(), nodes.end());
  for (const auto& n : nodes) {
    if (!index.count(n)) connect(n);
  }
}

std::vector<std::string> field_names(const CommunicativeEvent& ev) {
  std::vector<std::string> out;
  for (const auto& v : walk_message(ev)) {
    if (v.member && !v.substructure) out.push_back(v.member->name());
  }
  return out;
}

void check_message(const CommunicativeEvent& ev, DiagnosticSink& sink) {
  for (const auto& v : walk_message(ev)) {
    const Substructure* agg = v.member ? v.substructure : &ev.message;
    if (!agg || !agg->is_aggregation()) continue;
    std::set<std::string> seen;
    int marked = 0;
    for (const auto& m : agg->members) {
      if (!seen.insert(names::to_lower(names::squeeze(m.name()))).second) {
        const SourceLoc loc = std::visit([](const auto& n) { return n.loc; }, m.node);
        sink.error(loc, codes::kDuplicateMember,
                   "'" + m.name() + "' appears twice in aggregation '" + agg->name + "'");
      }
      const ReferenceField* rf = m.reference_field();
      if (rf && rf->extends_business_object && ++marked == 2) {
        sink.error(rf->loc, "OM2",
                   "aggregation '" + agg->name +
                       "' has more than one reference field marked as extending a "
                       "business object");
      }
    }
  }
}

void check_variants(const CommunicativeEvent& ev, DiagnosticSink& sink) {
  const auto fields = field_names(ev);
  std::set<std::string> ids;
  for (const auto& var : ev.variants) {
    if (!ids.insert(var.id).second) {
      sink.error(var.loc, codes::kVariant,
                 "variant '" + var.id + "' of " + ev.id + " is declared twice");
    }
    if (names::squeeze(var.condition).empty()) {
      sink.error(var.loc, codes::kVariant,
                 "variant '" + var.id + "' of " + ev.id + " has no condition");
      continue;
    }
    for (const auto& unknown : unknown_identifiers(var.condition, fields)) {
      sink.error(var.loc, "DM3",
                 "condition of variant '" + var.id + "' names '" + unknown +
                     "', which is not a field of " + ev.id);
    }
  }
}

void check_restrictions(const CommunicativeEvent& ev, DiagnosticSink& sink) {
  std::map<std::string, MessageVisit> by_path;
  for (auto& v : walk_message(ev)) by_path.emplace(v.path, v);
  for (const auto& r : ev.restrictions) {
    const auto resolved = resolve_subject(ev, r.subject);
    if (resolved.size() != 1) {
      sink.error(r.loc, codes::kRestriction,
                 "restriction subject '" + r.subject + "' " +
                     (resolved.empty() ? "names no element" : "is ambiguous") + " in " +
                     ev.id);
      continue;
    }
    const MessageVisit& v = by_path.at(resolved.front());
    if (v.member->data_field()) {
      sink.error(r.loc, codes::kRestriction,
                 "restriction subject '" + r.subject + "' is a data field");
    } else if (const ReferenceField* rf = v.member->reference_field()) {
      if (rf->extends_business_object) {
        sink.error(r.loc, codes::kRestriction,
                   "reference field '" + rf->name +
                       "' extends its business object and takes no cardinality");
      } else if (r.referenced_side.many) {
        sink.error(r.loc, "OM17",
                   "maximum cardinality on the referenced side of '" + rf->name +
                       "' must be 1");
      }
    } else {
      const bool iterated =
          !v.substructure->is_aggregation() || (v.parent && !v.parent->is_aggregation());
      if (r.referenced_side.many != iterated) {
        sink.error(r.loc, "OM14",
                   "maximum cardinality on the nested side of '" + v.substructure->name +
                       "' must be " + (iterated ? "M" : "1"));
      }
    }
  }
}

void check_identifier(const CommunicativeEvent& ev, DiagnosticSink& sink) {
  if (!ev.identifier) return;
  if (ev.identifier->empty()) {
    sink.error(ev.loc, codes::kIdentifier, "identifier of " + ev.id + " lists no fields");
  }
  for (const auto& name : *ev.identifier) {
    const auto it = std::find_if(
        ev.message.members.begin(), ev.message.members.end(), [&](const Member& m) {
          return m.data_field() &&
                 names::iequals(names::squeeze(m.name()), names::squeeze(name));
        });
    if (it == ev.message.members.end()) {
      sink.error(ev.loc, codes::kIdentifier,
                 "identifier field '" + name + "' is not a data field of '" +
                     ev.message.name + "'");
    }
  }
}

const DataField* data_field_at(const RequirementsModel& model, const std::string& path) {
  for (const auto* ev : model.all_events()) {
    if (path.rfind(ev->id + "/", 0) != 0) continue;
    for (const auto& v : walk_message(*ev)) {
      if (v.path == path && v.member) return v.member->data_field();
    }
  }
  return nullptr;
}

const Substructure* aggregation_at(const RequirementsModel& model,
                                   const std::string& path) {
  for (const auto* ev : model.all_events()) {
    if (path.rfind(ev->id + "/", 0) != 0) continue;
    for (const auto& v : walk_message(*ev)) {
      if (v.path != path) continue;
      return v.member ? v.substructure : &ev->message;
    }
  }
  return nullptr;
}

void check_annotations(const RequirementsModel& model, DiagnosticSink& sink) {
  const auto targets = annotation_targets(model);
  for (const auto& [path, entry] : model.annotations.entries) {
    const auto t = targets.find(path);
    if (t == targets.end()) {
      sink.error(entry.loc, codes::kAnnotation,
                 "annotation target '" + path + "' names no element of the model");
      continue;
    }
    for (const auto& [key, value] : entry.values) {
      if (!annotation_key_allowed(t->second, key)) {
        sink.error(value.loc, codes::kAnnotation,
                   "'" + key + "' does not apply to '" + path + "'");
        continue;
      }
      std::string problem;
      if (key == "null_allowed" || key == "requested" || key == "argument") {
        if (!parse_bool(value.value)) problem = "a yes/no value";
      } else if (key == "size") {
        if (!parse_positive_int(value.value)) problem = "a positive integer";
      } else if (key == "cardinality" || key == "opposite_cardinality") {
        if (!parse_cardinality(names::squeeze(value.value))) {
          problem = "a cardinality like 0:M";
        }
      } else if (key == "attr_type") {
        if (!parse_attr_type(value.value)) problem = "constant or variable";
      } else if (key == "data_type") {
        const auto dt = parse_data_type(value.value);
        if (!dt) {
          problem = "a known data type";
        } else if (const DataField* df = data_field_at(model, path)) {
          const auto row = allowed_data_types(df->domain);
          if (std::find(row.begin(), row.end(), *dt) == row.end()) {
            sink.error(value.loc, "OM10",
                       std::string("data type ") + to_string(*dt) +
                           " is not a conversion of the '" + to_string(df->domain) +
                           "' domain");
          }
        }
      } else if (key == "identifier") {
        const Substructure* agg = aggregation_at(model, path);
        std::string rest = value.value;
        std::size_t start = 0;
        while (agg && start <= rest.size()) {
          const std::size_t comma = rest.find(',', start);
          const std::string item = names::squeeze(rest.substr(
              start, comma == std::string::npos ? std::string::npos : comma - start));
          const bool known = std::any_of(
              agg->members.begin(), agg->members.end(), [&](const Member& m) {
                return m.data_field() &&
                       names::iequals(names::squeeze(m.name()), item);
              });
          if (!item.empty() && !known) {
            sink.error(value.loc, codes::kIdentifier,
                       "identifier field '" + item + "' is not a data field of '" +
                           agg->name + "'");
          }
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
      } else if (names::squeeze(value.value).empty()) {
        problem = "a non-empty name";
      }
      if (!problem.empty()) {
        sink.error(value.loc, codes::kAnnotation,
                   "annotation '" + key + " = " + value.value + "' is not " + problem);
      }
    }
  }
}

}  // namespace

void check_parse_invariants(const RequirementsModel& model, DiagnosticSink& sink) {
  check_duplicate_events(model, sink);
  check_business_objects(model, sink);
  check_merge_kinds(model, sink);
}

std::vector<Diagnostic> validate_model(const RequirementsModel& model) {
  DiagnosticSink sink;
  check_parse_invariants(model, sink);
  check_prefixes(model, sink);
  check_endpoints(model, sink);
  check_cycles(model, sink);
  for (const auto* ev : model.all_events()) {
    check_message(*ev, sink);
    check_variants(*ev, sink);
    check_restrictions(*ev, sink);
    check_identifier(*ev, sink);
  }
  check_annotations(model, sink);
  return sink.sorted();
}

}  // namespace carmc
