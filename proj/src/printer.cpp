#include <sstream>

#include "carmc/carm_io.hpp"

namespace carmc {

namespace {

void print_substructure(std::ostringstream& os, const Substructure& sub,
                        int depth, bool trailing_plus);

std::string pad(int depth) { return std::string(6 + 2 * depth, ' '); }

void print_member(std::ostringstream& os, const Member& m, int depth,
                  bool trailing_plus) {
  if (const auto* sub = m.substructure()) {
    print_substructure(os, *sub, depth, trailing_plus);
    return;
  }
  const std::string plus = trailing_plus ? " +" : "";
  if (const auto* df = m.data_field()) {
    os << pad(depth) << df->name << plus << " | " << df->op << " | "
       << to_string(df->domain) << " | " << df->example << "\n";
    return;
  }
  const auto* rf = m.reference_field();
  os << pad(depth) << rf->name << plus << " | " << rf->op << " | " << rf->domain
     << " | " << rf->example;
  if (rf->extends_business_object) os << " | true";
  os << "\n";
}

void print_substructure(std::ostringstream& os, const Substructure& sub,
                        int depth, bool trailing_plus) {
  os << pad(depth) << sub.name << " =\n";
  if (sub.is_aggregation()) {
    os << pad(depth) << "<\n";
    for (std::size_t i = 0; i < sub.members.size(); ++i) {
      print_member(os, sub.members[i], depth + 1, i + 1 < sub.members.size());
    }
    os << pad(depth) << ">" << (trailing_plus ? " +" : "") << "\n";
  } else {
    os << pad(depth) << "{\n";
    for (const auto& m : sub.members) print_member(os, m, depth + 1, false);
    os << pad(depth) << "}" << (trailing_plus ? " +" : "") << "\n";
  }
}

void print_prose(std::ostringstream& os, const char* key,
                 const std::string& value) {
  if (!value.empty()) os << "    " << key << ": " << value << "\n";
}

void print_event(std::ostringstream& os, const CommunicativeEvent& ev) {
  os << "  event " << ev.id;
  if (!ev.name.empty()) os << ": " << ev.name;
  os << "\n";
  print_prose(os, "goals", ev.goals);
  print_prose(os, "description", ev.description);
  print_prose(os, "primary actor", ev.primary_actor);
  print_prose(os, "channel", ev.channel);
  print_prose(os, "interface actor", ev.interface_actor);
  os << "    message:\n";
  print_substructure(os, ev.message, 0, false);
  os << "    end message\n";
  for (const auto& r : ev.restrictions) {
    os << "    restriction: " << r.subject << " " << r.referenced_side.str();
    if (r.referrer_side) os << " " << r.referrer_side->str();
    os << "\n";
  }
  if (ev.identifier) {
    os << "    identifier: ";
    for (std::size_t i = 0; i < ev.identifier->size(); ++i) {
      if (i) os << ", ";
      os << (*ev.identifier)[i];
    }
    os << "\n";
  }
  print_prose(os, "treatments", ev.treatments);
  print_prose(os, "linked communications", ev.linked_communications);
  for (const auto& v : ev.variants) {
    os << "    variant " << v.id << ": " << v.condition << "\n";
  }
  os << "  end event\n";
}

std::string endpoint(const std::string& id) {
  if (id == kStartNode) return "start";
  if (id == kEndNode) return "end";
  return id;
}

}  // namespace

std::string print_model(const RequirementsModel& model) {
  std::ostringstream os;
  if (!model.business_objects.empty()) {
    os << "objects: ";
    bool first = true;
    for (const auto& bo : model.business_objects) {
      if (!first) os << ", ";
      os << bo;
      first = false;
    }
    os << "\n";
  }
  for (const auto& proc : model.processes) {
    os << "\nprocess " << proc.id;
    if (!proc.name.empty()) os << ": " << proc.name;
    os << "\n";
    bool start_edge = false;
    for (const auto& p : proc.precedences) start_edge |= p.from_start();
    if (proc.has_start_node && !start_edge) os << "  start\n";
    for (const auto& p : proc.precedences) {
      os << "  " << endpoint(p.from) << " -> " << endpoint(p.to);
      std::string flags;
      if (p.merge != MergeKind::plain) flags = to_string(p.merge);
      if (p.loopback) flags += flags.empty() ? "loopback" : ", loopback";
      if (!flags.empty()) os << " [" << flags << "]";
      os << "\n";
    }
    for (const auto& ev : proc.events) {
      os << "\n";
      print_event(os, ev);
    }
    os << "end process\n";
  }
  if (!model.annotations.empty()) {
    os << "\nannotations\n";
    for (const auto& [path, entry] : model.annotations.entries) {
      os << "  [" << path << "]\n";
      for (const auto& [key, value] : entry.values) {
        os << "  " << key << " = " << value.value << "\n";
      }
    }
    os << "end annotations\n";
  }
  return os.str();
}

}  // namespace carmc
