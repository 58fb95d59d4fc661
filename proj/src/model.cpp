#include "carmc/model.hpp"

#include "carmc/names.hpp"

namespace carmc {

const char* to_string(BasicDomain domain) {
  switch (domain) {
    case BasicDomain::number:
      return "number";
    case BasicDomain::text:
      return "text";
    case BasicDomain::date:
      return "date";
    case BasicDomain::time:
      return "time";
    case BasicDomain::money:
      return "money";
  }
  return "text";
}

std::optional<BasicDomain> parse_basic_domain(std::string_view text) {
  const std::string t = names::to_lower(names::squeeze(text));
  if (t == "number") return BasicDomain::number;
  if (t == "text") return BasicDomain::text;
  if (t == "date") return BasicDomain::date;
  if (t == "time") return BasicDomain::time;
  if (t == "money") return BasicDomain::money;
  return std::nullopt;
}

std::string Cardinality::str() const {
  return std::to_string(min) + ":" + (many ? "M" : "1");
}

std::optional<Cardinality> parse_cardinality(std::string_view text) {
  if (text.size() != 3 || text[1] != ':') return std::nullopt;
  Cardinality c;
  if (text[0] == '0') {
    c.min = 0;
  } else if (text[0] == '1') {
    c.min = 1;
  } else {
    return std::nullopt;
  }
  if (text[2] == '1') {
    c.many = false;
  } else if (text[2] == 'M' || text[2] == 'm' || text[2] == 'N' ||
             text[2] == '*') {
    c.many = true;
  } else {
    return std::nullopt;
  }
  return c;
}

const char* to_string(MergeKind kind) {
  switch (kind) {
    case MergeKind::plain:
      return "plain";
    case MergeKind::or_merge:
      return "or";
    case MergeKind::and_join:
      return "and";
  }
  return "plain";
}

bool Substructure::operator==(const Substructure& other) const = default;

const std::string& Member::name() const {
  return std::visit([](const auto& n) -> const std::string& { return n.name; },
                    node);
}

const AnnotationValue* AnnotationSet::find(const std::string& path,
                                           const std::string& key) const {
  auto it = entries.find(path);
  if (it == entries.end()) return nullptr;
  auto jt = it->second.values.find(key);
  return jt == it->second.values.end() ? nullptr : &jt->second;
}

void AnnotationSet::merge(const AnnotationSet& other) {
  for (const auto& [path, entry] : other.entries) {
    auto [it, inserted] = entries.try_emplace(path, entry);
    if (inserted) continue;
    for (const auto& [key, value] : entry.values) {
      it->second.values.insert_or_assign(key, value);
    }
  }
}

const CommunicativeEvent* RequirementsModel::find_event(
    std::string_view id) const {
  for (const auto& p : processes) {
    for (const auto& e : p.events) {
      if (e.id == id) return &e;
    }
  }
  return nullptr;
}

const BusinessProcess* RequirementsModel::find_process(
    std::string_view id) const {
  for (const auto& p : processes) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const BusinessProcess* RequirementsModel::owner_of(
    std::string_view event_id) const {
  for (const auto& p : processes) {
    for (const auto& e : p.events) {
      if (e.id == event_id) return &p;
    }
  }
  return nullptr;
}

std::vector<const PrecedenceRelation*> RequirementsModel::all_precedences()
    const {
  std::vector<const PrecedenceRelation*> out;
  for (const auto& p : processes) {
    for (const auto& r : p.precedences) out.push_back(&r);
  }
  return out;
}

std::vector<const CommunicativeEvent*> RequirementsModel::all_events() const {
  std::vector<const CommunicativeEvent*> out;
  for (const auto& p : processes) {
    for (const auto& e : p.events) out.push_back(&e);
  }
  return out;
}

bool RequirementsModel::declares_business_object(std::string_view name) const {
  const std::string key = names::business_object_key(name);
  for (const auto& bo : business_objects) {
    if (names::business_object_key(bo) == key) return true;
  }
  return false;
}

namespace {

void walk(const Substructure& sub, const std::string& path,
          std::vector<MessageVisit>& out) {
  for (const auto& m : sub.members) {
    MessageVisit v{path + "/" + m.name(), &m, m.substructure(), &sub};
    out.push_back(v);
    if (const auto* nested = m.substructure()) walk(*nested, v.path, out);
  }
}

bool ends_with_path(std::string_view path, std::string_view suffix) {
  if (suffix.size() > path.size()) return false;
  if (path.substr(path.size() - suffix.size()) != suffix) return false;
  return path.size() == suffix.size() ||
         path[path.size() - suffix.size() - 1] == '/';
}

}  // namespace

std::vector<MessageVisit> walk_message(const CommunicativeEvent& event) {
  std::vector<MessageVisit> out;
  const std::string root = event.id + "/" + event.message.name;
  out.push_back(MessageVisit{root, nullptr, &event.message, nullptr});
  walk(event.message, root, out);
  return out;
}

std::vector<std::string> resolve_subject(const CommunicativeEvent& event,
                                         std::string_view subject) {
  const std::string wanted = names::squeeze(subject);
  std::vector<std::string> exact;
  std::vector<std::string> fuzzy;
  for (const auto& v : walk_message(event)) {
    if (!v.member) continue;
    if (ends_with_path(v.path, wanted)) {
      exact.push_back(v.path);
    } else {
      // Case-insensitive fallback on the last segment.
      const auto slash = v.path.rfind('/');
      if (names::iequals(v.path.substr(slash + 1), wanted)) {
        fuzzy.push_back(v.path);
      }
    }
  }
  return exact.empty() ? fuzzy : exact;
}

}  // namespace carmc
