#include "carmc/object_model.hpp"

#include <algorithm>

#include "carmc/names.hpp"

namespace carmc {

const char* to_string(AttrType t) {
  return t == AttrType::constant ? "constant" : "variable";
}

const char* to_string(DataType t) {
  switch (t) {
    case DataType::Nat: return "Nat";
    case DataType::Int: return "Int";
    case DataType::Real: return "Real";
    case DataType::Autonumeric: return "Autonumeric";
    case DataType::String: return "String";
    case DataType::Text: return "Text";
    case DataType::Time: return "Time";
    case DataType::Date: return "Date";
    case DataType::DateTime: return "DateTime";
    case DataType::Bool: return "Bool";
    case DataType::Image: return "Image";
    case DataType::Blob: return "Blob";
  }
  return "String";
}

std::optional<AttrType> parse_attr_type(std::string_view text) {
  const std::string t = names::to_lower(names::squeeze(text));
  if (t == "constant") return AttrType::constant;
  if (t == "variable") return AttrType::variable;
  return std::nullopt;
}

std::optional<DataType> parse_data_type(std::string_view text) {
  const std::string t = names::to_lower(names::squeeze(text));
  for (auto dt : {DataType::Nat, DataType::Int, DataType::Real,
                  DataType::Autonumeric, DataType::String, DataType::Text,
                  DataType::Time, DataType::Date, DataType::DateTime,
                  DataType::Bool, DataType::Image, DataType::Blob}) {
    if (t == names::to_lower(to_string(dt))) return dt;
  }
  if (t == "date time" || t == "date_time") return DataType::DateTime;
  if (t == "autonomic") return DataType::Autonumeric;
  return std::nullopt;
}

const char* to_string(ServiceKind kind) {
  switch (kind) {
    case ServiceKind::creation: return "creation";
    case ServiceKind::end_of_editing: return "end_of_editing";
    case ServiceKind::edit: return "edit";
    case ServiceKind::shared_insert: return "shared_insert";
    case ServiceKind::shared_delete: return "shared_delete";
  }
  return "creation";
}

const char* to_string(RelOrigin origin) {
  switch (origin) {
    case RelOrigin::nesting: return "nesting";
    case RelOrigin::reference: return "reference";
    case RelOrigin::extension: return "extension";
  }
  return "reference";
}

namespace {

template <typename Vec>
auto find_named(Vec& items, std::string_view name) -> decltype(&items[0]) {
  for (auto& item : items) {
    if (item.name == name) return &item;
  }
  return nullptr;
}

}  // namespace

const Attribute* Class::find_attribute(std::string_view n) const {
  return find_named(attributes, n);
}
Attribute* Class::find_attribute(std::string_view n) {
  return find_named(attributes, n);
}
const Service* Class::find_service(std::string_view n) const {
  return find_named(services, n);
}
Service* Class::find_service(std::string_view n) {
  return find_named(services, n);
}

const Class* ObjectModel::find_class(std::string_view name) const {
  return find_named(classes, name);
}
Class* ObjectModel::find_class(std::string_view name) {
  return find_named(classes, name);
}

const Transaction* ObjectModel::find_transaction(std::string_view owner,
                                                 std::string_view name) const {
  for (const auto& t : transactions) {
    if (t.owner_class == owner && t.name == name) return &t;
  }
  return nullptr;
}

namespace paths {

std::string attribute(std::string_view cls, std::string_view attr) {
  return std::string(cls) + "." + std::string(attr);
}

std::string service(std::string_view cls, std::string_view svc) {
  return std::string(cls) + "." + std::string(svc) + "()";
}

std::string argument(std::string_view cls, std::string_view svc,
                     std::string_view arg) {
  return std::string(cls) + "." + std::string(svc) + "(" + std::string(arg) + ")";
}

std::string relationship(const StructuralRelationship& rel) {
  return rel.class_a + "--" + rel.class_b + "(" + rel.role + ")";
}

std::string transaction(std::string_view cls, std::string_view txn) {
  return std::string(cls) + "." + std::string(txn) + "[]";
}

std::string std_diagram(std::string_view cls) {
  return "std:" + std::string(cls);
}

std::string state(std::string_view cls, std::string_view state) {
  return std_diagram(cls) + "/" + std::string(state);
}

std::string transition(std::string_view cls, std::string_view from,
                       std::string_view to, std::string_view service) {
  return std_diagram(cls) + "/" + std::string(from) + "->" + std::string(to) +
         ":" + std::string(service);
}

}  // namespace paths

std::vector<std::string> TraceMap::events_for_class(std::string_view cls) const {
  std::vector<std::string> out;
  for (const auto& l : links_) {
    if ((l.kind == TraceKind::class_created ||
         l.kind == TraceKind::class_extended) &&
        l.owner == cls &&
        std::find(out.begin(), out.end(), l.event) == out.end()) {
      out.push_back(l.event);
    }
  }
  return out;
}

bool TraceMap::knows_class(std::string_view cls) const {
  return std::any_of(links_.begin(), links_.end(), [&](const TraceLink& l) {
    return l.kind == TraceKind::class_created && l.owner == cls;
  });
}

std::vector<TraceLink> TraceMap::touching(std::string_view path) const {
  std::vector<TraceLink> out;
  for (const auto& l : links_) {
    if (l.source == path || l.derived == path) out.push_back(l);
  }
  return out;
}

bool TraceMap::has_derived(std::string_view path) const {
  return std::any_of(links_.begin(), links_.end(),
                     [&](const TraceLink& l) { return l.derived == path; });
}

}  // namespace carmc
