#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carmc/model.hpp"

// OO-Method Object Model (class diagram) and the trace map linking it back
// to the requirements model.
namespace carmc {

enum class AttrType { constant, variable };

enum class DataType {
  Nat, Int, Real, Autonumeric, String, Text, Time, Date, DateTime, Bool, Image, Blob
};

const char* to_string(AttrType t);
const char* to_string(DataType t);
std::optional<AttrType> parse_attr_type(std::string_view text);
std::optional<DataType> parse_data_type(std::string_view text);

struct Attribute {
  std::string name;
  bool id = false;
  AttrType attr_type = AttrType::variable;
  DataType data_type = DataType::String;
  std::optional<int> size;  // String only
  bool requested = false;
  bool null_allowed = true;

  bool operator==(const Attribute&) const = default;
};

enum class ArgKind { data_valued, object_valued };

struct Argument {
  std::string name;
  ArgKind kind = ArgKind::data_valued;
  std::optional<DataType> data_type;  // data-valued
  std::string class_ref;              // object-valued
  std::optional<int> size;
  bool null_allowed = false;

  bool operator==(const Argument&) const = default;
};

enum class ServiceKind { creation, end_of_editing, edit, shared_insert, shared_delete };

const char* to_string(ServiceKind kind);

struct Service {
  std::string name;
  ServiceKind kind = ServiceKind::creation;
  std::vector<Argument> arguments;
  std::vector<std::string> agents;
  std::optional<std::string> shared_with;

  bool shared() const {
    return kind == ServiceKind::shared_insert || kind == ServiceKind::shared_delete;
  }
  bool operator==(const Service&) const = default;
};

struct Class {
  std::string name;
  std::vector<Attribute> attributes;
  std::vector<Service> services;

  const Attribute* find_attribute(std::string_view n) const;
  Attribute* find_attribute(std::string_view n);
  const Service* find_service(std::string_view n) const;
  Service* find_service(std::string_view n);
  bool operator==(const Class&) const = default;
};

enum class RelOrigin { nesting, reference, extension };

const char* to_string(RelOrigin origin);

/// `class_a card_a --- card_b class_b`: card_a constrains class_a instances
/// per class_b instance and vice versa. class_b is the nested or
/// referenced class.
struct StructuralRelationship {
  std::string class_a;
  std::string class_b;
  Cardinality card_a;
  Cardinality card_b;
  RelOrigin origin = RelOrigin::reference;
  std::string role;  // source field / substructure name

  bool operator==(const StructuralRelationship&) const = default;
};

struct Transaction {
  std::string name;
  std::string owner_class;
  std::vector<std::string> component_services;

  bool operator==(const Transaction&) const = default;
};

struct ObjectModel {
  std::vector<Class> classes;
  std::vector<StructuralRelationship> relationships;
  std::vector<Transaction> transactions;

  const Class* find_class(std::string_view name) const;
  Class* find_class(std::string_view name);
  const Transaction* find_transaction(std::string_view owner,
                                      std::string_view name) const;
  bool operator==(const ObjectModel&) const = default;
};

// Derived-element path conventions (used by the trace map and the CLI):
//   class         CLASS
//   attribute     CLASS.attr
//   service       CLASS.svc()
//   argument      CLASS.svc(p_arg)
//   relationship  CLASS_A--CLASS_B(role)
//   transaction   CLASS.txn[]
//   STD           std:CLASS, state std:CLASS/State,
//                 transition std:CLASS/From->To:service
namespace paths {
std::string attribute(std::string_view cls, std::string_view attr);
std::string service(std::string_view cls, std::string_view svc);
std::string argument(std::string_view cls, std::string_view svc, std::string_view arg);
std::string relationship(const StructuralRelationship& rel);
std::string transaction(std::string_view cls, std::string_view txn);
std::string std_diagram(std::string_view cls);
std::string state(std::string_view cls, std::string_view state);
std::string transition(std::string_view cls, std::string_view from,
                       std::string_view to, std::string_view service);
}  // namespace paths

enum class TraceKind {
  class_created,
  class_extended,
  attribute,
  relationship,
  service,
  argument,
  transaction,
  diagram,
  state,
  transition,
};

/// One traceability link. Only rule/source/derived are part of the
/// emitted report; the rest indexes the link for lookups.
struct TraceLink {
  std::string rule;     // "OM6", "DM2", ...
  std::string source;   // requirements path, e.g. "TREAT 1/MEDICAL TREATMENT"
  std::string derived;  // derived-element path
  TraceKind kind = TraceKind::class_created;
  std::string event;    // originating event id ("" for the start node)
  std::string owner;    // class the derived element belongs to
  std::string element;  // bare element name (attribute, service, ...)

  bool operator==(const TraceLink&) const = default;
};

class TraceMap {
 public:
  void add(TraceLink link) { links_.push_back(std::move(link)); }
  const std::vector<TraceLink>& links() const { return links_; }
  bool empty() const { return links_.empty(); }

  /// Events that created or extended `cls`.
  std::vector<std::string> events_for_class(std::string_view cls) const;
  bool knows_class(std::string_view cls) const;
  /// Links whose source or derived path equals `path`.
  std::vector<TraceLink> touching(std::string_view path) const;
  bool has_derived(std::string_view path) const;

 private:
  std::vector<TraceLink> links_;
};

}  // namespace carmc
