#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "carmc/diagnostics.hpp"

// Requirements-model types: business processes, communicative events,
// precedences and message structures, as read from `.carm` files.
namespace carmc {

inline constexpr std::string_view kStartNode = "START";
inline constexpr std::string_view kEndNode = "END";

enum class BasicDomain { number, text, date, time, money };

const char* to_string(BasicDomain domain);
std::optional<BasicDomain> parse_basic_domain(std::string_view text);

/// min in {0,1}, max in {1, M}.
struct Cardinality {
  int min = 0;
  bool many = false;

  static Cardinality one_one() { return {1, false}; }
  static Cardinality zero_one() { return {0, false}; }
  static Cardinality zero_many() { return {0, true}; }
  static Cardinality one_many() { return {1, true}; }

  /// "0:M", "1:1", ...
  std::string str() const;
  bool operator==(const Cardinality&) const = default;
};

std::optional<Cardinality> parse_cardinality(std::string_view text);

struct DataField {
  std::string name;
  std::string op;  // "g", "i", "" or an unrecognised code kept verbatim
  BasicDomain domain = BasicDomain::text;
  std::string example;
  SourceLoc loc;

  bool operator==(const DataField&) const = default;
};

struct ReferenceField {
  std::string name;
  std::string op;
  std::string domain;  // business-object name
  std::string example;
  bool extends_business_object = false;
  SourceLoc loc;

  bool operator==(const ReferenceField&) const = default;
};

struct Member;

/// Aggregation `NAME = < a + b + ... >` or iteration `NAME = { SUB }`.
struct Substructure {
  enum class Kind { aggregation, iteration };

  Kind kind = Kind::aggregation;
  std::string name;
  /// Aggregation: fields and nested substructures in source order.
  /// Iteration: exactly one nested substructure.
  std::vector<Member> members;
  SourceLoc loc;

  bool is_aggregation() const { return kind == Kind::aggregation; }
  bool operator==(const Substructure& other) const;
};

struct Member {
  std::variant<DataField, ReferenceField, Substructure> node;

  const std::string& name() const;
  const DataField* data_field() const { return std::get_if<DataField>(&node); }
  const ReferenceField* reference_field() const {
    return std::get_if<ReferenceField>(&node);
  }
  const Substructure* substructure() const {
    return std::get_if<Substructure>(&node);
  }
  bool operator==(const Member&) const = default;
};

struct CardinalityRestriction {
  std::string subject;  // field or substructure name, or a '/' path suffix
  Cardinality referenced_side;
  std::optional<Cardinality> referrer_side;
  SourceLoc loc;

  bool operator==(const CardinalityRestriction&) const = default;
};

struct EventVariant {
  std::string id;
  std::string condition;
  SourceLoc loc;

  bool operator==(const EventVariant&) const = default;
};

struct CommunicativeEvent {
  std::string id;
  std::string name;
  std::string goals;
  std::string description;
  std::string primary_actor;
  std::string channel;
  std::string interface_actor;
  Substructure message;
  std::vector<CardinalityRestriction> restrictions;
  std::optional<std::vector<std::string>> identifier;
  std::string treatments;
  std::string linked_communications;
  std::vector<EventVariant> variants;
  SourceLoc loc;

  bool specialized() const { return !variants.empty(); }
  bool operator==(const CommunicativeEvent&) const = default;
};

enum class MergeKind { plain, or_merge, and_join };

const char* to_string(MergeKind kind);

struct PrecedenceRelation {
  std::string from;  // event id or kStartNode
  std::string to;    // event id or kEndNode
  MergeKind merge = MergeKind::plain;
  bool loopback = false;
  SourceLoc loc;

  bool from_start() const { return from == kStartNode; }
  bool to_end() const { return to == kEndNode; }
  bool operator==(const PrecedenceRelation&) const = default;
};

struct BusinessProcess {
  std::string id;
  std::string name;
  std::vector<CommunicativeEvent> events;
  std::vector<PrecedenceRelation> precedences;
  bool has_start_node = false;
  SourceLoc loc;

  bool operator==(const BusinessProcess&) const = default;
};

struct AnnotationValue {
  std::string value;
  SourceLoc loc;

  bool operator==(const AnnotationValue&) const = default;
};

/// Analyst decisions keyed by requirements-model path, e.g.
/// `TREAT 1/MEDICAL TREATMENT/Comments` -> {size: 200}.
struct AnnotationSet {
  struct Entry {
    SourceLoc loc;
    std::map<std::string, AnnotationValue> values;
    bool operator==(const Entry&) const = default;
  };
  std::map<std::string, Entry> entries;

  const AnnotationValue* find(const std::string& path,
                              const std::string& key) const;
  /// Later entries win key by key.
  void merge(const AnnotationSet& other);
  bool empty() const { return entries.empty(); }
  bool operator==(const AnnotationSet&) const = default;
};

struct RequirementsModel {
  std::vector<BusinessProcess> processes;
  std::set<std::string> business_objects;
  AnnotationSet annotations;

  const CommunicativeEvent* find_event(std::string_view id) const;
  const BusinessProcess* find_process(std::string_view id) const;
  /// Process that owns `event_id`.
  const BusinessProcess* owner_of(std::string_view event_id) const;
  /// Every precedence from every process, in declaration order.
  std::vector<const PrecedenceRelation*> all_precedences() const;
  std::vector<const CommunicativeEvent*> all_events() const;
  bool declares_business_object(std::string_view name) const;

  bool operator==(const RequirementsModel&) const = default;
};

/// Walks a message structure in pre-order. The callback receives the
/// '/'-joined path of each member (rooted at the event id) and the member.
struct MessageVisit {
  std::string path;
  const Member* member = nullptr;          // null for the root
  const Substructure* substructure = nullptr;  // set for substructures
  const Substructure* parent = nullptr;    // enclosing substructure
};

std::vector<MessageVisit> walk_message(const CommunicativeEvent& event);

/// Resolves a restriction subject against the event's structure: an exact
/// member name or a '/'-separated path suffix. Returns the full paths.
std::vector<std::string> resolve_subject(const CommunicativeEvent& event,
                                         std::string_view subject);

}  // namespace carmc
