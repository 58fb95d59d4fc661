#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "carmc/diagnostics.hpp"
#include "carmc/model.hpp"
#include "carmc/object_model.hpp"

namespace carmc {

struct DeriveOptions {
  /// Analyst-decision fallbacks (String size, missing cardinality
  /// restriction, edit-service naming) become errors instead of warnings.
  bool strict = false;
  /// Add self-loop transitions for edit and shared services to the STDs.
  bool self_loops = false;
};

inline constexpr int kDefaultStringSize = 100;

// -- Data-type conversion -------------------------------------------------

/// Data types a field domain may convert to (the basic-domain row plus the
/// Bool/Image/Blob types that no domain maps to by default).
std::vector<DataType> allowed_data_types(BasicDomain domain);

struct DataTypeChoice {
  std::optional<DataType> data_type;
  std::optional<int> size;
};

struct MappedType {
  DataType data_type = DataType::String;
  std::optional<int> size;
  /// True when String got kDefaultStringSize for lack of a choice.
  bool size_defaulted = false;
};

/// Converts a field domain to an attribute data type. Without a choice the
/// recommended type is used: number->Real (Autonumeric for `g` fields),
/// text->String, date/time->DateTime, money->Real.
/// Throws CompileError (OM10) for a choice outside the domain's row or a
/// size on a non-String type.
MappedType map_data_type(BasicDomain domain, std::string_view op,
                         const DataTypeChoice& choice = {},
                         const SourceLoc& where = {});

// -- Object Model derivation ----------------------------------------------

struct ObjectModelResult {
  ObjectModel om;
  TraceMap trace;
};

/// Incrementally integrates one class-diagram view per event.
class ObjectModelBuilder {
 public:
  ObjectModelBuilder(const RequirementsModel& model, DeriveOptions options,
                     DiagnosticSink& sink);
  ~ObjectModelBuilder();
  ObjectModelBuilder(const ObjectModelBuilder&) = delete;
  ObjectModelBuilder& operator=(const ObjectModelBuilder&) = delete;

  /// Walks the event's message structure; each aggregation either creates a
  /// class or, when it holds a reference field marked as extending a
  /// business object, extends the class derived for that object.
  void derive_event_view(const CommunicativeEvent& event);

  const ObjectModel& object_model() const { return om_; }
  const TraceMap& trace() const { return trace_; }
  ObjectModelResult finish() &&;

 private:
  struct EventContext;
  struct Registration {
    std::string class_name;
    std::string event;
    std::string path;
  };

  void visit_aggregation(const Substructure& agg, const std::string& path,
                         const std::optional<std::string>& parent_class,
                         const std::string& nesting_path, bool via_iteration,
                         EventContext& ctx);
  std::string create_class_view(const Substructure& agg, const std::string& path,
                                const std::optional<std::string>& parent_class,
                                const std::string& nesting_path,
                                bool via_iteration, EventContext& ctx);
  std::string extend_class_view(const Substructure& agg, const std::string& path,
                                const ReferenceField& marked,
                                const std::optional<std::string>& parent_class,
                                const std::string& nesting_path,
                                bool via_iteration, EventContext& ctx);
  void add_nesting_relationship(const std::string& parent_class,
                                const std::string& nested_class,
                                const Substructure& agg, const std::string& path,
                                const std::string& nesting_path,
                                bool via_iteration, EventContext& ctx);
  const Registration& referenced_class(const ReferenceField& field,
                                       const char* rule) const;
  void finish_event(EventContext& ctx);

  Class& class_ref(const std::string& name);
  std::string unique_class_name(std::string base, const SourceLoc& loc);
  std::string unique_attribute_name(const Class& cls, std::string base,
                                    const SourceLoc& loc);
  std::string unique_service_name(const std::vector<const Class*>& owners,
                                  std::string base, const SourceLoc& loc);
  Argument self_argument(const std::string& cls) const;
  void add_service(const std::string& cls, Service svc, const std::string& rule,
                   const std::string& source, const EventContext& ctx);
  void fallback(const SourceLoc& loc, const std::string& code,
                const std::string& message);
  bool precedes(const std::string& earlier, const std::string& later) const;

  const RequirementsModel& model_;
  DeriveOptions options_;
  DiagnosticSink& sink_;
  ObjectModel om_;
  TraceMap trace_;
  std::map<std::string, Registration> registry_;  // business-object key
  std::map<std::string, std::set<std::string>> ancestors_;
};

/// Folds derive_event_view over `order`, starting from an empty model.
/// Errors carry the failing event id.
ObjectModelResult derive_object_model(const RequirementsModel& model,
                                      const std::vector<std::string>& order,
                                      const DeriveOptions& options,
                                      DiagnosticSink& sink);
ObjectModelResult derive_object_model(const RequirementsModel& model,
                                      const std::vector<std::string>& order);

}  // namespace carmc
