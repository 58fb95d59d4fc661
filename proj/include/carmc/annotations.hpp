#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "carmc/diagnostics.hpp"
#include "carmc/model.hpp"

// Which analyst-decision keys apply to which requirements element.
//
//   aggregation      class_name, identifier, creation_service,
//                    end_of_editing_service, edit_service, transaction,
//                    cardinality, opposite_cardinality (nested only)
//   iteration        cardinality, opposite_cardinality
//   data field       attribute_name, attr_type, data_type, size,
//                    null_allowed, requested, argument_name
//   reference field  cardinality, opposite_cardinality, argument,
//                    argument_name
namespace carmc {

enum class AnnotationTarget {
  root_aggregation,
  nested_aggregation,
  iteration,
  data_field,
  reference_field,
};

/// Every annotatable path of the model mapped to its element kind.
std::map<std::string, AnnotationTarget> annotation_targets(
    const RequirementsModel& model);

bool annotation_key_allowed(AnnotationTarget target, std::string_view key);

std::optional<bool> parse_bool(std::string_view text);
std::optional<int> parse_positive_int(std::string_view text);

/// Typed reads over an AnnotationSet. Malformed values raise CompileError
/// with code CARM-ANNOTATION at the value's location.
class Annotations {
 public:
  explicit Annotations(const AnnotationSet& set) : set_(set) {}

  std::optional<std::string> text(const std::string& path,
                                  const std::string& key) const;
  std::optional<bool> boolean(const std::string& path, const std::string& key) const;
  std::optional<int> positive_int(const std::string& path,
                                  const std::string& key) const;
  std::optional<Cardinality> cardinality(const std::string& path,
                                         const std::string& key) const;
  SourceLoc loc(const std::string& path, const std::string& key) const;

 private:
  const AnnotationSet& set_;
};

}  // namespace carmc
