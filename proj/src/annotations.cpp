#include "carmc/annotations.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "carmc/names.hpp"

namespace carmc {

std::map<std::string, AnnotationTarget> annotation_targets(
    const RequirementsModel& model) {
  std::map<std::string, AnnotationTarget> out;
  for (const auto* ev : model.all_events()) {
    for (const auto& v : walk_message(*ev)) {
      AnnotationTarget t;
      if (!v.member) {
        t = AnnotationTarget::root_aggregation;
      } else if (v.substructure) {
        t = v.substructure->is_aggregation() ? AnnotationTarget::nested_aggregation
                                             : AnnotationTarget::iteration;
      } else if (v.member->data_field()) {
        t = AnnotationTarget::data_field;
      } else {
        t = AnnotationTarget::reference_field;
      }
      out.emplace(v.path, t);
    }
  }
  return out;
}

bool annotation_key_allowed(AnnotationTarget target, std::string_view key) {
  static constexpr std::array<std::string_view, 6> kAggregation = {
      "class_name", "identifier", "creation_service", "end_of_editing_service",
      "edit_service", "transaction"};
  static constexpr std::array<std::string_view, 2> kCardinality = {
      "cardinality", "opposite_cardinality"};
  static constexpr std::array<std::string_view, 7> kDataField = {
      "attribute_name", "attr_type", "data_type", "size",
      "null_allowed", "requested", "argument_name"};
  static constexpr std::array<std::string_view, 2> kReference = {
      "argument", "argument_name"};
  auto in = [&](const auto& list) {
    return std::find(list.begin(), list.end(), key) != list.end();
  };
  switch (target) {
    case AnnotationTarget::root_aggregation:
      return in(kAggregation);
    case AnnotationTarget::nested_aggregation:
      return in(kAggregation) || in(kCardinality);
    case AnnotationTarget::iteration:
      return in(kCardinality);
    case AnnotationTarget::data_field:
      return in(kDataField);
    case AnnotationTarget::reference_field:
      return in(kReference) || in(kCardinality);
  }
  return false;
}

std::optional<bool> parse_bool(std::string_view text) {
  const std::string t = names::to_lower(names::squeeze(text));
  if (t == "true" || t == "yes") return true;
  if (t == "false" || t == "no") return false;
  return std::nullopt;
}

std::optional<int> parse_positive_int(std::string_view text) {
  const std::string t = names::squeeze(text);
  int value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || value <= 0) {
    return std::nullopt;
  }
  return value;
}

std::optional<std::string> Annotations::text(const std::string& path,
                                             const std::string& key) const {
  const auto* v = set_.find(path, key);
  if (!v) return std::nullopt;
  return v->value;
}

SourceLoc Annotations::loc(const std::string& path, const std::string& key) const {
  const auto* v = set_.find(path, key);
  return v ? v->loc : SourceLoc{};
}

namespace {

[[noreturn]] void bad_value(const AnnotationValue& v, const std::string& key,
                            const char* expected) {
  throw CompileError(v.loc, codes::kAnnotation,
                     "annotation '" + key + " = " + v.value + "' is not " + expected);
}

}  // namespace

std::optional<bool> Annotations::boolean(const std::string& path,
                                         const std::string& key) const {
  const auto* v = set_.find(path, key);
  if (!v) return std::nullopt;
  auto b = parse_bool(v->value);
  if (!b) bad_value(*v, key, "a yes/no value");
  return b;
}

std::optional<int> Annotations::positive_int(const std::string& path,
                                             const std::string& key) const {
  const auto* v = set_.find(path, key);
  if (!v) return std::nullopt;
  auto n = parse_positive_int(v->value);
  if (!n) bad_value(*v, key, "a positive integer");
  return n;
}

std::optional<Cardinality> Annotations::cardinality(const std::string& path,
                                                    const std::string& key) const {
  const auto* v = set_.find(path, key);
  if (!v) return std::nullopt;
  auto c = parse_cardinality(names::squeeze(v->value));
  if (!c) bad_value(*v, key, "a cardinality like 0:M");
  return c;
}

}  // namespace carmc
