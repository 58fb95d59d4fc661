#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

// Specialisation conditions of event variants: boolean expressions whose
// identifiers are message-structure field names (which may contain spaces).
namespace carmc {

struct ConditionPiece {
  enum class Kind { field, unknown, keyword, literal, op };
  Kind kind;
  std::string text;  // for fields: the matched field name as declared
};

/// Splits `text` into pieces, matching the longest run of words against
/// `field_names` (case-insensitive). Word runs that match no field and are
/// not keywords (and/or/not/true/false) or numbers become `unknown`.
std::vector<ConditionPiece> parse_condition(
    std::string_view text, const std::vector<std::string>& field_names);

/// Field names referenced by unknown identifiers; empty when valid.
std::vector<std::string> unknown_identifiers(
    std::string_view text, const std::vector<std::string>& field_names);

/// Re-renders the condition with each field replaced by `rename(field)`.
std::string render_condition(
    const std::vector<ConditionPiece>& pieces,
    const std::function<std::string(const std::string&)>& rename);

}  // namespace carmc
