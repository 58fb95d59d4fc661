#pragma once

#include <string>
#include <string_view>

// Naming conventions shared by the derivation stages.
namespace carmc::names {

/// Collapses runs of whitespace to one space and trims both ends.
std::string squeeze(std::string_view text);

/// "Medical treatment" -> "MEDICAL_TREATMENT"
std::string class_name(std::string_view text);

/// "Treatment number" -> "treatment_number"
std::string attribute_name(std::string_view text);

/// "Medical treatment" / "MEDICAL_TREATMENT" -> "MedicalTreatment"
std::string camel(std::string_view text);

/// "TREAT 1" -> "Treat1"
std::string event_token(std::string_view event_id);

/// "A doctor prescribes a medical treatment" ->
/// "a_doctor_prescribes_a_medical_treatment"
std::string snake(std::string_view text);

/// Key used to match a reference-field domain against aggregation names.
inline std::string business_object_key(std::string_view text) {
  return class_name(text);
}

std::string to_lower(std::string_view text);
std::string to_upper(std::string_view text);

bool iequals(std::string_view a, std::string_view b);

}  // namespace carmc::names
