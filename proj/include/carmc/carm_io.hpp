#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "carmc/diagnostics.hpp"
#include "carmc/model.hpp"

// Reading and writing the textual `.carm` requirements format.
//
//   objects: Patient, Nurse, Medical treatment
//
//   process TREAT: Medical treatment
//     start -> TREAT 1
//     NUR 1 -> TREAT 1
//     TREAT 1 -> TREAT 2
//     TREAT 2 -> TREAT 1 [loopback]
//
//     event TREAT 1: A doctor prescribes a medical treatment
//       primary actor: Doctor
//       interface actor: Doctor
//       message:
//         MEDICAL TREATMENT =
//         < Treatment number +   | g | number  | 26411
//           Patient              | i | Patient | 842133-W
//         >
//       end message
//       restriction: Patient 1:1 0:M
//       identifier: Treatment number
//       variant A1: Final date > Initial date
//     end event
//   end process
//
//   annotations
//     [TREAT 1/MEDICAL TREATMENT/Comments]
//     size = 200
//   end annotations
//
// Message rows are `FIELD | OP | DOMAIN | EXAMPLE | EXTENDS`; the FIELD
// column uses the `= < + > { }` notation of message structures verbatim.
namespace carmc {

struct Source {
  std::string name;
  std::string text;
};

/// Parses one `.carm` text. Throws CompileError on syntax errors and on the
/// parse-level invariants (duplicate event id, unknown business object,
/// mixed merge kinds). Warnings go to `sink`.
RequirementsModel parse_model(std::string_view text, std::string_view file,
                              DiagnosticSink& sink);
RequirementsModel parse_model(std::string_view text,
                              std::string_view file = "<input>");

/// Parses several files into one model; cross-file references resolve.
RequirementsModel parse_sources(const std::vector<Source>& sources,
                                DiagnosticSink& sink);

/// Parses a standalone annotations file (`[path]` sections of
/// `key = value` lines).
AnnotationSet parse_annotations(std::string_view text, std::string_view file);

/// Canonical `.carm` rendering; parse_model(print_model(m)) == m.
std::string print_model(const RequirementsModel& model);

}  // namespace carmc
