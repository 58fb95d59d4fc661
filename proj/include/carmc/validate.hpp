#pragma once

#include <vector>

#include "carmc/diagnostics.hpp"
#include "carmc/model.hpp"

namespace carmc {

/// The checks the parser enforces: duplicate event ids, undeclared
/// business objects in reference domains, mixed merge kinds.
void check_parse_invariants(const RequirementsModel& model, DiagnosticSink& sink);

/// Every invariant violation and cross-check failure, sorted. An empty
/// result means the model is derivable. Pure: equal models give equal lists.
std::vector<Diagnostic> validate_model(const RequirementsModel& model);

}  // namespace carmc
