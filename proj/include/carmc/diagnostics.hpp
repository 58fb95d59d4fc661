#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace carmc {

/// Position of an element in a `.carm` or annotations file (1-based).
struct SourceLoc {
  std::string file;
  int line = 0;
  int col = 0;

  // Locations are metadata: two structurally identical models parsed from
  // differently laid-out text still compare equal.
  friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

enum class Severity { note, warning, error };

// Diagnostic codes. Derivation-rule violations use the rule id ("OM2",
// "DM4", ...) as their code.
namespace codes {
inline constexpr const char* kSyntax = "CARM-SYNTAX";
inline constexpr const char* kDuplicateEvent = "CARM-DUP-EVENT";
inline constexpr const char* kUnknownObject = "CARM-UNKNOWN-OBJECT";
inline constexpr const char* kMergeKind = "CARM-MERGE";
inline constexpr const char* kOpCode = "CARM-OP";
inline constexpr const char* kDuplicateMember = "CARM-DUP-MEMBER";
inline constexpr const char* kAnnotation = "CARM-ANNOTATION";
inline constexpr const char* kRestriction = "CARM-RESTRICTION";
inline constexpr const char* kPrefix = "CARM-PREFIX";
inline constexpr const char* kVariant = "CARM-VARIANT";
inline constexpr const char* kIdentifier = "CARM-IDENTIFIER";
inline constexpr const char* kIo = "CARM-IO";
}  // namespace codes

const char* to_string(Severity severity);

struct Diagnostic {
  Severity severity = Severity::error;
  SourceLoc loc;
  std::string code;
  std::string message;

  /// `SEVERITY file:line:col CODE message`
  std::string format() const;
};

/// Collects diagnostics emitted by the pipeline stages.
class DiagnosticSink {
 public:
  void add(Severity severity, SourceLoc loc, std::string code,
           std::string message);
  void error(SourceLoc loc, std::string code, std::string message) {
    add(Severity::error, std::move(loc), std::move(code), std::move(message));
  }
  void warning(SourceLoc loc, std::string code, std::string message) {
    add(Severity::warning, std::move(loc), std::move(code), std::move(message));
  }
  void append(const std::vector<Diagnostic>& diags);

  bool has_errors() const;
  std::size_t error_count() const;
  const std::vector<Diagnostic>& all() const { return diags_; }

  /// Diagnostics in the stable reporting order: by file, line, then code.
  std::vector<Diagnostic> sorted() const;

 private:
  std::vector<Diagnostic> diags_;
};

void sort_diagnostics(std::vector<Diagnostic>& diags);

/// Thrown when a stage cannot produce its result. Carries every error the
/// stage found, so callers can print them all.
class CompileError : public std::runtime_error {
 public:
  explicit CompileError(std::vector<Diagnostic> diags);
  CompileError(SourceLoc loc, std::string code, std::string message);

  const std::vector<Diagnostic>& diagnostics() const { return diags_; }
  /// Code of the first diagnostic.
  const std::string& code() const { return diags_.front().code; }

 private:
  std::vector<Diagnostic> diags_;
};

}  // namespace carmc
