#include "carmc/diagnostics.hpp"

#include <algorithm>
#include <tuple>

namespace carmc {

const char* to_string(Severity severity) {
  switch (severity) {
    case Severity::note:
      return "note";
    case Severity::warning:
      return "warning";
    case Severity::error:
      return "error";
  }
  return "error";
}

std::string Diagnostic::format() const {
  std::string out = to_string(severity);
  out += ' ';
  out += loc.file.empty() ? "<input>" : loc.file;
  out += ':' + std::to_string(loc.line) + ':' + std::to_string(loc.col);
  out += ' ';
  out += code;
  out += ' ';
  out += message;
  return out;
}

void DiagnosticSink::add(Severity severity, SourceLoc loc, std::string code,
                         std::string message) {
  diags_.push_back(
      Diagnostic{severity, std::move(loc), std::move(code), std::move(message)});
}

void DiagnosticSink::append(const std::vector<Diagnostic>& diags) {
  diags_.insert(diags_.end(), diags.begin(), diags.end());
}

bool DiagnosticSink::has_errors() const { return error_count() > 0; }

std::size_t DiagnosticSink::error_count() const {
  return static_cast<std::size_t>(
      std::count_if(diags_.begin(), diags_.end(), [](const Diagnostic& d) {
        return d.severity == Severity::error;
      }));
}

std::vector<Diagnostic> DiagnosticSink::sorted() const {
  auto out = diags_;
  sort_diagnostics(out);
  return out;
}

void sort_diagnostics(std::vector<Diagnostic>& diags) {
  std::stable_sort(diags.begin(), diags.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return std::tie(a.loc.file, a.loc.line, a.code) <
                            std::tie(b.loc.file, b.loc.line, b.code);
                   });
}

namespace {

std::string summarize(const std::vector<Diagnostic>& diags) {
  if (diags.empty()) return "compilation failed";
  std::string what = diags.front().format();
  if (diags.size() > 1) {
    what += " (and " + std::to_string(diags.size() - 1) + " more)";
  }
  return what;
}

}  // namespace

CompileError::CompileError(std::vector<Diagnostic> diags)
    : std::runtime_error(summarize(diags)), diags_(std::move(diags)) {
  if (diags_.empty()) {
    diags_.push_back(Diagnostic{Severity::error, {}, "E", "compilation failed"});
  }
}

CompileError::CompileError(SourceLoc loc, std::string code, std::string message)
    : CompileError(std::vector<Diagnostic>{Diagnostic{
          Severity::error, std::move(loc), std::move(code), std::move(message)}}) {}

}  // namespace carmc
