#pragma once

#include "causa/ontology.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace causa {

struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int length = 0;
  bool operator==(const SourceSpan&) const = default;
};

struct ParseDiagnostic {
  Severity severity = Severity::error;
  SourceSpan span;
  std::string message;
  std::string rule_id;
};

/// "file:line:column: error[RULE]: message"
std::string format(const ParseDiagnostic& d);

struct ParseResult {
  std::optional<Model> model;  // absent iff some diagnostic is an error
  std::vector<ParseDiagnostic> diagnostics;

  [[nodiscard]] bool ok() const { return model.has_value(); }
};

/// Parses a .cm document and validates the resulting model. Structural and
/// link-level errors (direct event->event is CLAIM3) reject the model.
ParseResult parse(std::string_view text, const std::string& file = "<input>");

/// Reads and parses a file. Throws Error("IO") when it cannot be read.
ParseResult parse_file(const std::filesystem::path& path);

/// Canonical text: fixed header, declarations grouped by kind and sorted by
/// id, attributes in a fixed order. parse(serialize(m)) reproduces m.
std::string serialize(const Model& model);

} // namespace causa
