#pragma once

#include "crn/kinetics.hpp"
#include "crn/network.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace crn {

struct SourceSpan {
  int line = 0;       // 1-based
  int col = 0;        // 1-based
  std::size_t byte_begin = 0;
  std::size_t byte_end = 0;
};

struct ParseDiagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
  SourceSpan span;
};

std::string format_diagnostic(const ParseDiagnostic& d);

// A parsed .crn file: the network, its kinetics, and the optional
// translate/free directives.
struct Model {
  Network net;
  KineticAssignment kin;
  std::map<int, CoefVec> translate_shifts;  // reaction index -> shift vector
  std::vector<int> free_species;            // species indices pinned as free
};

struct ParseResult {
  std::optional<Model> model;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return model.has_value(); }
  bool has_errors() const {
    for (auto& d : diagnostics)
      if (d.severity == ParseDiagnostic::Severity::Error) return true;
    return false;
  }
};

ParseResult parse_network(const std::string& text);

std::string render_network(const Model& model);

// Expression parser reused for parametrization files and tests. Symbols are
// resolved against the model's table; identifiers that look like species
// concentrations but match no species are reported.
struct ExprParseResult {
  ExprPtr expr;
  std::vector<ParseDiagnostic> diagnostics;
};
ExprParseResult parse_expression(const std::string& text, Model& model);

// Parametrization file: one "name = expr" per line, comments with '#'.
struct ParamFile {
  std::vector<std::pair<std::string, ExprPtr>> entries;
};
struct ParamFileResult {
  std::optional<ParamFile> file;
  std::vector<ParseDiagnostic> diagnostics;
};
ParamFileResult parse_param_file(const std::string& text, Model& model);

} // namespace crn
