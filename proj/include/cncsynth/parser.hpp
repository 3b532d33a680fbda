#pragma once

// Textual DSL for models (.cnc), views (.cncview) and specifications
// (.cncspec), pretty printers and DOT export.

#include "cncsynth/core.hpp"
#include "cncsynth/speclang.hpp"

namespace cncsynth {

struct SourceSpan {
    std::string file;
    int line = 1;    // 1-based
    int column = 1;  // 1-based
    int length = 0;
};

struct Diagnostic {
    SourceSpan span;
    std::string message;
};

/// Syntax or semantic errors; what() lists every diagnostic as
/// "file:line:column: message".
class ParseError : public Error {
public:
    explicit ParseError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

struct ParseOptions {
    std::string file = "<input>";
    /// Accept several top components (client-server and layered models).
    bool allow_multiple_tops = false;
};

/// Parses a model file. A file holds one or more `component` blocks;
/// `component X;` inside a block makes X an immediate child whose body may
/// be given in its own top-level block. The result is validated.
CncModel parse_model(const std::string& text, const ParseOptions& options = {});

/// Parses `view Name { ... }`. Nesting denotes transitive containment and
/// a component may be mentioned in several places.
CncView parse_view(const std::string& text, const ParseOptions& options = {});

/// Parses a specification; views are listed by name but not loaded.
ViewSpec parse_spec(const std::string& text, const ParseOptions& options = {});

/// Parses a style as written after `style` in a specification, or `none`.
StyleConfig parse_style(const std::string& text, const ParseOptions& options = {});

std::string read_file(const std::string& path);

/// Reads a specification and every listed view from `<dir>/<View>.cncview`
/// next to the specification file.
ViewSpec load_spec(const std::string& path);
CncModel load_model(const std::string& path, bool allow_multiple_tops = false);
CncView load_view(const std::string& path);

std::string print_model(const CncModel& model);
std::string print_view(const CncView& view);
std::string print_spec(const ViewSpec& spec);

/// Clustered digraph: one cluster per component, one node per port and one
/// edge per connector.
std::string export_dot(const CncModel& model);

}  // namespace cncsynth
