#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "sosmc/model.hpp"

namespace sosmc {

/// Parses and validates a model document (.sosm). Throws ParseError with
/// line/column on syntax errors and SemanticError naming the offending
/// instance or attribute on consistency violations.
SosModel loadModel(std::string_view text);
SosModel loadModelFile(const std::string& path);

/// Canonical document for a model; loadModel(saveModel(m)) is semantically
/// identical to m.
std::string saveModel(const SosModel& model);

/// Trace records (.trace): one line per sample, "<time> key=value ...",
/// keys in a fixed order shared by all records. Byte-stable for a fixed
/// simulation seed.
void writeTrace(std::ostream& os, const TimedTrace& trace);
std::string traceToString(const TimedTrace& trace);
void writeTraceFile(const std::string& path, const TimedTrace& trace);

TimedTrace parseTrace(std::string_view text);
TimedTrace readTraceFile(const std::string& path);

/// Reads a whole file into memory; throws Error when unreadable.
std::string readFile(const std::string& path);
void writeFile(const std::string& path, std::string_view content);

}  // namespace sosmc
