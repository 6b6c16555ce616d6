#include <charconv>
#include <fstream>
#include <sstream>

#include "sosmc/errors.hpp"
#include "sosmc/model_io.hpp"

namespace sosmc {

namespace {

Value inferValue(std::string_view text, int line) {
  if (text == "true") return Value(true);
  if (text == "false") return Value(false);
  char first = text.empty() ? '\0' : text.front();
  if (std::isdigit(static_cast<unsigned char>(first)) || first == '-' ||
      first == '+' || first == '.') {
    bool integral = text.find('.') == std::string_view::npos &&
                    text.find('e') == std::string_view::npos &&
                    text.find('E') == std::string_view::npos &&
                    text.find("inf") == std::string_view::npos &&
                    text.find("nan") == std::string_view::npos;
    if (integral) {
      std::int64_t i = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), i);
      if (res.ec == std::errc{} && res.ptr == text.data() + text.size()) {
        return Value(i);
      }
    }
    double d = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), d);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
      throw ParseError("bad numeric value '" + std::string(text) + "'", line, 1);
    }
    return Value(d);
  }
  return Value(Symbol{std::string(text)});
}

}  // namespace

void writeTrace(std::ostream& os, const TimedTrace& trace) {
  for (const auto& s : trace.samples) {
    os << formatNumber(s.time);
    for (std::size_t i = 0; i < trace.layout->keys.size(); ++i) {
      os << ' ' << trace.layout->keys[i] << '=' << s.values[i].toString();
    }
    os << '\n';
  }
}

std::string traceToString(const TimedTrace& trace) {
  std::ostringstream os;
  writeTrace(os, trace);
  return os.str();
}

void writeTraceFile(const std::string& path, const TimedTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  writeTrace(out, trace);
  if (!out) throw Error("write failed for '" + path + "'");
}

TimedTrace parseTrace(std::string_view text) {
  TimedTrace trace;
  std::vector<std::string> keys;
  int line = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view row = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line;
    if (row.empty() || row.front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t f = 0;
    while (f < row.size()) {
      while (f < row.size() && row[f] == ' ') ++f;
      std::size_t g = f;
      while (g < row.size() && row[g] != ' ') ++g;
      if (g > f) fields.push_back(row.substr(f, g - f));
      f = g;
    }
    if (fields.empty()) continue;

    StateValuation s;
    double t = 0;
    auto res = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), t);
    if (res.ec != std::errc{} || res.ptr != fields[0].data() + fields[0].size()) {
      throw ParseError("record must start with a time", line, 1);
    }
    s.time = t;

    bool firstRecord = trace.samples.empty();
    std::vector<Value> values;
    values.reserve(firstRecord ? fields.size() : keys.size());
    for (std::size_t i = 1; i < fields.size(); ++i) {
      std::string_view kv = fields[i];
      std::size_t eq = kv.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError("expected key=value, got '" + std::string(kv) + "'", line, 1);
      }
      std::string_view key = kv.substr(0, eq);
      if (firstRecord) {
        keys.emplace_back(key);
      } else {
        std::size_t idx = i - 1;
        if (idx >= keys.size() || keys[idx] != key) {
          throw ParseError("record key order differs from the first record at '" +
                               std::string(key) + "'",
                           line, 1);
        }
      }
      values.push_back(inferValue(kv.substr(eq + 1), line));
    }
    if (!firstRecord && values.size() != keys.size()) {
      throw ParseError("record has " + std::to_string(values.size()) +
                           " values, expected " + std::to_string(keys.size()),
                       line, 1);
    }
    s.values = std::move(values);
    trace.samples.push_back(std::move(s));
  }
  if (trace.samples.empty()) throw ParseError("trace has no records", line, 1);
  trace.layout = Layout::fromKeys(std::move(keys));
  for (auto& s : trace.samples) s.layout = trace.layout;
  validateTrace(trace);
  return trace;
}

TimedTrace readTraceFile(const std::string& path) {
  return parseTrace(readFile(path));
}

}  // namespace sosmc
