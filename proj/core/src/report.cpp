#include "sosmc/report.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "sosmc/errors.hpp"

namespace sosmc {

const char* verdictName(EstimateVerdict v) {
  switch (v) {
    case EstimateVerdict::Holds: return "holds";
    case EstimateVerdict::Violated: return "violated";
    case EstimateVerdict::Undecided: return "undecided";
  }
  return "?";
}

namespace {

std::string percent(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f %%", p * 100.0);
  return buf;
}

}  // namespace

std::string emitReport(const Estimate& e, ReportFormat format) {
  std::ostringstream os;
  if (format == ReportFormat::Text) {
    os << "runs:      " << e.n << "\n";
    os << "successes: " << e.successes << "\n";
    os << "p-hat:     " << percent(e.pHat) << "\n";
    if (e.epsilon) os << "epsilon:   " << formatNumber(*e.epsilon) << "\n";
    if (e.delta) os << "delta:     " << formatNumber(*e.delta) << "\n";
    os << "verdict:   " << verdictName(e.verdict) << "\n";
    os << "seed:      " << e.seed << "\n";
    return os.str();
  }
  os << "n " << e.n << "\n";
  os << "successes " << e.successes << "\n";
  os << "phat " << formatNumber(e.pHat) << "\n";
  if (e.epsilon) os << "epsilon " << formatNumber(*e.epsilon) << "\n";
  if (e.delta) os << "delta " << formatNumber(*e.delta) << "\n";
  os << "verdict " << verdictName(e.verdict) << "\n";
  os << "seed " << e.seed << "\n";
  os << "run-seeds";
  for (auto s : e.runSeeds) os << ' ' << s;
  os << "\n";
  return os.str();
}

Estimate parseRecords(std::string_view text) {
  Estimate e;
  bool sawN = false, sawSuccesses = false, sawVerdict = false;
  std::size_t pos = 0;
  int line = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view row = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line;
    if (row.empty()) continue;
    std::size_t space = row.find(' ');
    std::string_view key = space == std::string_view::npos ? row : row.substr(0, space);
    std::string_view rest =
        space == std::string_view::npos ? std::string_view{} : row.substr(space + 1);
    auto parseDouble = [&](std::string_view s) {
      double v = 0;
      auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc{}) throw ParseError("bad number", line, 1);
      return v;
    };
    if (key == "n") {
      e.n = static_cast<std::int64_t>(parseDouble(rest));
      sawN = true;
    } else if (key == "successes") {
      e.successes = static_cast<std::int64_t>(parseDouble(rest));
      sawSuccesses = true;
    } else if (key == "phat") {
      e.pHat = parseDouble(rest);
    } else if (key == "epsilon") {
      e.epsilon = parseDouble(rest);
    } else if (key == "delta") {
      e.delta = parseDouble(rest);
    } else if (key == "verdict") {
      sawVerdict = true;
      if (rest == "holds") {
        e.verdict = EstimateVerdict::Holds;
      } else if (rest == "violated") {
        e.verdict = EstimateVerdict::Violated;
      } else if (rest == "undecided") {
        e.verdict = EstimateVerdict::Undecided;
      } else {
        throw ParseError("unknown verdict '" + std::string(rest) + "'", line, 1);
      }
    } else if (key == "seed") {
      std::uint64_t s = 0;
      auto res = std::from_chars(rest.data(), rest.data() + rest.size(), s);
      if (res.ec != std::errc{}) throw ParseError("bad seed", line, 1);
      e.seed = s;
    } else if (key == "run-seeds") {
      const char* p = rest.data();
      const char* end = rest.data() + rest.size();
      while (p < end) {
        while (p < end && *p == ' ') ++p;
        if (p >= end) break;
        std::uint64_t s = 0;
        auto res = std::from_chars(p, end, s);
        if (res.ec != std::errc{}) throw ParseError("bad run seed", line, 1);
        e.runSeeds.push_back(s);
        p = res.ptr;
      }
    } else {
      throw ParseError("unknown record key '" + std::string(key) + "'", line, 1);
    }
  }
  if (!sawN || !sawSuccesses || !sawVerdict) {
    throw ParseError("record block is missing n/successes/verdict", line, 1);
  }
  return e;
}

}  // namespace sosmc
