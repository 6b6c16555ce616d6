#include <cmath>
#include <sstream>

#include "sosmc/gcsl_parser.hpp"
#include "sosmc/value.hpp"

namespace sosmc {

namespace {

void printTime(std::ostream& os, double t, const TimeScale& scale) {
  if (std::isinf(t)) {
    os << "+inf";
    return;
  }
  os << formatNumber(t) << ' ' << scale.baseUnit;
}

void printInterval(std::ostream& os, const TimeInterval& iv, const TimeScale& scale) {
  os << (iv.loClosed ? '[' : '(');
  printTime(os, iv.lo, scale);
  os << " - ";
  if (iv.hiInfinite) {
    os << "+inf";
  } else {
    printTime(os, iv.hi, scale);
  }
  os << (iv.hiClosed ? ']' : ')');
}

void printSlot(std::ostream& os, const OclExprPtr& e) { os << '[' << printOcl(e) << ']'; }

void printPattern(std::ostream& os, const PatternExpr& p, const TimeScale& scale) {
  switch (p.kind) {
    case PatternKind::WheneverHoldsDuring:
      os << "whenever ";
      printSlot(os, p.prop);
      os << " occurs ";
      printSlot(os, p.prop1);
      os << " holds during following ";
      printInterval(os, p.intervals[0], scale);
      break;
    case PatternKind::ImpliesForever:
      printSlot(os, p.prop);
      os << " implies ";
      printSlot(os, p.prop1);
      os << " holds forever";
      break;
    case PatternKind::Always:
      os << "always ";
      printSlot(os, p.prop);
      break;
    case PatternKind::WheneverHolds:
      os << "whenever ";
      printSlot(os, p.prop);
      os << " occurs ";
      printSlot(os, p.prop1);
      os << " holds";
      break;
    case PatternKind::WheneverImpliesDuring:
      os << "whenever ";
      printSlot(os, p.prop);
      os << " occurs ";
      printSlot(os, p.prop1);
      os << " implies ";
      printSlot(os, p.prop2);
      os << " during following ";
      printInterval(os, p.intervals[0], scale);
      break;
    case PatternKind::WheneverNotDuring:
      os << "whenever ";
      printSlot(os, p.prop);
      os << " occurs ";
      printSlot(os, p.prop1);
      os << " does not occur during following ";
      printInterval(os, p.intervals[0], scale);
      break;
    case PatternKind::WheneverWithin:
      os << "whenever ";
      printSlot(os, p.prop);
      os << " occurs ";
      printSlot(os, p.prop1);
      os << " occurs within ";
      printInterval(os, p.intervals[0], scale);
      break;
    case PatternKind::OccursRaises:
      printSlot(os, p.prop);
      os << " occurs [" << p.count << "] times during ";
      printInterval(os, p.intervals[0], scale);
      os << " raises ";
      printSlot(os, p.prop1);
      break;
    case PatternKind::OccursAtMost:
      printSlot(os, p.prop);
      os << " occurs at most [" << p.count << "] times during ";
      printInterval(os, p.intervals[0], scale);
      break;
    case PatternKind::DuringRaises:
      printSlot(os, p.prop1);
      os << " during ";
      printInterval(os, p.intervals[0], scale);
      os << " raises ";
      printSlot(os, p.prop2);
      break;
    case PatternKind::DuringImpliesThen:
      printSlot(os, p.prop);
      os << " during ";
      printInterval(os, p.intervals[0], scale);
      os << " implies ";
      printSlot(os, p.prop1);
      os << " during ";
      printInterval(os, p.intervals[1], scale);
      os << " then ";
      printSlot(os, p.prop2);
      os << " during ";
      printInterval(os, p.intervals[2], scale);
      break;
  }
}

std::string joinSteps(const std::vector<std::string>& steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += '.';
    out += steps[i];
  }
  return out;
}

void printProperty(std::ostream& os, const PropertyPtr& p, const TimeScale& scale) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Quantified>) {
          os << joinSteps(x.collection.steps)
             << (x.forAll ? "->forAll(" : "->exists(") << x.var << " | ";
          printProperty(os, x.body, scale);
          os << ')';
        } else if constexpr (std::is_same_v<T, PatternExpr>) {
          printPattern(os, x, scale);
        } else if constexpr (std::is_same_v<T, OclExprPtr>) {
          os << printOcl(x);
        } else {
          // Unfolded connective; diagnostic rendering only.
          static_assert(std::is_same_v<T, PropConnective>);
          const char* sep = x.conjunction ? " and " : " or ";
          os << '(';
          for (std::size_t i = 0; i < x.parts.size(); ++i) {
            if (i) os << sep;
            printProperty(os, x.parts[i], scale);
          }
          os << ')';
        }
      },
      p->node);
}

}  // namespace

std::string prettyPrint(const PatternExpr& pattern, const TimeScale& scale) {
  std::ostringstream os;
  printPattern(os, pattern, scale);
  return os.str();
}

std::string prettyPrint(const PropertyPtr& property, const TimeScale& scale) {
  std::ostringstream os;
  printProperty(os, property, scale);
  return os.str();
}

std::string prettyPrint(const GcslContract& c, const TimeScale& scale) {
  std::ostringstream os;
  for (const auto& v : c.viewpoints) os << v << ' ';
  os << "contract " << c.name << "\n";
  if (c.assumption) {
    os << "  Assumption: ";
    printProperty(os, c.assumption, scale);
    os << "\n";
  }
  os << "  Goal: ";
  printProperty(os, c.goal, scale);
  os << "\n  Confidence: ";
  double percent = c.confidence * 100.0;
  if (percent == std::floor(percent)) {
    os << formatNumber(percent) << '%';
  } else {
    os << formatNumber(c.confidence);
  }
  os << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

bool structurallyEqual(const PatternExpr& a, const PatternExpr& b) {
  return a.kind == b.kind && a.count == b.count && a.intervals == b.intervals &&
         structurallyEqual(a.prop, b.prop) && structurallyEqual(a.prop1, b.prop1) &&
         structurallyEqual(a.prop2, b.prop2);
}

bool structurallyEqual(const PropertyPtr& a, const PropertyPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, Quantified>) {
          return x.forAll == y.forAll && x.collection.steps == y.collection.steps &&
                 x.var == y.var && structurallyEqual(x.body, y.body);
        } else if constexpr (std::is_same_v<T, PatternExpr>) {
          return structurallyEqual(x, y);
        } else if constexpr (std::is_same_v<T, OclExprPtr>) {
          return structurallyEqual(x, y);
        } else {
          static_assert(std::is_same_v<T, PropConnective>);
          if (x.conjunction != y.conjunction || x.parts.size() != y.parts.size()) {
            return false;
          }
          for (std::size_t i = 0; i < x.parts.size(); ++i) {
            if (!structurallyEqual(x.parts[i], y.parts[i])) return false;
          }
          return true;
        }
      },
      a->node);
}

bool structurallyEqual(const GcslContract& a, const GcslContract& b) {
  return a.viewpoints == b.viewpoints && a.name == b.name &&
         a.confidence == b.confidence &&
         ((!a.assumption && !b.assumption) ||
          (a.assumption && b.assumption && structurallyEqual(a.assumption, b.assumption))) &&
         structurallyEqual(a.goal, b.goal);
}

// ---------------------------------------------------------------------------
// Diagnostic dump
// ---------------------------------------------------------------------------

namespace {

void dumpOclLine(std::ostream& os, int indent, const char* label, const OclExprPtr& e) {
  if (!e) return;
  os << std::string(indent, ' ') << label << ": " << printOcl(e) << "\n";
}

const char* patternName(PatternKind k) {
  switch (k) {
    case PatternKind::WheneverHoldsDuring: return "whenever-holds-during";
    case PatternKind::ImpliesForever: return "implies-forever";
    case PatternKind::Always: return "always";
    case PatternKind::WheneverHolds: return "whenever-holds";
    case PatternKind::WheneverImpliesDuring: return "whenever-implies-during";
    case PatternKind::WheneverNotDuring: return "whenever-not-during";
    case PatternKind::WheneverWithin: return "whenever-within";
    case PatternKind::OccursRaises: return "occurs-raises";
    case PatternKind::OccursAtMost: return "occurs-at-most";
    case PatternKind::DuringRaises: return "during-raises";
    case PatternKind::DuringImpliesThen: return "during-implies-then";
  }
  return "?";
}

void dumpProperty(std::ostream& os, const PropertyPtr& p, int indent) {
  std::string pad(indent, ' ');
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Quantified>) {
          os << pad << (x.forAll ? "forAll " : "exists ") << x.var << " in "
             << joinSteps(x.collection.steps) << "\n";
          dumpProperty(os, x.body, indent + 2);
        } else if constexpr (std::is_same_v<T, PatternExpr>) {
          os << pad << "pattern " << patternName(x.kind);
          for (const auto& iv : x.intervals) {
            os << " [" << formatNumber(iv.lo) << ", "
               << (iv.hiInfinite ? "+inf" : formatNumber(iv.hi)) << "]";
          }
          if (x.kind == PatternKind::OccursRaises || x.kind == PatternKind::OccursAtMost) {
            os << " n=" << x.count;
          }
          os << "\n";
          dumpOclLine(os, indent + 2, "prop", x.prop);
          dumpOclLine(os, indent + 2, "prop1", x.prop1);
          dumpOclLine(os, indent + 2, "prop2", x.prop2);
        } else if constexpr (std::is_same_v<T, OclExprPtr>) {
          os << pad << "ocl: " << printOcl(x) << "\n";
        } else {
          static_assert(std::is_same_v<T, PropConnective>);
          os << pad << (x.conjunction ? "all-of" : "any-of") << "\n";
          for (const auto& part : x.parts) dumpProperty(os, part, indent + 2);
        }
      },
      p->node);
}

}  // namespace

std::string dumpContract(const GcslContract& c) {
  std::ostringstream os;
  os << "contract " << c.name << "\n";
  os << "  viewpoints:";
  for (const auto& v : c.viewpoints) os << ' ' << v;
  os << "\n";
  os << "  confidence: " << formatNumber(c.confidence) << "\n";
  if (c.assumption) {
    os << "  assumption:\n";
    dumpProperty(os, c.assumption, 4);
  }
  os << "  goal:\n";
  dumpProperty(os, c.goal, 4);
  return os.str();
}

}  // namespace sosmc
