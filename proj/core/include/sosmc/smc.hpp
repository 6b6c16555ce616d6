#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sosmc/bltl.hpp"
#include "sosmc/bltl_monitor.hpp"
#include "sosmc/gcsl_ast.hpp"
#include "sosmc/model.hpp"
#include "sosmc/translate.hpp"

namespace sosmc {

enum class Relation { Lt, Le, Eq, Ge, Gt };

/// Probabilistic contract: the probability of the formula holding on a
/// random run stands in `rel` to `threshold`.
struct ProbContract {
  BltlPtr formula;
  Relation rel = Relation::Ge;
  double threshold = 0;  // in [0, 1]
};

enum class EstimateVerdict { Holds, Violated, Undecided };

struct Estimate {
  std::int64_t n = 0;
  std::int64_t successes = 0;
  double pHat = 0;
  std::optional<double> epsilon;  // precision, chernoff mode
  std::optional<double> delta;    // confidence parameter, chernoff mode
  EstimateVerdict verdict = EstimateVerdict::Undecided;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> runSeeds;  // derived per-run engine seeds
};

/// Smallest N with Pr(|pHat - p| >= epsilon) <= delta under the additive
/// Chernoff-Hoeffding bound: ceil(ln(2/delta) / (2 epsilon^2)).
std::int64_t chernoffSampleSize(double epsilon, double delta);

/// Verdict of pHat `rel` threshold. Without epsilon the comparison is
/// direct (Eq throws; an estimate is never exactly equal). With epsilon,
/// results within the precision band come out Undecided, and Eq means
/// |pHat - threshold| <= epsilon.
EstimateVerdict decideVerdict(double pHat, Relation rel, double threshold,
                              std::optional<double> epsilon);

struct McOptions {
  int jobs = 1;
  std::size_t maxSamples = 100000;
  CheckOptions check;
};

/// N independent runs: run i simulates with the engine seed
/// deriveRunSeed(seed, i) over horizon k and monitors the formula.
/// pHat = successes / N. Execution order does not affect the result;
/// jobs > 1 distributes runs over a thread pool. Trace-too-short or
/// evaluation faults abort with the offending run seed.
Estimate monteCarlo(const SosModel& model, const ProbContract& contract, double k,
                    std::int64_t n, std::uint64_t seed, const McOptions& options = {});

struct VerifyMode {
  enum class Kind { FixedN, Chernoff };
  Kind kind = Kind::FixedN;
  std::int64_t n = 0;      // FixedN
  double epsilon = 0;      // Chernoff
  double delta = 0;        // Chernoff

  static VerifyMode fixedN(std::int64_t n) { return {Kind::FixedN, n, 0, 0}; }
  static VerifyMode chernoff(double eps, double delta) {
    return {Kind::Chernoff, 0, eps, delta};
  }
};

/// Full pipeline for one contract: translate against the model, estimate
/// by Monte Carlo with N from the mode, and compare pHat >= confidence
/// (the declared confidence is a lower bound on the satisfaction
/// probability).
Estimate verifyContract(const SosModel& model, const GcslContract& contract, double k,
                        const VerifyMode& mode, std::uint64_t seed,
                        const McOptions& options = {},
                        const TranslateOptions& translateOptions = {});

}  // namespace sosmc
