#include "sosmc/smc.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "sosmc/errors.hpp"
#include "sosmc/rng.hpp"
#include "sosmc/simulate.hpp"

namespace sosmc {

std::int64_t chernoffSampleSize(double epsilon, double delta) {
  if (!(epsilon > 0 && epsilon < 1)) {
    throw SemanticError("epsilon must lie in (0, 1)");
  }
  if (!(delta > 0 && delta < 1)) {
    throw SemanticError("delta must lie in (0, 1)");
  }
  double n = std::log(2.0 / delta) / (2.0 * epsilon * epsilon);
  return static_cast<std::int64_t>(std::ceil(n));
}

EstimateVerdict decideVerdict(double pHat, Relation rel, double threshold,
                              std::optional<double> epsilon) {
  if (!epsilon) {
    switch (rel) {
      case Relation::Lt: return pHat < threshold ? EstimateVerdict::Holds
                                                 : EstimateVerdict::Violated;
      case Relation::Le: return pHat <= threshold ? EstimateVerdict::Holds
                                                  : EstimateVerdict::Violated;
      case Relation::Ge: return pHat >= threshold ? EstimateVerdict::Holds
                                                  : EstimateVerdict::Violated;
      case Relation::Gt: return pHat > threshold ? EstimateVerdict::Holds
                                                 : EstimateVerdict::Violated;
      case Relation::Eq:
        throw SemanticError(
            "the '=' relation needs a precision; use the chernoff mode");
    }
    return EstimateVerdict::Undecided;
  }
  double eps = *epsilon;
  if (rel == Relation::Eq) {
    return std::abs(pHat - threshold) <= eps ? EstimateVerdict::Holds
                                             : EstimateVerdict::Violated;
  }
  // Within the precision band the estimate cannot separate the sides.
  if (std::abs(pHat - threshold) < eps) return EstimateVerdict::Undecided;
  switch (rel) {
    case Relation::Lt:
    case Relation::Le:
      return pHat < threshold ? EstimateVerdict::Holds : EstimateVerdict::Violated;
    case Relation::Ge:
    case Relation::Gt:
      return pHat > threshold ? EstimateVerdict::Holds : EstimateVerdict::Violated;
    case Relation::Eq: break;
  }
  return EstimateVerdict::Undecided;
}

Estimate monteCarlo(const SosModel& model, const ProbContract& contract, double k,
                    std::int64_t n, std::uint64_t seed, const McOptions& options) {
  if (n < 1) throw SemanticError("sample count must be at least 1");
  if (contract.threshold < 0 || contract.threshold > 1) {
    throw SemanticError("threshold must lie in [0, 1]");
  }

  Estimate est;
  est.n = n;
  est.seed = seed;
  est.runSeeds.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    est.runSeeds[static_cast<std::size_t>(i)] =
        deriveRunSeed(seed, static_cast<std::uint64_t>(i));
  }

  std::atomic<std::int64_t> nextRun{0};
  std::atomic<std::int64_t> successes{0};
  std::mutex failureLock;
  std::exception_ptr failure;

  auto worker = [&]() {
    while (true) {
      std::int64_t i = nextRun.fetch_add(1);
      if (i >= n) return;
      {
        std::lock_guard<std::mutex> hold(failureLock);
        if (failure) return;
      }
      try {
        SimConfig cfg;
        cfg.seed = est.runSeeds[static_cast<std::size_t>(i)];
        cfg.horizon = k;
        cfg.maxSamples = options.maxSamples;
        TimedTrace trace = simulate(model, cfg);
        Verdict v = check(contract.formula, trace, &model, options.check);
        if (v.holds) successes.fetch_add(1);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> hold(failureLock);
        if (!failure) {
          failure = std::make_exception_ptr(
              Error("run " + std::to_string(i) + " (seed " +
                    std::to_string(est.runSeeds[static_cast<std::size_t>(i)]) +
                    ") failed: " + e.what()));
        }
        return;
      }
    }
  };

  int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  est.successes = successes.load();
  est.pHat = static_cast<double>(est.successes) / static_cast<double>(est.n);
  est.verdict = decideVerdict(est.pHat, contract.rel, contract.threshold, est.epsilon);
  return est;
}

Estimate verifyContract(const SosModel& model, const GcslContract& contract, double k,
                        const VerifyMode& mode, std::uint64_t seed,
                        const McOptions& options,
                        const TranslateOptions& translateOptions) {
  ProbContract pc;
  pc.formula = translateContract(contract, k, model, translateOptions);
  pc.rel = Relation::Ge;  // the declared confidence is a lower bound
  pc.threshold = contract.confidence;

  std::int64_t n = 0;
  std::optional<double> epsilon;
  std::optional<double> delta;
  if (mode.kind == VerifyMode::Kind::FixedN) {
    n = mode.n;
  } else {
    n = chernoffSampleSize(mode.epsilon, mode.delta);
    epsilon = mode.epsilon;
    delta = mode.delta;
  }

  Estimate est = monteCarlo(model, pc, k, n, seed, options);
  est.epsilon = epsilon;
  est.delta = delta;
  est.verdict = decideVerdict(est.pHat, pc.rel, pc.threshold, epsilon);
  return est;
}

}  // namespace sosmc
