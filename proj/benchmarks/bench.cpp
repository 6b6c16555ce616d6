#include <benchmark/benchmark.h>

#include "sosmc/bltl_monitor.hpp"
#include "sosmc/gcsl_parser.hpp"
#include "sosmc/model_io.hpp"
#include "sosmc/simulate.hpp"
#include "sosmc/smc.hpp"
#include "sosmc/translate.hpp"

namespace {

std::string fixture(const char* name) {
  return std::string(SOSMC_FIXTURES) + "/" + name;
}

const sosmc::SosModel& fireModel() {
  static sosmc::SosModel model = sosmc::loadModelFile(fixture("fire.sosm"));
  return model;
}

void BM_ParseContracts(benchmark::State& state) {
  std::string text = sosmc::readFile(fixture("reqs.gcsl"));
  sosmc::TimeScale days{"day"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sosmc::parseContracts(text, days));
  }
}
BENCHMARK(BM_ParseContracts);

void BM_TranslateQuantifiedContract(benchmark::State& state) {
  const sosmc::SosModel& model = fireModel();
  auto contracts =
      sosmc::parseContracts(sosmc::readFile(fixture("req3.gcsl")), model.scale);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sosmc::translateContract(contracts[0], 210, model));
  }
}
BENCHMARK(BM_TranslateQuantifiedContract);

void BM_SimulateFourMonths(benchmark::State& state) {
  const sosmc::SosModel& model = fireModel();
  sosmc::SimConfig cfg{.seed = 7, .horizon = 120, .maxSamples = 100000};
  for (auto _ : state) {
    cfg.seed += 1;  // fresh stream per iteration
    benchmark::DoNotOptimize(sosmc::simulate(model, cfg));
  }
}
BENCHMARK(BM_SimulateFourMonths);

void BM_MonitorResponseFormula(benchmark::State& state) {
  const sosmc::SosModel& model = fireModel();
  auto contracts =
      sosmc::parseContracts(sosmc::readFile(fixture("req3.gcsl")), model.scale);
  sosmc::BltlPtr formula = sosmc::translateContract(contracts[0], 210, model);
  sosmc::TimedTrace trace =
      sosmc::simulate(model, {.seed = 3, .horizon = 210, .maxSamples = 100000});
  for (auto _ : state) {
    benchmark::DoNotOptimize(sosmc::check(formula, trace, &model));
  }
}
BENCHMARK(BM_MonitorResponseFormula);

void BM_MonteCarloCoin(benchmark::State& state) {
  sosmc::SosModel model = sosmc::loadModelFile(fixture("coin.sosm"));
  sosmc::ProbContract pc{sosmc::parseBltl("F<=1 {coin_1.face = heads}"),
                         sosmc::Relation::Ge, 0.5};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sosmc::monteCarlo(model, pc, 1, 200, ++seed));
  }
}
BENCHMARK(BM_MonteCarloCoin);

}  // namespace

BENCHMARK_MAIN();
