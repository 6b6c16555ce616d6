#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "sosmc/errors.hpp"
#include "sosmc/gcsl_parser.hpp"
#include "sosmc/model_io.hpp"
#include "sosmc/ocl_eval.hpp"
#include "sosmc/report.hpp"
#include "sosmc/simulate.hpp"
#include "sosmc/smc.hpp"
#include "sosmc/translate.hpp"

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitViolated = 1;
constexpr int kExitError = 2;
constexpr int kExitUndecided = 3;

struct CheckArgs {
  std::string modelPath;
  std::string contractPath;
  std::string timeBound;
  std::string mode = "fixed:100";
  std::uint64_t seed = 0;
  int jobs = 1;
  std::size_t maxSamples = 100000;
  std::string format = "text";
  bool simplify = false;
  bool existentialSplit = false;
  bool standardWeakUntil = false;
};

sosmc::VerifyMode parseMode(const std::string& text) {
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "fixed") {
    std::size_t n = std::stoull(rest);
    return sosmc::VerifyMode::fixedN(static_cast<std::int64_t>(n));
  }
  if (kind == "chernoff") {
    auto comma = rest.find(',');
    if (comma == std::string::npos) {
      throw sosmc::Error("chernoff mode needs epsilon,delta (e.g. chernoff:0.01,0.05)");
    }
    double eps = std::stod(rest.substr(0, comma));
    double delta = std::stod(rest.substr(comma + 1));
    return sosmc::VerifyMode::chernoff(eps, delta);
  }
  throw sosmc::Error("unknown mode '" + text + "'; use fixed:N or chernoff:eps,delta");
}

void emitToSink(const std::string& text, const std::string& outPath) {
  if (outPath.empty()) {
    std::cout << text;
  } else {
    sosmc::writeFile(outPath, text);
  }
}

int worstExit(int a, int b) {
  // error(2) dominates, then violated(1), then undecided(3), then holds(0).
  auto rank = [](int code) {
    switch (code) {
      case kExitError: return 3;
      case kExitViolated: return 2;
      case kExitUndecided: return 1;
      default: return 0;
    }
  };
  return rank(a) >= rank(b) ? a : b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GCSL contract verification over system-of-systems models"};
  app.require_subcommand(1);
  app.set_config("--config");

  // parse ------------------------------------------------------------------
  auto* cmdParse = app.add_subcommand("parse", "Parse contracts and dump the AST");
  std::string parseContract, parseModel;
  cmdParse->add_option("--contract", parseContract, "Contract document (.gcsl)")
      ->required();
  cmdParse->add_option("--model", parseModel,
                       "Model supplying the base time unit (.sosm)");

  // translate ----------------------------------------------------------------
  auto* cmdTranslate =
      app.add_subcommand("translate", "Compile contracts to bounded-LTL text");
  std::string trContract, trModel, trBound, trOut;
  bool trSimplify = false, trExistential = false;
  cmdTranslate->add_option("--contract", trContract, "Contract document (.gcsl)")
      ->required();
  cmdTranslate->add_option("--model", trModel, "Model document (.sosm)")->required();
  cmdTranslate
      ->add_option("--time-bound", trBound, "Verification horizon, e.g. 7months")
      ->required();
  cmdTranslate->add_flag("--simplify", trSimplify, "Drop X<=0 wrappers and constants");
  cmdTranslate->add_flag("--existential-split", trExistential,
                         "Procedural split for during/implies/then");
  cmdTranslate->add_option("-o,--output", trOut, "Output file (default stdout)");

  // simulate -----------------------------------------------------------------
  auto* cmdSimulate = app.add_subcommand("simulate", "Run the model once");
  std::string simModel, simHorizon, simOut;
  std::uint64_t simSeed = 0;
  std::size_t simMaxSamples = 100000;
  cmdSimulate->add_option("--model", simModel, "Model document (.sosm)")->required();
  cmdSimulate->add_option("--horizon,--time-bound", simHorizon, "Simulated time span")
      ->required();
  cmdSimulate->add_option("--seed", simSeed, "Random seed")->envname("SOSMC_SEED");
  cmdSimulate->add_option("--max-samples", simMaxSamples, "Livelock guard");
  cmdSimulate->add_option("-o,--output", simOut, "Trace file (default stdout)");

  // monitor ------------------------------------------------------------------
  auto* cmdMonitor = app.add_subcommand("monitor", "Check a formula on a trace");
  std::string monFormula, monTrace, monModel;
  bool monStandardW = false;
  cmdMonitor->add_option("--formula", monFormula, "Formula file (.bltl)")->required();
  cmdMonitor->add_option("--trace", monTrace, "Trace file (.trace)")->required();
  cmdMonitor->add_option("--model", monModel, "Model for collections/refs (.sosm)");
  cmdMonitor->add_flag("--standard-weak-until", monStandardW,
                       "Use G over the left operand in weak until");

  // eval ---------------------------------------------------------------------
  auto* cmdEval = app.add_subcommand("eval", "Evaluate an expression on one sample");
  std::string evalExpr, evalTrace, evalModel;
  std::size_t evalIndex = 0;
  cmdEval->add_option("--expr", evalExpr, "OCL expression")->required();
  cmdEval->add_option("--trace", evalTrace, "Trace file (.trace)")->required();
  cmdEval->add_option("--index", evalIndex, "Sample index")->required();
  cmdEval->add_option("--model", evalModel, "Model for collections/refs (.sosm)");

  // check --------------------------------------------------------------------
  auto* cmdCheck =
      app.add_subcommand("check", "Estimate contract satisfaction probabilities");
  CheckArgs chk;
  cmdCheck->add_option("--model", chk.modelPath, "Model document (.sosm)")->required();
  cmdCheck->add_option("--contract", chk.contractPath, "Contract document (.gcsl)")
      ->required();
  cmdCheck->add_option("--time-bound", chk.timeBound, "Verification horizon")
      ->required();
  cmdCheck->add_option("--mode", chk.mode, "fixed:N or chernoff:eps,delta");
  cmdCheck->add_option("--seed", chk.seed, "Base seed")->envname("SOSMC_SEED");
  cmdCheck->add_option("--jobs", chk.jobs, "Worker threads");
  cmdCheck->add_option("--max-samples", chk.maxSamples, "Per-run livelock guard");
  cmdCheck->add_option("--format", chk.format, "text or records")
      ->check(CLI::IsMember({"text", "records"}));
  cmdCheck->add_flag("--simplify", chk.simplify, "Simplify translated formulas");
  cmdCheck->add_flag("--existential-split", chk.existentialSplit,
                     "Procedural split for during/implies/then");
  cmdCheck->add_flag("--standard-weak-until", chk.standardWeakUntil,
                     "Use G over the left operand in weak until");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*cmdParse) {
      sosmc::TimeScale scale;
      if (!parseModel.empty()) scale = sosmc::loadModelFile(parseModel).scale;
      auto contracts = sosmc::parseContracts(sosmc::readFile(parseContract), scale);
      for (const auto& c : contracts) std::cout << sosmc::dumpContract(c);
      return kExitHolds;
    }

    if (*cmdTranslate) {
      sosmc::SosModel model = sosmc::loadModelFile(trModel);
      double k = sosmc::parseDuration(trBound, model.scale);
      auto contracts = sosmc::parseContracts(sosmc::readFile(trContract), model.scale);
      sosmc::TranslateOptions opts;
      opts.simplify = trSimplify;
      opts.existentialSplit = trExistential;
      std::string out;
      for (const auto& c : contracts) {
        out += sosmc::printBltl(sosmc::translateContract(c, k, model, opts));
        out += "\n";
      }
      emitToSink(out, trOut);
      return kExitHolds;
    }

    if (*cmdSimulate) {
      sosmc::SosModel model = sosmc::loadModelFile(simModel);
      sosmc::SimConfig cfg;
      cfg.seed = simSeed;
      cfg.horizon = sosmc::parseDuration(simHorizon, model.scale);
      cfg.maxSamples = simMaxSamples;
      sosmc::TimedTrace trace = sosmc::simulate(model, cfg);
      emitToSink(sosmc::traceToString(trace), simOut);
      return kExitHolds;
    }

    if (*cmdMonitor) {
      std::optional<sosmc::SosModel> model;
      sosmc::TimeScale scale;
      if (!monModel.empty()) {
        model = sosmc::loadModelFile(monModel);
        scale = model->scale;
      }
      sosmc::BltlPtr formula = sosmc::parseBltl(sosmc::readFile(monFormula), scale);
      sosmc::TimedTrace trace = sosmc::readTraceFile(monTrace);
      sosmc::CheckOptions opts;
      opts.standardWeakUntil = monStandardW;
      sosmc::Verdict v = sosmc::check(formula, trace, model ? &*model : nullptr, opts);
      std::cout << (v.holds ? "holds" : "violated") << "\n";
      if (!v.note.empty()) std::cerr << v.note << "\n";
      return v.holds ? kExitHolds : kExitViolated;
    }

    if (*cmdEval) {
      std::optional<sosmc::SosModel> model;
      sosmc::TimeScale scale;
      if (!evalModel.empty()) {
        model = sosmc::loadModelFile(evalModel);
        scale = model->scale;
      }
      sosmc::OclExprPtr expr = sosmc::parseOclExpr(evalExpr, scale);
      sosmc::TimedTrace trace = sosmc::readTraceFile(evalTrace);
      if (evalIndex >= trace.samples.size()) {
        throw sosmc::Error("sample index " + std::to_string(evalIndex) +
                           " out of range; trace has " +
                           std::to_string(trace.samples.size()) + " samples");
      }
      sosmc::Value v = sosmc::evalValue(expr, trace.samples[evalIndex], {},
                                        model ? &*model : nullptr);
      std::cout << v.toString() << "\n";
      return kExitHolds;
    }

    if (*cmdCheck) {
      sosmc::SosModel model = sosmc::loadModelFile(chk.modelPath);
      double k = sosmc::parseDuration(chk.timeBound, model.scale);
      auto contracts =
          sosmc::parseContracts(sosmc::readFile(chk.contractPath), model.scale);
      sosmc::VerifyMode mode = parseMode(chk.mode);
      sosmc::McOptions mc;
      mc.jobs = chk.jobs;
      mc.maxSamples = chk.maxSamples;
      mc.check.standardWeakUntil = chk.standardWeakUntil;
      sosmc::TranslateOptions tr;
      tr.simplify = chk.simplify;
      tr.existentialSplit = chk.existentialSplit;
      sosmc::ReportFormat format = chk.format == "records"
                                       ? sosmc::ReportFormat::Records
                                       : sosmc::ReportFormat::Text;
      int exitCode = kExitHolds;
      for (const auto& c : contracts) {
        sosmc::Estimate est = sosmc::verifyContract(model, c, k, mode, chk.seed, mc, tr);
        if (format == sosmc::ReportFormat::Text) {
          std::cout << "contract:  " << c.name << "\n"
                    << sosmc::emitReport(est, format) << "\n";
        } else {
          std::cout << "contract " << c.name << "\n" << sosmc::emitReport(est, format);
        }
        int cur = est.verdict == sosmc::EstimateVerdict::Holds ? kExitHolds
                  : est.verdict == sosmc::EstimateVerdict::Violated ? kExitViolated
                                                                    : kExitUndecided;
        exitCode = worstExit(exitCode, cur);
      }
      return exitCode;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
