#include <benchmark/benchmark.h>

#include <sstream>
#include <string>

#include "lambdix/bench.hpp"
#include "lambdix/evaluator.hpp"

namespace {

void run_program(benchmark::State& state, const std::string& name, lambdix::Strategy strategy) {
  const auto* program = lambdix::find_program(name);
  if (!program) {
    state.SkipWithError("unknown program");
    return;
  }
  lambdix::Counters last;
  for (auto _ : state) {
    lambdix::Options o;
    o.strategy = strategy;
    std::ostringstream out;
    lambdix::Interpreter in(o, &out);
    in.run_program(program->text, false);
    benchmark::DoNotOptimize(out.str());
    last = in.counters();
  }
  state.counters["closure_calls"] = static_cast<double>(last.closure_calls);
  state.counters["switch_tests"] = static_cast<double>(last.switch_tests);
  state.counters["switch_assignments"] = static_cast<double>(last.switch_assignments);
  state.counters["thunks_created"] = static_cast<double>(last.thunks_created);
  state.counters["thunks_forced"] = static_cast<double>(last.thunks_forced);
}

// Evaluation runs on its own large-stack thread, so CPU time of the calling
// thread means nothing here.
[[maybe_unused]] const bool registered = [] {
  for (const auto& name : lambdix::bench_suite()) {
    for (auto s : {lambdix::Strategy::value, lambdix::Strategy::need}) {
      benchmark::RegisterBenchmark((name + "/" + std::string(lambdix::strategy_name(s))).c_str(),
                                   [name, s](benchmark::State& st) { run_program(st, name, s); })
          ->Unit(benchmark::kMillisecond)
          ->UseRealTime();
    }
  }
  return true;
}();

}  // namespace

BENCHMARK_MAIN();
