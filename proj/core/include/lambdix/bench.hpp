#ifndef LAMBDIX_BENCH_HPP
#define LAMBDIX_BENCH_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lambdix/evaluator.hpp"
#include "lambdix/runtime_env.hpp"

namespace lambdix {

struct EmbeddedProgram {
  std::string_view name;
  std::string_view text;
};

// Every programs/*.lx file, compiled in, sorted by name.
const std::vector<EmbeddedProgram>& embedded_programs();
const EmbeddedProgram* find_program(std::string_view name);

// Benchmark suite in report order.
const std::vector<std::string>& bench_suite();

struct BenchResult {
  std::string program;
  Strategy strategy = Strategy::need;
  double median_ms = 0;
  std::vector<double> times_ms;
  Counters counters;  // from the last repetition; runs are deterministic
  std::string output;
  std::string digest;
  OutcomeKind outcome = OutcomeKind::value;
  std::string message;
};

BenchResult run_benchmark(std::string_view program, Strategy strategy, int repetitions, const Options& base = {});

// FNV-1a, 64 bits, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

// Signed percentage by which call-by-need beats call-by-value (negative when
// it is slower), relative to the slower of the two.
double pct_diff(double value_ms, double need_ms);

std::string format_tsv(const std::vector<BenchResult>& results);

}  // namespace lambdix

#endif  // LAMBDIX_BENCH_HPP
