#include "lambdix/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

namespace lambdix {

const EmbeddedProgram* find_program(std::string_view name) {
  for (const auto& p : embedded_programs()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const std::vector<std::string>& bench_suite() {
  static const std::vector<std::string> suite{"fib", "fib2", "tak", "lcomp", "sieve", "lsum"};
  return suite;
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double pct_diff(double value_ms, double need_ms) {
  double slower = std::max(value_ms, need_ms);
  if (slower <= 0) return 0;
  return (value_ms - need_ms) / slower * 100.0;
}

BenchResult run_benchmark(std::string_view program, Strategy strategy, int repetitions, const Options& base) {
  const EmbeddedProgram* source = find_program(program);
  if (!source) throw Error(ErrorCategory::internal, "no such program: " + std::string(program));
  BenchResult r;
  r.program = std::string(program);
  r.strategy = strategy;
  Options options = base;
  options.strategy = strategy;
  for (int i = 0; i < std::max(repetitions, 1); ++i) {
    std::ostringstream out;
    Interpreter interp(options, &out);
    auto start = std::chrono::steady_clock::now();
    std::vector<Outcome> outcomes = interp.run_program(source->text);
    auto stop = std::chrono::steady_clock::now();
    r.times_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    r.counters = interp.counters();
    r.output = out.str();
    r.outcome = OutcomeKind::value;
    r.message.clear();
    for (const auto& o : outcomes) {
      if (o.kind != OutcomeKind::value) {
        r.outcome = o.kind;
        r.message = o.message;
        break;
      }
    }
    if (r.outcome != OutcomeKind::value) break;
  }
  std::vector<double> sorted = r.times_ms;
  std::sort(sorted.begin(), sorted.end());
  std::size_t n = sorted.size();
  r.median_ms = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2;
  r.digest = fnv1a_hex(r.output);
  return r;
}

std::string format_tsv(const std::vector<BenchResult>& results) {
  std::ostringstream out;
  out << "program\tstrategy\tmedian_ms\tswitch_tests\tswitch_assignments\tthunks_created\tthunks_forced\t"
         "blocks_allocated\tdigest\n";
  char ms[32];
  for (const auto& r : results) {
    std::snprintf(ms, sizeof ms, "%.3f", r.median_ms);
    out << r.program << '\t' << strategy_name(r.strategy) << '\t' << ms << '\t' << r.counters.switch_tests << '\t'
        << r.counters.switch_assignments << '\t' << r.counters.thunks_created << '\t' << r.counters.thunks_forced
        << '\t' << r.counters.blocks_allocated << '\t' << r.digest << '\n';
  }
  for (const auto& v : results) {
    if (v.strategy != Strategy::value) continue;
    for (const auto& n : results) {
      if (n.strategy != Strategy::need || n.program != v.program) continue;
      std::snprintf(ms, sizeof ms, "%+.0f", pct_diff(v.median_ms, n.median_ms));
      out << "# " << v.program << " pct_diff " << ms << (v.digest == n.digest ? "" : " (outputs differ)") << '\n';
    }
  }
  for (const auto& r : results) {
    if (r.outcome != OutcomeKind::value) {
      out << "# " << r.program << '/' << strategy_name(r.strategy) << " did not finish: " << r.message << '\n';
    }
  }
  return out.str();
}

}  // namespace lambdix
