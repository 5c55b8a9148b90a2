// lambdix: REPL, script runner, differential self-test and benchmarks.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lambdix/bench.hpp"
#include "lambdix/evaluator.hpp"
#include "lambdix/oracle.hpp"

namespace {

enum Exit { kOk = 0, kEvalError = 1, kUsage = 2, kMismatch = 3, kLimit = 4 };

struct Flags {
  std::string strategy = "need";
  bool stats = false;
  std::uint64_t step_limit = 0;
  std::uint64_t depth_limit = 100'000;
  std::size_t print_depth = 100;
  std::uint64_t seed = 42;
  int reps = 5;
  std::string json_path;
};

lambdix::Options options_from(const Flags& f) {
  lambdix::Options o;
  o.strategy = f.strategy == "value" ? lambdix::Strategy::value : lambdix::Strategy::need;
  o.step_limit = f.step_limit;
  o.depth_limit = f.depth_limit;
  o.print.max_elements = f.print_depth;
  return o;
}

void print_stats(const lambdix::Interpreter& interp) {
  for (const auto& [name, value] : interp.counters().to_map()) std::cerr << name << '\t' << value << '\n';
}

void report(const lambdix::Outcome& o) { std::cerr << "** error - " << o.message << " **\n"; }

// True when `text` stops in the middle of an expression.
bool incomplete(const std::string& text) {
  try {
    lambdix::read_program(text);
    return false;
  } catch (const lambdix::Error& e) {
    std::string_view m = e.what();
    return m.starts_with("unbalanced parenthesis") || m.starts_with("unterminated string") ||
           m.starts_with("expected an expression after");
  }
}

int repl(const Flags& flags) {
  lambdix::Interpreter interp(options_from(flags), &std::cout);
  std::string pending;
  std::string line;
  std::cout << "$ " << std::flush;
  while (std::getline(std::cin, line)) {
    pending += line;
    pending += '\n';
    if (incomplete(pending)) continue;
    std::vector<lambdix::SourceExpr> forms;
    try {
      forms = lambdix::read_program(pending);
    } catch (const lambdix::Error& e) {
      std::cout << "** error - " << e.what() << " **\n";
    }
    pending.clear();
    for (const auto& f : forms) {
      lambdix::Outcome o = interp.run(f, true);
      if (o.kind == lambdix::OutcomeKind::value) {
        std::cout << "= " << o.text << '\n';
      } else {
        std::cout << "** error - " << o.message << " **\n";
      }
    }
    if (flags.stats) print_stats(interp);
    std::cout << "$ " << std::flush;
  }
  std::cout << '\n';
  return kOk;
}

int run_file(const Flags& flags, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "lambdix: cannot read " << path << '\n';
    return kEvalError;
  }
  std::ostringstream text;
  text << in.rdbuf();
  lambdix::Interpreter interp(options_from(flags), &std::cout);
  std::vector<lambdix::SourceExpr> forms;
  try {
    forms = lambdix::read_program(text.str());
  } catch (const lambdix::Error& e) {
    std::cerr << "** error - " << e.what() << " **\n";
    return kEvalError;
  }
  int status = kOk;
  for (const auto& f : forms) {
    lambdix::Outcome o = interp.run(f, false);
    if (o.kind != lambdix::OutcomeKind::value) {
      report(o);
      status = o.kind == lambdix::OutcomeKind::limit_exceeded ? kLimit : kEvalError;
      break;
    }
  }
  std::cout << std::flush;
  if (flags.stats) print_stats(interp);
  return status;
}

int selftest(const Flags& flags, int count) {
  int failures = 0;
  for (const auto& c : lambdix::oracle::golden_corpus()) {
    auto r = lambdix::oracle::check_golden(c);
    bool ok = r.main_ok && r.oracle_ok;
    std::cout << (ok ? "ok   " : "FAIL ") << "golden " << c.name << " [" << lambdix::strategy_name(c.strategy)
              << "]\n";
    if (!ok) {
      ++failures;
      std::cout << "  expected: " << c.expected << "\n  main:\n" << r.main_transcript << "  oracle:\n"
                << r.oracle_transcript;
    }
  }
  int matches = 0;
  for (int i = 0; i < count; ++i) {
    std::string program = lambdix::oracle::random_program(flags.seed, static_cast<std::uint64_t>(i));
    bool ok = true;
    for (auto s : {lambdix::Strategy::value, lambdix::Strategy::need}) {
      auto r = lambdix::oracle::differential_run(program, s, 5000, flags.depth_limit);
      if (!r.equal) {
        ok = false;
        std::cout << "MISMATCH seed " << flags.seed << " index " << i << " [" << lambdix::strategy_name(s)
                  << "]\n" << program << "--- main\n" << r.main_transcript << "--- oracle\n"
                  << r.oracle_transcript;
      }
    }
    if (ok) ++matches;
  }
  std::cout << "random: " << matches << "/" << count << " programs agree (seed " << flags.seed << ")\n";
  failures += count - matches;
  return failures == 0 ? kOk : kMismatch;
}

nlohmann::json counters_json(const lambdix::Counters& c) {
  nlohmann::json j;
  for (const auto& [name, value] : c.to_map()) j[name] = value;
  return j;
}

int bench(const Flags& flags, std::vector<std::string> programs, bool both) {
  if (programs.empty()) programs = lambdix::bench_suite();
  std::vector<lambdix::Strategy> strategies;
  if (both) {
    strategies = {lambdix::Strategy::value, lambdix::Strategy::need};
  } else {
    strategies = {options_from(flags).strategy};
  }
  for (const auto& p : programs) {
    if (!lambdix::find_program(p)) {
      std::cerr << "lambdix: unknown program " << p << '\n';
      return kUsage;
    }
  }
  std::vector<lambdix::BenchResult> results;
  for (const auto& p : programs) {
    for (auto s : strategies) results.push_back(lambdix::run_benchmark(p, s, flags.reps, options_from(flags)));
  }
  std::cout << lambdix::format_tsv(results);
  if (!flags.json_path.empty()) {
    nlohmann::json doc;
    doc["reps"] = flags.reps;
    for (const auto& r : results) {
      doc["results"].push_back({{"program", r.program},
                                {"strategy", std::string(lambdix::strategy_name(r.strategy))},
                                {"median_ms", r.median_ms},
                                {"times_ms", r.times_ms},
                                {"switch_tests", r.counters.switch_tests},
                                {"switch_assignments", r.counters.switch_assignments},
                                {"thunks_created", r.counters.thunks_created},
                                {"thunks_forced", r.counters.thunks_forced},
                                {"blocks_allocated", r.counters.blocks_allocated},
                                {"digest", r.digest},
                                {"counters", counters_json(r.counters)},
                                {"output", r.output},
                                {"finished", r.outcome == lambdix::OutcomeKind::value}});
    }
    for (const auto& v : results) {
      for (const auto& n : results) {
        if (v.program == n.program && v.strategy == lambdix::Strategy::value &&
            n.strategy == lambdix::Strategy::need) {
          doc["summary"].push_back({{"program", v.program},
                                    {"pct_diff", lambdix::pct_diff(v.median_ms, n.median_ms)},
                                    {"same_output", v.digest == n.digest}});
        }
      }
    }
    std::ofstream out(flags.json_path);
    if (!out) {
      std::cerr << "lambdix: cannot write " << flags.json_path << '\n';
      return kEvalError;
    }
    out << doc.dump(2) << '\n';
  }
  for (const auto& r : results) {
    if (r.outcome == lambdix::OutcomeKind::limit_exceeded) return kLimit;
    if (r.outcome == lambdix::OutcomeKind::error) return kEvalError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lambdix interpreter"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  app.add_option("--strategy", flags.strategy, "Evaluation strategy")
      ->check(CLI::IsMember({"value", "need"}));
  app.add_flag("--stats", flags.stats, "Print counters to stderr");
  app.add_option("--step-limit", flags.step_limit, "Closure applications allowed per top-level form (0: none)");
  app.add_option("--depth-limit", flags.depth_limit, "Maximum nesting of calls and forcings")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{10'000'000}));
  app.add_option("--print-depth", flags.print_depth, "Elements printed per list")->check(CLI::PositiveNumber);
  app.add_option("--seed", flags.seed, "Random program seed");
  app.add_option("--reps", flags.reps, "Benchmark repetitions")->check(CLI::PositiveNumber);
  app.add_option("--json", flags.json_path, "Write benchmark results as JSON");

  auto* repl_cmd = app.add_subcommand("repl", "Interactive session");
  std::string path;
  auto* run_cmd = app.add_subcommand("run", "Evaluate a file");
  run_cmd->add_option("file", path, "Program file")->required();
  int count = 200;
  auto* self_cmd = app.add_subcommand("selftest", "Golden corpus and random differential tests");
  self_cmd->add_option("count", count, "Random programs to compare")->check(CLI::PositiveNumber);
  std::vector<std::string> programs;
  bool both = false;
  auto* bench_cmd = app.add_subcommand("bench", "Run the benchmark suite");
  bench_cmd->add_option("programs", programs, "Programs to run (default: the whole suite)");
  bench_cmd->add_flag("--both", both, "Run each program under both strategies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*repl_cmd) return repl(flags);
    if (*run_cmd) return run_file(flags, path);
    if (*self_cmd) return selftest(flags, count);
    if (*bench_cmd) return bench(flags, programs, both);
  } catch (const std::exception& e) {
    std::cerr << "lambdix: " << e.what() << '\n';
    return kEvalError;
  }
  return kUsage;
}
