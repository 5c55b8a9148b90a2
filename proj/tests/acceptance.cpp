// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lambdix/bench.hpp"
#include "lambdix/evaluator.hpp"
#include "lambdix/oracle.hpp"

using namespace lambdix;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const char* id, const char* what, bool ok, const std::string& detail) {
  std::printf("%s %s %s: %s\n", ok ? "PASS" : "FAIL", id, what, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const LambdaStruct* struct_named(Interpreter& in, const std::string& name) {
  for (const auto& s : in.code().structs()) {
    if (s->display_name == name) return s.get();
  }
  return nullptr;
}

// Brute-force references, independent of the interpreter.
std::int64_t fib_ref(int n) {
  std::int64_t a = 0, b = 1;
  for (int i = 0; i < n; ++i) {
    std::int64_t t = a + b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t tak_ref(std::int64_t x, std::int64_t y, std::int64_t z) {
  return y < x ? tak_ref(tak_ref(x - 1, y, z), tak_ref(y - 1, z, x), tak_ref(z - 1, x, y)) : z;
}

std::int64_t nth_prime_ref(int n) {
  int found = 0;
  for (std::int64_t k = 2;; ++k) {
    bool prime = true;
    for (std::int64_t d = 2; d * d <= k; ++d) {
      if (k % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime && ++found == n) return k;
  }
}

void golden() {
  auto t0 = Clock::now();
  int bad = 0;
  std::string first_bad;
  for (const auto& c : oracle::golden_corpus()) {
    auto r = oracle::check_golden(c);
    if (!r.main_ok || !r.oracle_ok) {
      if (!bad++) first_bad = c.name;
    }
  }
  double secs = seconds_since(t0);
  auto n = oracle::golden_corpus().size();
  report("1", "golden corpus", bad == 0 && secs < 5.0,
         std::to_string(n - bad) + "/" + std::to_string(n) + " cases in " + fmt("%.2f s", secs) +
             (bad ? ", first failure " + first_bad : ""));
}

void differential() {
  int mismatches = 0;
  const int count = 200;
  std::string example;
  for (int i = 0; i < count; ++i) {
    auto program = oracle::random_program(42, i);
    for (auto s : {Strategy::value, Strategy::need}) {
      auto r = oracle::differential_run(program, s);
      if (!r.equal && !mismatches++) example = "index " + std::to_string(i) + " " + std::string(strategy_name(s));
    }
  }
  report("2", "differential testing", mismatches == 0,
         std::to_string(count) + " programs x 2 strategies, " + std::to_string(mismatches) + " mismatches" +
             (mismatches ? " (first: " + example + ")" : ""));
}

void self_recursion_cost() {
  bool ok = true;
  std::string detail;
  for (auto s : {Strategy::value, Strategy::need}) {
    Options o;
    o.strategy = s;
    std::ostringstream out;
    Interpreter in(o, &out);
    in.run_program("(de (fib n) (if (< n 2) n (+ (fib (- n 1)) (fib (- n 2)))))", false);
    const LambdaStruct* fib = struct_named(in, "fib");
    std::vector<InstallRecord> trace;
    in.environment().set_trace(&trace);
    auto before = in.counters();
    in.run_program("(fib 15)", false);
    auto d = in.counters() - before;
    std::uint64_t installs = 0, max_tests = 0, max_assign = 0;
    for (const auto& t : trace) {
      if (t.struct_id != fib->id) continue;
      ++installs;
      max_tests = std::max(max_tests, t.tests);
      max_assign = std::max(max_assign, t.assignments);
      if (t.tests != 1 || t.assignments > 1) ok = false;
    }
    if (installs < d.closure_calls) ok = false;
    detail += std::string(strategy_name(s)) + ": " + std::to_string(d.closure_calls) + " calls, " +
              std::to_string(installs) + " installs, max tests " + std::to_string(max_tests) + ", max assignments " +
              std::to_string(max_assign) + "; ";
  }
  report("3a", "self-recursion switch cost", ok, detail);
}

void nested_let_cost() {
  const char* defs =
      "(de (mk a) (let ((de b (+ a 1))) (let ((de c (+ b 1))) (let ((de d (+ c 1)))"
      " (lambda (e) (+ (+ a b) (+ (+ c d) e)))))))\n"
      "(de f (mk 1))\n"
      "f\n";
  // Hand-traced: the closure sits at depth 4, so installing it from the top
  // level tests and assigns all five links.  Under call-by-need the let
  // bindings b, c, d are then forced; each finds its chain already in place.
  struct Expect {
    Strategy s;
    std::vector<InstallRecord> records;
  };
  const std::vector<Expect> expected = {
      {Strategy::value, {{0, 4, 5, 5}}},
      {Strategy::need, {{0, 4, 5, 5}, {0, 1, 1, 0}, {0, 2, 1, 0}, {0, 3, 1, 0}}},
  };
  bool ok = true;
  std::string detail;
  for (const auto& e : expected) {
    Options o;
    o.strategy = e.s;
    o.check_invariants = true;
    std::ostringstream out;
    Interpreter in(o, &out);
    in.run_program(defs, false);
    std::vector<InstallRecord> trace;
    in.environment().set_trace(&trace);
    auto outcome = in.run_program("(f 10)", true);
    bool value_ok = outcome.size() == 1 && outcome[0].summary() == "value: 20";
    bool within = true;
    bool exact = trace.size() == e.records.size();
    std::uint64_t tests = 0, assigns = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      tests += trace[i].tests;
      assigns += trace[i].assignments;
      if (trace[i].tests > static_cast<std::uint64_t>(trace[i].depth + 1)) within = false;
      if (exact) {
        const auto& want = e.records[i];
        exact = trace[i].depth == want.depth && trace[i].tests == want.tests &&
                trace[i].assignments == want.assignments;
      }
    }
    ok = ok && value_ok && within && exact;
    detail += std::string(strategy_name(e.s)) + ": " + std::to_string(trace.size()) + " installs, " +
              std::to_string(tests) + " tests, " + std::to_string(assigns) + " assignments" +
              (exact ? " (as traced)" : " (differs from trace)") + "; ";
  }
  report("3b", "nested-let switch cost", ok, detail);
}

void arity_independence() {
  bool ok = true;
  std::string detail;
  for (auto s : {Strategy::value, Strategy::need}) {
    auto a = run_benchmark("fib", s, 1);
    auto b = run_benchmark("fib2", s, 1);
    bool same = a.counters.closure_calls == b.counters.closure_calls &&
                a.counters.switch_tests == b.counters.switch_tests &&
                a.counters.switch_assignments == b.counters.switch_assignments && a.output == b.output;
    ok = ok && same;
    detail += std::string(strategy_name(s)) + ": fib " + std::to_string(a.counters.switch_tests) + "/" +
              std::to_string(a.counters.switch_assignments) + " fib2 " + std::to_string(b.counters.switch_tests) +
              "/" + std::to_string(b.counters.switch_assignments) + " over " +
              std::to_string(a.counters.closure_calls) + " calls; ";
  }
  report("3c", "arity independence", ok, detail);
}

// Cost of one run of (down n); the global `g` is read once at the bottom.
std::uint64_t descent_cost(Strategy s, std::int64_t n, bool global) {
  Options o;
  o.strategy = s;
  std::ostringstream out;
  Interpreter in(o, &out);
  in.run_program(std::string("(de g 5)\ng\n(de (down n) (if (= n 0) ") + (global ? "g" : "5") +
                     " (down (- n 1))))",
                 false);
  auto before = in.counters();
  auto r = in.run_program("(down " + std::to_string(n) + ")", true);
  if (r.size() != 1 || r[0].summary() != "value: 5") return ~std::uint64_t{0};
  auto d = in.counters() - before;
  return d.lookups + d.switch_tests + d.switch_assignments;
}

void global_lookup_cost() {
  bool ok = true;
  std::string detail;
  for (auto s : {Strategy::value, Strategy::need}) {
    auto shallow = descent_cost(s, 10, true) - descent_cost(s, 10, false);
    auto deep = descent_cost(s, 10'000, true) - descent_cost(s, 10'000, false);
    ok = ok && shallow == deep && shallow > 0;
    detail += std::string(strategy_name(s)) + ": global read costs " + std::to_string(shallow) + " at depth 10, " +
              std::to_string(deep) + " at depth 10000; ";
  }
  report("3d", "global lookup cost", ok, detail);
}

void restore_invariance() {
  int checked_forms = 0;
  int violations = 0;
  for (int i = 0; i < 100; ++i) {
    auto program = oracle::random_program(777, i);
    for (auto s : {Strategy::value, Strategy::need}) {
      Options o;
      o.strategy = s;
      o.step_limit = 5000;
      o.check_invariants = true;
      std::ostringstream out;
      Interpreter in(o, &out);
      std::vector<SourceExpr> forms;
      try {
        forms = read_program(program);
      } catch (const Error&) {
        continue;
      }
      for (const auto& form : forms) {
        auto before = in.environment().snapshot();
        in.run(form, true);
        auto after = in.environment().snapshot();
        ++checked_forms;
        bool same = after.size() >= before.size() && std::equal(before.begin(), before.end(), after.begin());
        for (std::size_t k = before.size(); same && k < after.size(); ++k) {
          same = after[k].block == nullptr && after[k].serial == LambdaStruct::kNoBlock;
        }
        if (!same || in.environment().log_depth() != 0) ++violations;
      }
    }
  }
  report("4", "restore invariance", violations == 0,
         std::to_string(checked_forms) + " top-level forms over 100 programs x 2 strategies, " +
             std::to_string(violations) + " changed links");
}

std::uint64_t leaves_evaluated(Strategy s) {
  Options o;
  o.strategy = s;
  std::ostringstream out;
  Interpreter in(o, &out);
  std::vector<InstallRecord> trace;
  in.environment().set_trace(&trace);
  in.run_program(find_program("lcomp")->text, false);
  const LambdaStruct* leaf = struct_named(in, "leaf");
  if (!leaf || out.str() != "false\n") return ~std::uint64_t{0};
  return std::count_if(trace.begin(), trace.end(), [&](const InstallRecord& t) { return t.struct_id == leaf->id; });
}

void laziness_economics() {
  auto val = run_benchmark("lsum", Strategy::value, 3);
  auto need = run_benchmark("lsum", Strategy::need, 3);
  double forced_share = double(need.counters.thunks_forced) / double(val.counters.thunks_created);
  double speedup = val.median_ms / need.median_ms;
  bool lsum_ok = val.output == need.output && forced_share <= 0.01 && speedup >= 10.0;

  const double leaves = 1024;
  auto lazy_leaves = leaves_evaluated(Strategy::need);
  auto strict_leaves = leaves_evaluated(Strategy::value);
  double leaf_share = double(lazy_leaves) / leaves;
  bool lcomp_ok = strict_leaves == 1024 && leaf_share <= 0.05;

  report("5", "laziness economics", lsum_ok && lcomp_ok,
         "LSum need forced " + std::to_string(need.counters.thunks_forced) + " of " +
             std::to_string(val.counters.thunks_created) + " (" + fmt("%.3f%%", forced_share * 100) + "), " +
             fmt("%.1fx faster", speedup) + "; LComp need evaluated " + std::to_string(lazy_leaves) +
             " of 1024 leaves (" + fmt("%.2f%%", leaf_share * 100) + "), value " + std::to_string(strict_leaves));
}

void laziness_overhead() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"fib", "tak"}) {
    auto val = run_benchmark(name, Strategy::value, 5);
    auto t0 = Clock::now();
    auto need = run_benchmark(name, Strategy::need, 5);
    double ratio = need.median_ms / val.median_ms;
    bool fine = ratio <= 2.5 && need.output == val.output;
    if (std::string(name) == "tak") fine = fine && seconds_since(t0) / 5 < 60.0;
    ok = ok && fine;
    detail += std::string(name) + fmt(" need/value %.2f (%.1f ms / %.1f ms); ", ratio, need.median_ms, val.median_ms);
  }
  report("6", "laziness overhead", ok, detail);
}

void independent_outputs() {
  struct Check {
    const char* program;
    std::string expected;
  };
  const std::vector<Check> checks = {
      {"fib", std::to_string(fib_ref(20)) + "\n"},
      {"tak", std::to_string(tak_ref(18, 12, 6)) + "\n"},
      {"sieve", "400\n" + std::to_string(nth_prime_ref(400)) + "\n"},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : checks) {
    for (auto s : {Strategy::value, Strategy::need}) {
      auto r = run_benchmark(c.program, s, 1);
      if (r.output != c.expected) ok = false;
    }
    std::string shown = c.expected;
    std::replace(shown.begin(), shown.end(), '\n', ' ');
    detail += std::string(c.program) + " = " + shown + "; ";
  }
  report("7", "outputs against brute force", ok, detail);
}

void memo_and_blackholes() {
  Options o;
  std::ostringstream out;
  Interpreter in(o, &out);
  in.run_program("(de (twice x) (+ x x))", false);
  auto before = in.counters();
  auto r = in.run_program("(twice (print 5))", true);
  auto d = in.counters() - before;
  const std::string printed = out.str();
  bool memo = printed == "5\n" && r.size() == 1 && r[0].summary() == "value: 10" && d.thunks_created == 1 &&
              d.thunks_forced == 1;

  bool cyclic = true;
  auto t0 = Clock::now();
  for (auto s : {Strategy::value, Strategy::need}) {
    for (const char* def : {"(de x x)\nx", "(de x (+ x 1))\nx"}) {
      Options c;
      c.strategy = s;
      std::ostringstream sink;
      Interpreter ci(c, &sink);
      auto outcomes = ci.run_program(def, true);
      // Under call-by-value the definition form itself raises the error.
      cyclic = cyclic && std::any_of(outcomes.begin(), outcomes.end(),
                                     [](const Outcome& x) { return x.summary() == "error: cyclic"; });
    }
  }
  double secs = seconds_since(t0);
  report("8", "memoization and blackholes", memo && cyclic && secs < 1.0,
         "argument used twice: printed " + std::to_string(std::count(printed.begin(), printed.end(), '\n')) +
             " time(s), " + std::to_string(d.thunks_created) + " thunk created, " +
             std::to_string(d.thunks_forced) + " forced; cyclic definitions " +
             (cyclic ? "rejected" : "not rejected") + fmt(" in %.3f s", secs));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria = {
      golden,           differential,       self_recursion_cost, nested_let_cost,      arity_independence,
      global_lookup_cost, restore_invariance, laziness_economics,  laziness_overhead, independent_outputs,
      memo_and_blackholes,
  };
  for (const auto& c : criteria) c();
  std::printf("%d failed\n", failures);
  return failures ? 1 : 0;
}
