#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "lambdix/evaluator.hpp"

using namespace lambdix;
using test::last;
using test::printed;

namespace {

constexpr Strategy kBoth[] = {Strategy::value, Strategy::need};

Counters counters_after(std::string_view program, Strategy s) {
  Options o;
  o.strategy = s;
  o.check_invariants = true;
  std::ostringstream out;
  Interpreter in(o, &out);
  in.run_program(program, true);
  return in.counters();
}

}  // namespace

TEST_CASE("arithmetic, conditionals and closures") {
  for (auto s : kBoth) {
    CHECK(last("(+ 1 (* 2 3))", s) == "value: 7");
    CHECK(last("(if (< 1 2) 'yes 'no)", s) == "value: yes");
    CHECK(last("((lambda (x y) (- x y)) 10 4)", s) == "value: 6");
    CHECK(last("(de (adder n) (lambda (x) (+ x n)))\n((adder 5) 10)", s) == "value: 15");
    CHECK(last("(de (fact n) (if (= n 0) 1 (* n (fact (- n 1)))))\n(fact 20)", s) ==
          "value: 2432902008176640000");
    CHECK(last("(de (f) 42)\n(f)", s) == "value: 42");
  }
}

TEST_CASE("top-level functions are late bound") {
  for (auto s : kBoth) {
    CHECK(last("(de (f x) (g x))\n(de (g x) (* x 2))\n(f 4)", s) == "value: 8");
    CHECK(last("(de (g x) 1)\n(de (f x) (g x))\n(de (g x) 2)\n(f 0)", s) == "value: 2");
  }
}

TEST_CASE("the two strategies differ only on divergent or erroneous arguments") {
  const char* omega = "(de (loop x) (loop x))\n((lambda (x) 1) (loop 0))";
  CHECK(last(omega, Strategy::need) == "value: 1");
  CHECK(last(omega, Strategy::value, 10'000) == "limit");
  const char* bad = "((lambda (x) 1) (car 5))";
  CHECK(last(bad, Strategy::need) == "value: 1");
  CHECK(last(bad, Strategy::value) == "error: type");
}

TEST_CASE("a suspension is evaluated at most once") {
  const char* program = "(de (twice x) (+ x x))\n(twice (print 5))";
  CHECK(printed(program, Strategy::need) == "5\n");
  CHECK(printed(program, Strategy::value) == "5\n");
  CHECK(last(program, Strategy::need) == "value: 10");

  auto c = counters_after("(de (twice x) (+ x x))\n(twice (+ 2 3))", Strategy::need);
  CHECK(c.thunks_created == 1);
  CHECK(c.thunks_forced == 1);
}

TEST_CASE("value definitions under call-by-need are not evaluated until used") {
  CHECK(printed("(de x (print 1))\n(de y (print 2))\n(+ y 0)", Strategy::need) == "2\n");
  CHECK(printed("(de x (print 1))\n(de y (print 2))\n(+ y 0)", Strategy::value) == "1\n2\n");
}

TEST_CASE("cyclic definitions are detected") {
  CHECK(last("(de x x)\nx", Strategy::need) == "error: cyclic");
  CHECK(last("(de x (+ x 1))\nx", Strategy::need) == "error: cyclic");
  CHECK(last("(let ((a (+ b 1)) (b (+ a 1))) a)", Strategy::need) == "error: cyclic");
  // Under call-by-value the definition itself fails, so the name stays unbound.
  CHECK(last("(de x x)", Strategy::value) == "error: cyclic");
  CHECK(last("(de x (+ x 1))", Strategy::value) == "error: cyclic");
  CHECK(last("(de x x)\nx", Strategy::value) == "error: unbound");
  CHECK(last("(let ((a b) (b 1)) a)", Strategy::value) == "error: unbound");
}

TEST_CASE("let bindings see each other and the enclosing scope") {
  for (auto s : kBoth) {
    CHECK(last("(let ((a 1) (b (+ a 1))) (* a b))", s) == "value: 2");
    CHECK(last("(de (f n) (let ((de (even k) (if (= k 0) true (odd (- k 1))))"
               " (de (odd k) (if (= k 0) false (even (- k 1))))) (even n)))\n(f 10)",
               s) == "value: true");
    CHECK(last("(de (f x) (let ((de y (* x 2))) (lambda (z) (+ y z))))\n((f 3) 4)", s) == "value: 10");
  }
  CHECK(last("(let ((ones (cons 1 ones))) (car (cdr (cdr ones))))", Strategy::need) == "value: 1");
}

TEST_CASE("excla evaluates a constructed expression in the current scope") {
  for (auto s : kBoth) {
    CHECK(last("(de (f x) (! (cons '+ (cons 'x (cons 1 ())))))\n(f 41)", s) == "value: 42");
    CHECK(last("(! '(* 6 7))", s) == "value: 42");
    CHECK(last("(excla (quote (car (quote (a b)))))", s) == "value: a");
  }
}

TEST_CASE("errors are reported with their category") {
  for (auto s : kBoth) {
    CHECK(last("nothing", s) == "error: unbound");
    CHECK(last("(1 2)", s) == "error: type");
    CHECK(last("((lambda (x) x))", s) == "error: arity");
    CHECK(last("(car ())", s) == "error: type");
    CHECK(last("(/ 1 0)", s) == "error: arithmetic");
    CHECK(last("(+ 9223372036854775807 1)", s) == "error: arithmetic");
    CHECK(last("(if 1 2 3)", s) == "error: type");
    CHECK(last("(lambda (x x) x)", s) == "error: analysis");
    CHECK(last("(", s) == "error: syntax");
  }
}

TEST_CASE("step and depth limits end a form without ending the session") {
  for (auto s : kBoth) {
    Options o;
    o.strategy = s;
    o.step_limit = 1000;
    o.check_invariants = true;
    std::ostringstream out;
    Interpreter in(o, &out);
    auto outcomes = in.run_program("(de (loop n) (loop (+ n 1)))\n(loop 0)\n(+ 1 2)", true);
    REQUIRE(outcomes.size() == 3);
    CHECK(outcomes[1].summary() == "limit");
    CHECK(outcomes[1].limit == LimitKind::steps);
    CHECK(outcomes[2].summary() == "value: 3");
    CHECK(in.environment().log_depth() == 0);

    Options d;
    d.strategy = s;
    d.depth_limit = 500;
    Interpreter deep(d, &out);
    auto r = deep.run_program("(de (down n) (if (= n 0) 0 (+ 1 (down (- n 1)))))\n(down 400)\n(down 1000)", true);
    CHECK(r[1].summary() == "value: 400");
    CHECK(r[2].summary() == "limit");
    CHECK(r[2].limit == LimitKind::depth);
  }
}

TEST_CASE("deep recursion within the default limits does not overflow the native stack") {
  for (auto s : kBoth) {
    CHECK(last("(de (down n) (if (= n 0) 0 (+ 1 (down (- n 1)))))\n(down 50000)", s) == "value: 50000");
  }
}

TEST_CASE("infinite lists under call-by-need") {
  CHECK(last("(de ones (cons 1 ones))\n(car (cdr (cdr ones)))", Strategy::need) == "value: 1");
  CHECK(last("(de (from n) (cons n (from (+ n 1))))\n(cadr (cdr (from 1)))", Strategy::need) == "value: 3");
}

TEST_CASE("every call of a directly recursive function tests one link") {
  for (auto s : kBoth) {
    Options o;
    o.strategy = s;
    std::ostringstream out;
    Interpreter in(o, &out);
    in.run_program("(de (fib n) (if (< n 2) n (+ (fib (- n 1)) (fib (- n 2)))))", false);
    std::vector<InstallRecord> trace;
    in.environment().set_trace(&trace);
    in.run_program("(fib 10)", false);
    REQUIRE(trace.size() >= 177);
    if (s == Strategy::value) CHECK(trace.size() == 177);
    for (const auto& t : trace) {
      CHECK(t.tests == 1);
      CHECK(t.assignments <= 1);
    }
  }
}
